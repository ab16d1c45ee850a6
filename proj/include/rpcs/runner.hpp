// Copyright 2026 The RPCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// Running scenario files and writing their artifacts, singly or in batches.

#ifndef RPCS_RUNNER_HPP_
#define RPCS_RUNNER_HPP_

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "rpcs/io.hpp"
#include "rpcs/scenario.hpp"
#include "rpcs/sim.hpp"
#include "rpcs/status_macros.hpp"

namespace rpcs {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitInvalidScenario = 2,
  kExitEpisodeFailed = 3,
  kExitIoError = 4,
};

struct RunOutput {
  std::filesystem::path trajectory;
  std::filesystem::path events;
  std::filesystem::path metrics;
  std::filesystem::path plot;
  // Empty unless rendering was requested.
  std::filesystem::path render;
  EpisodeLog log;
  Metrics summary;
};

// Runs the episode and writes trajectory.csv, events.json, metrics.json,
// plot.json and optionally render.svg into `out_dir`. Episode failures are
// reported through the log, not the status.
inline absl::StatusOr<RunOutput> RunScenario(
    const ScenarioConfig& scenario, const std::filesystem::path& out_dir,
    bool render) {
  RPCS_ASSIGN_OR_RETURN(EpisodeLog log,
                        RunEpisode(scenario.env, scenario.episode));
  RPCS_ASSIGN_OR_RETURN(Metrics metrics, ComputeMetrics(log));
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create ", out_dir.string(), ": ", ec.message()));
  }
  RunOutput out;
  out.trajectory = out_dir / "trajectory.csv";
  out.events = out_dir / "events.json";
  out.metrics = out_dir / "metrics.json";
  out.plot = out_dir / "plot.json";
  RPCS_RETURN_IF_ERROR(WriteFileAtomic(out.trajectory, TrajectoryCsv(log)));
  RPCS_RETURN_IF_ERROR(
      WriteFileAtomic(out.events, EventsJson(scenario, log)));
  RPCS_RETURN_IF_ERROR(
      WriteFileAtomic(out.metrics, MetricsJson(scenario, log, metrics)));
  RPCS_RETURN_IF_ERROR(WriteFileAtomic(out.plot, PlotJson(scenario, log)));
  if (render) {
    out.render = out_dir / "render.svg";
    RPCS_RETURN_IF_ERROR(
        WriteFileAtomic(out.render, RenderSvg(scenario, log)));
  }
  out.log = std::move(log);
  out.summary = metrics;
  return out;
}

inline ExitCode ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitSuccess;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
      return kExitInvalidScenario;
    default:
      return kExitIoError;
  }
}

struct FileRunResult {
  ExitCode code = kExitSuccess;
  // Outcome name or error message.
  std::string message;
  std::optional<RunOutput> output;
};

inline FileRunResult RunScenarioFile(const std::string& path,
                                     const std::filesystem::path& out_dir,
                                     bool render) {
  FileRunResult result;
  auto scenario = LoadScenario(path);
  if (!scenario.ok()) {
    result.code = ExitCodeFor(scenario.status());
    result.message = std::string(scenario.status().message());
    return result;
  }
  auto output = RunScenario(*scenario, out_dir, render);
  if (!output.ok()) {
    result.code = ExitCodeFor(output.status());
    result.message = std::string(output.status().message());
    return result;
  }
  result.code =
      output->log.success() ? kExitSuccess : kExitEpisodeFailed;
  result.message = std::string(OutcomeName(output->log.outcome));
  result.output = std::move(output).value();
  return result;
}

// Sorted paths matching a glob(3) pattern.
inline absl::StatusOr<std::vector<std::string>> ExpandGlob(
    const std::string& pattern) {
  glob_t g{};
  const int rc = glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.push_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) {
    return absl::UnavailableError(absl::StrCat("glob failed on ", pattern));
  }
  if (out.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("no scenario matches ", pattern));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct BatchRow {
  std::string scenario;
  std::string path;
  ExitCode code = kExitSuccess;
  std::string status;
  Metrics metrics;
};

inline std::filesystem::path BatchScenarioDir(
    const std::filesystem::path& out_dir, const std::string& path) {
  return out_dir / std::filesystem::path(path).stem();
}

inline std::string SummaryCsv(const std::vector<BatchRow>& rows) {
  std::string out =
      "scenario,status,success,trajectory_length,control_effort,"
      "planning_time_s\n";
  for (const BatchRow& r : rows) {
    absl::StrAppend(&out, r.scenario, ",", r.status, ",",
                    r.metrics.success ? 1 : 0, ",",
                    FormatDouble(r.metrics.trajectory_length), ",",
                    FormatDouble(r.metrics.control_effort), ",",
                    FormatDouble(r.metrics.planning_time_s), "\n");
  }
  return out;
}

// Runs every matching scenario on `workers` threads, writing each one's
// artifacts to out_dir/<file stem>/ and the table to out_dir/summary.csv.
// Rows follow the sorted path order whatever the worker count.
inline absl::StatusOr<std::vector<BatchRow>> RunBatch(
    const std::string& pattern, const std::filesystem::path& out_dir,
    int workers, bool render = false) {
  if (workers < 1) {
    return absl::InvalidArgumentError("worker count must be >= 1");
  }
  RPCS_ASSIGN_OR_RETURN(std::vector<std::string> paths, ExpandGlob(pattern));
  std::set<std::string> stems;
  for (const std::string& p : paths) {
    const std::string stem = std::filesystem::path(p).stem().string();
    if (!stems.insert(stem).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("two scenarios share the name ", stem));
    }
  }
  std::vector<BatchRow> rows(paths.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      BatchRow& row = rows[i];
      row.path = paths[i];
      row.scenario = std::filesystem::path(paths[i]).stem().string();
      FileRunResult r =
          RunScenarioFile(paths[i], BatchScenarioDir(out_dir, paths[i]),
                          render);
      row.code = r.code;
      if (r.output.has_value()) {
        row.status = r.message;
      } else {
        row.status = r.code == kExitInvalidScenario ? "invalid-scenario"
                                                    : "io-error";
      }
      if (r.output.has_value()) row.metrics = r.output->summary;
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(workers, static_cast<int>(paths.size()));
  for (int i = 0; i < n; ++i) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", out_dir.string()));
  }
  RPCS_RETURN_IF_ERROR(
      WriteFileAtomic(out_dir / "summary.csv", SummaryCsv(rows)));
  return rows;
}

}  // namespace rpcs

#endif  // RPCS_RUNNER_HPP_
