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

// rpcs: validate, run and batch-run navigation scenarios.
//
//   rpcs validate <file>
//   rpcs run <file> --out <dir> [--render]
//   rpcs batch <glob> --out <dir> [--workers N] [--render]
//
// Exit codes: 0 success, 1 usage, 2 invalid scenario, 3 episode failure,
// 4 I/O error.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "rpcs/runner.hpp"
#include "rpcs/scenario.hpp"

namespace {

int Validate(const std::string& path) {
  auto scenario = rpcs::LoadScenario(path);
  if (!scenario.ok()) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(),
                 std::string(scenario.status().message()).c_str());
    return rpcs::ExitCodeFor(scenario.status());
  }
  std::printf("%s: ok (%zu obstacles)\n", path.c_str(),
              scenario->env.obstacles.size());
  return rpcs::kExitSuccess;
}

int Run(const std::string& path, const std::string& out, bool render) {
  rpcs::FileRunResult r = rpcs::RunScenarioFile(path, out, render);
  if (!r.output.has_value()) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), r.message.c_str());
    return r.code;
  }
  const rpcs::Metrics& m = r.output->summary;
  std::printf("%s: %s", path.c_str(), r.message.c_str());
  if (!r.output->log.detail.empty()) {
    std::printf(" (%s)", r.output->log.detail.c_str());
  }
  std::printf(" length=%.17g effort=%.17g t=%.17g replans=%zu\n",
              m.trajectory_length, m.control_effort,
              r.output->log.steps.back().t, r.output->log.replans.size());
  return r.code;
}

int Batch(const std::string& pattern, const std::string& out, int workers,
          bool render) {
  auto rows = rpcs::RunBatch(pattern, out, workers, render);
  if (!rows.ok()) {
    std::fprintf(stderr, "batch: %s\n",
                 std::string(rows.status().message()).c_str());
    return rows.status().code() == absl::StatusCode::kInvalidArgument
               ? rpcs::kExitUsage
               : rpcs::kExitIoError;
  }
  int failures = 0;
  for (const rpcs::BatchRow& row : *rows) {
    std::printf("%-24s %s\n", row.scenario.c_str(), row.status.c_str());
    failures += row.code != rpcs::kExitSuccess;
  }
  std::printf("%zu scenarios, %d failed; summary in %s/summary.csv\n",
              rows->size(), failures, out.c_str());
  return failures == 0 ? rpcs::kExitSuccess : rpcs::kExitEpisodeFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reactive planning and waypoint tracking for a unicycle robot"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("file", validate_path, "Scenario file")->required();

  std::string run_path;
  std::string run_out;
  bool run_render = false;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("file", run_path, "Scenario file")->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_flag("--render", run_render, "Also write render.svg");

  std::string batch_glob;
  std::string batch_out;
  int workers = 1;
  bool batch_render = false;
  auto* batch = app.add_subcommand("batch", "Run every matching scenario");
  batch->add_option("glob", batch_glob, "Scenario file pattern")->required();
  batch->add_option("--out", batch_out, "Output directory")->required();
  batch->add_option("--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  batch->add_flag("--render", batch_render, "Also write render.svg files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rpcs::kExitUsage;
  }
  if (*validate) return Validate(validate_path);
  if (*run) return Run(run_path, run_out, run_render);
  return Batch(batch_glob, batch_out, workers, batch_render);
}
