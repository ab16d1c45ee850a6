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
/// Episode artifacts: trajectory CSV, events/metrics/plot JSON and an SVG
/// overlay. All numbers are written with 17 significant digits.

#ifndef RPCS_IO_HPP_
#define RPCS_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "rpcs/geometry.hpp"
#include "rpcs/scenario.hpp"
#include "rpcs/sim.hpp"
#include "rpcs/trajectory.hpp"

namespace rpcs {

inline std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes `contents` to a sibling temporary file and renames it over `path`.
inline absl::Status WriteFileAtomic(const std::filesystem::path& path,
                                    absl::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot open ", tmp.string(), " for writing"));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("write to ", tmp.string(), " failed"));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return absl::UnavailableError(absl::StrCat(
        "cannot rename ", tmp.string(), " to ", path.string()));
  }
  return absl::OkStatus();
}

inline constexpr absl::string_view kTrajectoryHeader =
    "t,x,y,theta,v,w,cursor";

inline std::string TrajectoryCsv(const EpisodeLog& log) {
  std::string out = absl::StrCat(kTrajectoryHeader, "\n");
  for (const StepRecord& r : log.steps) {
    absl::StrAppend(&out, FormatDouble(r.t), ",", FormatDouble(r.state.p.x),
                    ",", FormatDouble(r.state.p.y), ",",
                    FormatDouble(r.state.theta), ",", FormatDouble(r.u.v),
                    ",", FormatDouble(r.u.w), ",", r.cursor, "\n");
  }
  return out;
}

// Inverse of TrajectoryCsv; the step length is not stored in the file.
inline absl::StatusOr<EpisodeLog> ParseTrajectoryCsv(absl::string_view text,
                                                     double dt) {
  EpisodeLog log;
  log.dt = dt;
  bool header = true;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      if (line != kTrajectoryHeader) {
        return absl::InvalidArgumentError("unexpected trajectory header");
      }
      header = false;
      continue;
    }
    std::vector<std::string> f = absl::StrSplit(line, ',');
    if (f.size() != 7) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected 7 fields"));
    }
    StepRecord r;
    try {
      r.t = std::stod(f[0]);
      r.state.p = {std::stod(f[1]), std::stod(f[2])};
      r.state.theta = std::stod(f[3]);
      r.u = {std::stod(f[4]), std::stod(f[5])};
      r.cursor = std::stoul(f[6]);
    } catch (const std::exception&) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed number"));
    }
    log.steps.push_back(r);
  }
  return log;
}

namespace internal {

using Json = nlohmann::json;

inline Json PointJson(Point2 p) { return Json::array({p.x, p.y}); }

inline std::vector<Point2> Outline(const ConvexRegion& region) {
  if (const Disc* d = region.disc()) {
    std::vector<Point2> out;
    constexpr int kSamples = 64;
    for (int i = 0; i < kSamples; ++i) {
      const double a = 2.0 * std::numbers::pi * i / kSamples;
      out.push_back(d->center +
                    d->radius * Point2{std::cos(a), std::sin(a)});
    }
    return out;
  }
  return region.polygon()->vertices;
}

inline Json OutlineJson(const std::vector<Point2>& points) {
  Json out = Json::array();
  for (Point2 p : points) out.push_back(PointJson(p));
  return out;
}

// Samples each piece in the global frame, at least every 0.1 along x.
inline std::vector<std::vector<Point2>> SampledPieces(
    const RefTrajectory& traj, const Frame& frame) {
  std::vector<std::vector<Point2>> out;
  for (const TrajectoryPiece& piece : traj.pieces()) {
    const int n = std::max(
        1, static_cast<int>(std::ceil(piece.span.length() / 0.1)));
    std::vector<Point2> pts;
    for (int i = 0; i <= n; ++i) {
      const double x =
          i == n ? piece.EndX()
                 : piece.StartX() + (piece.EndX() - piece.StartX()) * i / n;
      pts.push_back(frame.ToGlobal({x, piece.Value(x)}));
    }
    out.push_back(std::move(pts));
  }
  return out;
}

}  // namespace internal

inline std::string EventsJson(const ScenarioConfig& scenario,
                              const EpisodeLog& log) {
  using internal::Json;
  using internal::PointJson;
  Json replans = Json::array();
  for (const ReplanRecord& r : log.replans) {
    const TurnAnchors& a = r.event.anchors;
    replans.push_back({
        {"t", r.t},
        {"obstacle_id", r.event.obstacle_id},
        {"beta", r.event.beta},
        {"rho", r.event.rho},
        {"delta", r.event.delta},
        {"piece_count", r.event.piece_count},
        {"anchors_local",
         {{"a", PointJson(a.a)},
          {"b", PointJson(a.b)},
          {"c", PointJson(a.c)},
          {"d", PointJson(a.d)}}},
        {"anchors_global",
         {{"a", PointJson(log.frame.ToGlobal(a.a))},
          {"b", PointJson(log.frame.ToGlobal(a.b))},
          {"c", PointJson(log.frame.ToGlobal(a.c))},
          {"d", PointJson(log.frame.ToGlobal(a.d))}}},
        {"wall_time_s", r.wall_time_s},
    });
  }
  Json sensed = Json::array();
  for (const SenseRecord& s : log.sensed) {
    sensed.push_back({{"t", s.t}, {"obstacle_id", s.obstacle_id}});
  }
  Json doc = {
      {"scenario", scenario.name},
      {"outcome", std::string(OutcomeName(log.outcome))},
      {"detail", log.detail},
      {"frame",
       {{"origin", PointJson(log.frame.origin())},
        {"angle", log.frame.angle()}}},
      {"sensed", sensed},
      {"replans", replans},
  };
  return doc.dump(2) + "\n";
}

inline std::string MetricsJson(const ScenarioConfig& scenario,
                               const EpisodeLog& log, const Metrics& m) {
  internal::Json doc = {
      {"scenario", scenario.name},
      {"outcome", std::string(OutcomeName(log.outcome))},
      {"success", m.success},
      {"control_effort", m.control_effort},
      {"trajectory_length", m.trajectory_length},
      {"completion_time_s", m.completion_time_s},
      {"planning_time_s", m.planning_time_s},
      {"total_time_s", m.total_time_s},
      {"steps", log.steps.size()},
      {"replans", log.replans.size()},
      {"min_clearance",
       std::isfinite(log.min_clearance) ? internal::Json(log.min_clearance)
                                        : internal::Json(nullptr)},
  };
  return doc.dump(2) + "\n";
}

// Coordinate series for plotting, all in the global frame.
inline std::string PlotJson(const ScenarioConfig& scenario,
                            const EpisodeLog& log) {
  using internal::Json;
  Json obstacles = Json::array();
  for (const auto& [id, region] : scenario.env.obstacles) {
    Json o = {{"id", id},
              {"outline", internal::OutlineJson(internal::Outline(region))}};
    if (const Disc* d = region.disc()) {
      o["disc"] = {{"center", internal::PointJson(d->center)},
                   {"radius", d->radius}};
    }
    obstacles.push_back(std::move(o));
  }
  Json enlarged = Json::array();
  for (const auto& [id, e] : log.enlarged) {
    std::vector<Point2> pts;
    for (Point2 p : internal::Outline(e.boundary)) {
      pts.push_back(log.frame.ToGlobal(p));
    }
    enlarged.push_back({{"id", id}, {"outline", internal::OutlineJson(pts)}});
  }
  Json reference = Json::array();
  const auto sampled = internal::SampledPieces(log.trajectory, log.frame);
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const TrajectoryPiece& piece = log.trajectory.piece(i);
    reference.push_back(
        {{"kind", std::string(PieceKindName(piece.kind))},
         {"traversal", piece.forward() ? "forward" : "backward"},
         {"points", internal::OutlineJson(sampled[i])}});
  }
  Json xs = Json::array();
  Json ys = Json::array();
  for (const StepRecord& r : log.steps) {
    xs.push_back(r.state.p.x);
    ys.push_back(r.state.p.y);
  }
  Json doc = {
      {"scenario", scenario.name},
      {"start", internal::PointJson(scenario.episode.start)},
      {"goal", internal::PointJson(scenario.episode.goal)},
      {"robot_radius", scenario.env.robot_radius},
      {"obstacles", obstacles},
      {"enlarged", enlarged},
      {"reference", reference},
      {"robot", {{"x", xs}, {"y", ys}}},
  };
  return doc.dump(2) + "\n";
}

// Static overlay of obstacles, enlarged regions, reference path and robot
// path.
inline std::string RenderSvg(const ScenarioConfig& scenario,
                             const EpisodeLog& log) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  auto extend = [&](Point2 p) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  };
  extend(scenario.episode.start);
  extend(scenario.episode.goal);
  std::vector<std::vector<Point2>> obstacles;
  for (const auto& [id, region] : scenario.env.obstacles) {
    obstacles.push_back(internal::Outline(region));
  }
  std::vector<std::vector<Point2>> enlarged;
  for (const auto& [id, e] : log.enlarged) {
    std::vector<Point2> pts;
    for (Point2 p : internal::Outline(e.boundary)) {
      pts.push_back(log.frame.ToGlobal(p));
    }
    enlarged.push_back(std::move(pts));
  }
  const auto reference = internal::SampledPieces(log.trajectory, log.frame);
  using Outlines = std::vector<std::vector<Point2>>;
  for (const Outlines* group :
       std::initializer_list<const Outlines*>{&obstacles, &enlarged,
                                              &reference}) {
    for (const auto& pts : *group) {
      for (Point2 p : pts) extend(p);
    }
  }
  for (const StepRecord& r : log.steps) extend(r.state.p);
  const double pad = 1.0;
  lo_x -= pad;
  lo_y -= pad;
  hi_x += pad;
  hi_y += pad;

  auto points = [](const std::vector<Point2>& pts) {
    std::string s;
    for (Point2 p : pts) {
      absl::StrAppend(&s, s.empty() ? "" : " ", FormatDouble(p.x), ",",
                      FormatDouble(p.y));
    }
    return s;
  };
  const double w = hi_x - lo_x;
  const double h = hi_y - lo_y;
  std::string svg = absl::StrCat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 ",
      FormatDouble(w), " ", FormatDouble(h), "\" width=\"",
      FormatDouble(40.0 * w), "\" height=\"", FormatDouble(40.0 * h),
      "\">\n<g transform=\"matrix(1 0 0 -1 ", FormatDouble(-lo_x), " ",
      FormatDouble(hi_y), ")\" stroke-width=\"0.05\">\n");
  for (const auto& pts : enlarged) {
    absl::StrAppend(&svg, "<polygon points=\"", points(pts),
                    "\" fill=\"none\" stroke=\"#999\" "
                    "stroke-dasharray=\"0.2 0.1\"/>\n");
  }
  for (const auto& pts : obstacles) {
    absl::StrAppend(&svg, "<polygon points=\"", points(pts),
                    "\" fill=\"#555\" stroke=\"none\"/>\n");
  }
  for (const auto& pts : reference) {
    absl::StrAppend(&svg, "<polyline points=\"", points(pts),
                    "\" fill=\"none\" stroke=\"#1f77b4\"/>\n");
  }
  std::vector<Point2> path;
  for (const StepRecord& r : log.steps) path.push_back(r.state.p);
  absl::StrAppend(&svg, "<polyline points=\"", points(path),
                  "\" fill=\"none\" stroke=\"#d62728\"/>\n");
  for (Point2 p : {scenario.episode.start, scenario.episode.goal}) {
    absl::StrAppend(&svg, "<circle cx=\"", FormatDouble(p.x), "\" cy=\"",
                    FormatDouble(p.y), "\" r=\"0.2\" fill=\"#2ca02c\"/>\n");
  }
  absl::StrAppend(&svg, "</g>\n</svg>\n");
  return svg;
}

}  // namespace rpcs

#endif  // RPCS_IO_HPP_
