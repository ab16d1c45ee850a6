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
/// Scenario files: JSON with // and /* */ comments. Every key is optional
/// except start, goal and the obstacle geometry; see README.md for the schema.

#ifndef RPCS_SCENARIO_HPP_
#define RPCS_SCENARIO_HPP_

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "rpcs/geometry.hpp"
#include "rpcs/planner.hpp"
#include "rpcs/sim.hpp"
#include "rpcs/status_macros.hpp"

namespace rpcs {

struct ScenarioConfig {
  std::string name;
  Environment env;
  EpisodeConfig episode;
};

namespace internal {

using Json = nlohmann::json;

inline absl::Status CheckKeys(const Json& obj, absl::string_view where,
                              std::initializer_list<absl::string_view> allowed) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected an object"));
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (absl::string_view a : allowed) known = known || key == a;
    if (!known) {
      return absl::InvalidArgumentError(absl::StrCat(
          where, ": unknown key \"", key, "\" (allowed: ",
          absl::StrJoin(allowed, ", "), ")"));
    }
  }
  return absl::OkStatus();
}

inline absl::StatusOr<double> Number(const Json& j, absl::string_view where) {
  if (!j.is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected a number"));
  }
  return j.get<double>();
}

inline absl::StatusOr<int> Integer(const Json& j, absl::string_view where) {
  if (!j.is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected an integer"));
  }
  return j.get<int>();
}

inline absl::StatusOr<std::pair<double, double>> Pair(const Json& j,
                                                      absl::string_view where) {
  if (!j.is_array() || j.size() != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected [a, b]"));
  }
  RPCS_ASSIGN_OR_RETURN(double a, Number(j[0], where));
  RPCS_ASSIGN_OR_RETURN(double b, Number(j[1], where));
  return std::pair{a, b};
}

inline absl::StatusOr<Point2> ReadPoint(const Json& j,
                                        absl::string_view where) {
  RPCS_ASSIGN_OR_RETURN(auto xy, Pair(j, where));
  return Point2{xy.first, xy.second};
}

// Assigns obj[key] to *out when present.
inline absl::Status Optional(const Json& obj, const char* key,
                             absl::string_view where, double* out) {
  if (!obj.contains(key)) return absl::OkStatus();
  RPCS_ASSIGN_OR_RETURN(*out, Number(obj[key], absl::StrCat(where, ".", key)));
  return absl::OkStatus();
}

inline absl::Status Optional(const Json& obj, const char* key,
                             absl::string_view where, int* out) {
  if (!obj.contains(key)) return absl::OkStatus();
  RPCS_ASSIGN_OR_RETURN(*out,
                        Integer(obj[key], absl::StrCat(where, ".", key)));
  return absl::OkStatus();
}

inline absl::Status ReadRobot(const Json& robot, ScenarioConfig& cfg) {
  RPCS_RETURN_IF_ERROR(CheckKeys(robot, "robot",
                                 {"radius", "sensing_radius", "v_bounds",
                                  "w_bounds", "dt", "heading"}));
  RPCS_RETURN_IF_ERROR(
      Optional(robot, "radius", "robot", &cfg.env.robot_radius));
  RPCS_RETURN_IF_ERROR(
      Optional(robot, "sensing_radius", "robot", &cfg.env.sensing_radius));
  RPCS_RETURN_IF_ERROR(Optional(robot, "dt", "robot", &cfg.episode.dt));
  const char* keys[] = {"v_bounds", "w_bounds"};
  for (int i = 0; i < 2; ++i) {
    if (!robot.contains(keys[i])) continue;
    RPCS_ASSIGN_OR_RETURN(
        auto lohi, Pair(robot[keys[i]], absl::StrCat("robot.", keys[i])));
    cfg.episode.bounds.lo[i] = lohi.first;
    cfg.episode.bounds.hi[i] = lohi.second;
  }
  if (robot.contains("heading")) {
    RPCS_ASSIGN_OR_RETURN(cfg.episode.start_heading,
                          Number(robot["heading"], "robot.heading"));
  }
  return absl::OkStatus();
}

inline absl::Status ReadObstacles(const Json& list, ScenarioConfig& cfg) {
  if (!list.is_array()) {
    return absl::InvalidArgumentError("obstacles: expected an array");
  }
  std::set<int> explicit_ids;
  for (const Json& o : list) {
    if (o.is_object() && o.contains("id")) {
      RPCS_ASSIGN_OR_RETURN(int id, Integer(o["id"], "obstacles[].id"));
      if (!explicit_ids.insert(id).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("obstacles: duplicate id ", id));
      }
    }
  }
  int next_id = 1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& o = list[i];
    const std::string where = absl::StrCat("obstacles[", i, "]");
    RPCS_RETURN_IF_ERROR(CheckKeys(o, where, {"id", "disc", "polygon"}));
    int id;
    if (o.contains("id")) {
      id = o["id"].get<int>();
    } else {
      while (explicit_ids.contains(next_id)) ++next_id;
      id = next_id++;
    }
    if (o.contains("disc") == o.contains("polygon")) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": needs exactly one of disc, polygon"));
    }
    absl::StatusOr<ConvexRegion> region;
    if (o.contains("disc")) {
      const Json& d = o["disc"];
      RPCS_RETURN_IF_ERROR(
          CheckKeys(d, absl::StrCat(where, ".disc"), {"center", "radius"}));
      if (!d.contains("center") || !d.contains("radius")) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ".disc: needs center and radius"));
      }
      RPCS_ASSIGN_OR_RETURN(
          Point2 c, ReadPoint(d["center"], absl::StrCat(where, ".center")));
      RPCS_ASSIGN_OR_RETURN(
          double r, Number(d["radius"], absl::StrCat(where, ".radius")));
      region = ConvexRegion::MakeDisc(c, r);
    } else {
      const Json& p = o["polygon"];
      if (!p.is_array()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ".polygon: expected [[x, y], ...]"));
      }
      std::vector<Point2> vertices;
      for (const Json& v : p) {
        RPCS_ASSIGN_OR_RETURN(
            Point2 q, ReadPoint(v, absl::StrCat(where, ".polygon[]")));
        vertices.push_back(q);
      }
      // Clockwise input is accepted and reversed.
      double area2 = 0.0;
      for (std::size_t k = 0; k < vertices.size(); ++k) {
        area2 += Cross(vertices[k], vertices[(k + 1) % vertices.size()]);
      }
      if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());
      region = ConvexRegion::MakePolygon(std::move(vertices));
    }
    if (!region.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": ", region.status().message()));
    }
    cfg.env.obstacles.emplace(id, *std::move(region));
  }
  return absl::OkStatus();
}

inline absl::Status ReadPlanner(const Json& p, ScenarioConfig& cfg) {
  RPCS_RETURN_IF_ERROR(CheckKeys(
      p, "planner",
      {"fixed", "fixed_value", "grid_max", "grid_step", "refine_tol",
       "clearance_margin", "max_iterations", "arc_points"}));
  PlannerConfig& pc = cfg.episode.planner;
  if (p.contains("fixed")) {
    const Json& f = p["fixed"];
    if (f == "rho") {
      pc.free_param = FreeParameter::kDelta;
    } else if (f == "delta") {
      pc.free_param = FreeParameter::kRho;
    } else {
      return absl::InvalidArgumentError(
          "planner.fixed: expected \"rho\" or \"delta\"");
    }
  }
  RPCS_RETURN_IF_ERROR(
      Optional(p, "fixed_value", "planner", &pc.fixed_value));
  RPCS_RETURN_IF_ERROR(Optional(p, "grid_max", "planner", &pc.grid_max));
  RPCS_RETURN_IF_ERROR(Optional(p, "grid_step", "planner", &pc.coarse_step));
  RPCS_RETURN_IF_ERROR(Optional(p, "refine_tol", "planner", &pc.refine_tol));
  RPCS_RETURN_IF_ERROR(
      Optional(p, "clearance_margin", "planner", &pc.clearance_margin));
  RPCS_RETURN_IF_ERROR(
      Optional(p, "max_iterations", "planner", &pc.max_iterations));
  RPCS_RETURN_IF_ERROR(
      Optional(p, "arc_points", "planner", &cfg.episode.arc_points));
  return absl::OkStatus();
}

inline absl::Status ReadController(const Json& c, ScenarioConfig& cfg) {
  RPCS_RETURN_IF_ERROR(CheckKeys(c, "controller",
                                 {"alpha", "epsilon", "mu", "grid",
                                  "refine_levels", "horizon_steps"}));
  EpisodeConfig& e = cfg.episode;
  RPCS_RETURN_IF_ERROR(Optional(c, "alpha", "controller", &e.alpha));
  RPCS_RETURN_IF_ERROR(Optional(c, "epsilon", "controller", &e.epsilon));
  RPCS_RETURN_IF_ERROR(Optional(c, "mu", "controller", &e.tracking.mu));
  RPCS_RETURN_IF_ERROR(Optional(c, "refine_levels", "controller",
                                &e.tracking.refine_levels));
  RPCS_RETURN_IF_ERROR(Optional(c, "horizon_steps", "controller",
                                &e.tracking.horizon_steps));
  if (c.contains("grid")) {
    const Json& g = c["grid"];
    if (!g.is_array() || g.size() != 2) {
      return absl::InvalidArgumentError("controller.grid: expected [nv, nw]");
    }
    RPCS_ASSIGN_OR_RETURN(int nv, Integer(g[0], "controller.grid"));
    RPCS_ASSIGN_OR_RETURN(int nw, Integer(g[1], "controller.grid"));
    e.tracking.grid = {nv, nw};
  }
  return absl::OkStatus();
}

}  // namespace internal

// Parses scenario text. Syntax problems come back as "parse error: ...",
// schema and consistency problems as "validation error: ...".
inline absl::StatusOr<ScenarioConfig> ParseScenario(absl::string_view text,
                                                    std::string name = "") {
  using internal::Json;
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end(), nullptr,
                      /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat("parse error: ", e.what()));
  }
  ScenarioConfig cfg;
  cfg.name = std::move(name);
  auto fill = [&]() -> absl::Status {
    RPCS_RETURN_IF_ERROR(internal::CheckKeys(
        doc, "scenario",
        {"name", "robot", "start", "goal", "obstacles", "planner",
         "controller", "sim"}));
    if (doc.contains("name")) {
      if (!doc["name"].is_string()) {
        return absl::InvalidArgumentError("name: expected a string");
      }
      cfg.name = doc["name"].get<std::string>();
    }
    if (!doc.contains("start") || !doc.contains("goal")) {
      return absl::InvalidArgumentError("start and goal are required");
    }
    RPCS_ASSIGN_OR_RETURN(cfg.episode.start,
                          internal::ReadPoint(doc["start"], "start"));
    RPCS_ASSIGN_OR_RETURN(cfg.episode.goal,
                          internal::ReadPoint(doc["goal"], "goal"));
    if (doc.contains("robot")) {
      RPCS_RETURN_IF_ERROR(internal::ReadRobot(doc["robot"], cfg));
    }
    // Turn height defaults to twice the robot radius.
    cfg.episode.planner.fixed_value = 2.0 * cfg.env.robot_radius;
    if (doc.contains("obstacles")) {
      RPCS_RETURN_IF_ERROR(internal::ReadObstacles(doc["obstacles"], cfg));
    }
    if (doc.contains("planner")) {
      RPCS_RETURN_IF_ERROR(internal::ReadPlanner(doc["planner"], cfg));
    }
    if (doc.contains("controller")) {
      RPCS_RETURN_IF_ERROR(internal::ReadController(doc["controller"], cfg));
    }
    if (doc.contains("sim")) {
      RPCS_RETURN_IF_ERROR(internal::CheckKeys(doc["sim"], "sim", {"t_max"}));
      RPCS_RETURN_IF_ERROR(internal::Optional(doc["sim"], "t_max", "sim",
                                              &cfg.episode.t_max));
    }
    return ValidateEpisode(cfg.env, cfg.episode);
  };
  if (absl::Status s = fill(); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("validation error: ", s.message()));
  }
  return cfg;
}

// Reads and parses a scenario file; a missing or unreadable file is
// NotFound.
inline absl::StatusOr<ScenarioConfig> LoadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read ", path));
  }
  std::ostringstream text;
  text << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    stem = stem.substr(slash + 1);
  }
  if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0) {
    stem = stem.substr(0, dot);
  }
  return ParseScenario(text.str(), stem);
}

}  // namespace rpcs

#endif  // RPCS_SCENARIO_HPP_
