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
/// Closed-loop episodes: a unicycle with a limited sensing disc follows a
/// reference path that is modified whenever newly seen obstacles block it.

#ifndef RPCS_SIM_HPP_
#define RPCS_SIM_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "rpcs/controller.hpp"
#include "rpcs/dynamics.hpp"
#include "rpcs/geometry.hpp"
#include "rpcs/planner.hpp"
#include "rpcs/status_macros.hpp"
#include "rpcs/trajectory.hpp"

namespace rpcs {

struct Environment {
  std::map<int, ConvexRegion> obstacles;
  double robot_radius = 1.0;
  double sensing_radius = 6.0;

  // Largest obstacle extent (max pairwise distance), 0 without obstacles.
  double MaxObstacleSize() const {
    double out = 0.0;
    for (const auto& [id, region] : obstacles) {
      out = std::max(out, region.Diameter());
    }
    return out;
  }

  absl::Status Validate() const {
    if (!(robot_radius > 0.0) || !(sensing_radius > 0.0)) {
      return absl::InvalidArgumentError(
          "robot radius and sensing radius must be positive");
    }
    const double need = robot_radius + MaxObstacleSize();
    if (!(sensing_radius > need)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Assumption 1 violated: γ=", sensing_radius,
                       " ≤ r+max r_k=", need));
    }
    return absl::OkStatus();
  }
};

struct KnownSet {
  std::set<int> ids;
  std::map<int, double> first_seen;
};

// Adds every obstacle lying entirely in the closed sensing disc about `p`.
inline KnownSet SenseUpdate(const Environment& env, Point2 p, KnownSet known,
                            double t) {
  for (const auto& [id, region] : env.obstacles) {
    if (known.ids.contains(id)) continue;
    if (region.MaxDistanceFrom(p) <= env.sensing_radius) {
      known.ids.insert(id);
      known.first_seen.emplace(id, t);
    }
  }
  return known;
}

// Closed-loop defaults. A one-step tracking horizon cannot rotate towards a
// waypoint lying to the side (the heading change alone does not move the
// robot), so episodes hold each control for 1 s when scoring it. The margin
// keeps turns off the enlarged regions so tracking error does not immediately
// re-block the path.
inline constexpr int kEpisodeHorizonSteps = 20;
inline constexpr double kEpisodeClearanceMargin = 0.3;

struct EpisodeConfig {
  Point2 start;
  Point2 goal;
  // Initial heading; unset faces the goal.
  std::optional<double> start_heading;
  ControlBox<2> bounds{{-7.0, -5.0}, {7.0, 5.0}};
  double dt = 0.05;
  double t_max = 200.0;
  double alpha = 0.9;
  double epsilon = 0.3;
  int arc_points = kDefaultArcPoints;
  PlannerConfig planner{.clearance_margin = kEpisodeClearanceMargin};
  // Its dt is replaced by `dt`.
  TrackingConfig tracking{.horizon_steps = kEpisodeHorizonSteps};
  // Optional; sees every successful local modification: the resulting path,
  // the robot's position on it and the enlarged regions known at the time.
  std::function<void(const RefTrajectory&, const PathPosition&,
                     const RegionMap&)>
      on_replan;
};

enum class Outcome {
  kSuccess,
  kTimeout,
  kCollision,
  kPlannerInfeasible,
  kIterationLimit,
  kPlannerError,
};

inline std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSuccess:
      return "success";
    case Outcome::kTimeout:
      return "timeout";
    case Outcome::kCollision:
      return "collision";
    case Outcome::kPlannerInfeasible:
      return "planner-infeasible";
    case Outcome::kIterationLimit:
      return "iteration-limit";
    case Outcome::kPlannerError:
      return "planner-error";
  }
  return "unknown";
}

struct StepRecord {
  double t = 0.0;
  RobotState state;
  ControlInput u;
  std::size_t cursor = 0;
};

struct ReplanRecord {
  double t = 0.0;
  ReplanEvent event;
  double wall_time_s = 0.0;
};

struct SenseRecord {
  double t = 0.0;
  int obstacle_id = 0;
};

struct EpisodeLog {
  double dt = 0.0;
  std::vector<StepRecord> steps;
  std::vector<ReplanRecord> replans;
  std::vector<SenseRecord> sensed;
  Outcome outcome = Outcome::kTimeout;
  std::string detail;
  // Smallest distance from the robot centre to any obstacle over all rows.
  double min_clearance = std::numeric_limits<double>::infinity();
  // Wall-clock fields; excluded from determinism comparisons.
  double planning_time_s = 0.0;
  double total_time_s = 0.0;
  // Final reference path and the frame it is expressed in.
  Frame frame;
  RefTrajectory trajectory;
  std::map<int, EnlargedRegion> enlarged;

  bool success() const { return outcome == Outcome::kSuccess; }
};

namespace internal {

inline Outcome PlannerFailure(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kNotFound:
      return Outcome::kPlannerInfeasible;
    case absl::StatusCode::kResourceExhausted:
      return Outcome::kIterationLimit;
    default:
      return Outcome::kPlannerError;
  }
}

inline double Clearance(const Environment& env, Point2 p) {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& [id, region] : env.obstacles) {
    out = std::min(out, region.DistanceFrom(p));
  }
  return out;
}

}  // namespace internal

// Checks everything RunEpisode relies on; the messages name the violated
// condition.
inline absl::Status ValidateEpisode(const Environment& env,
                                    const EpisodeConfig& config) {
  RPCS_RETURN_IF_ERROR(env.Validate());
  RPCS_RETURN_IF_ERROR(config.planner.Validate());
  TrackingConfig tracking = config.tracking;
  tracking.dt = config.dt;
  RPCS_RETURN_IF_ERROR(tracking.Validate(2));
  if (!(config.dt > 0.0) || !(config.t_max > 0.0)) {
    return absl::InvalidArgumentError("dt and t_max must be positive");
  }
  if (!(0.0 < config.epsilon && config.epsilon < config.alpha &&
        config.alpha < env.sensing_radius)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need 0 < ε < α < γ, got ε=", config.epsilon, " α=", config.alpha,
        " γ=", env.sensing_radius));
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(config.bounds.lo[i] <= 0.0 && 0.0 <= config.bounds.hi[i] &&
          config.bounds.lo[i] < config.bounds.hi[i])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "control bounds [", config.bounds.lo[i], ", ", config.bounds.hi[i],
          "] must be ordered and contain 0"));
    }
  }
  if (config.arc_points < 1) {
    return absl::InvalidArgumentError("arc_points must be >= 1");
  }
  for (double c : {config.start.x, config.start.y, config.goal.x,
                   config.goal.y}) {
    if (!std::isfinite(c)) {
      return absl::InvalidArgumentError("start and goal must be finite");
    }
  }
  if (config.start == config.goal) {
    return absl::InvalidArgumentError("start and goal coincide");
  }
  return absl::OkStatus();
}

// Runs one episode. Per step: goal check, sensing, replanning when the known
// set grew or the remaining path is blocked, control, integration, truth
// collision check. Failures end the episode and are reported in the log;
// only invalid inputs produce an error status.
inline absl::StatusOr<EpisodeLog> RunEpisode(const Environment& env,
                                             const EpisodeConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto wall_start = Clock::now();
  RPCS_RETURN_IF_ERROR(ValidateEpisode(env, config));
  TrackingConfig tracking = config.tracking;
  tracking.dt = config.dt;

  EpisodeLog log;
  log.dt = config.dt;
  RPCS_ASSIGN_OR_RETURN(log.frame,
                        Frame::FromEndpoints(config.start, config.goal));
  const Frame& frame = log.frame;
  const double x_g = Distance(config.start, config.goal);
  RPCS_ASSIGN_OR_RETURN(RefTrajectory traj, InitialTrajectory(x_g));
  PathPosition plan_start = traj.Start();
  RPCS_ASSIGN_OR_RETURN(WaypointPlan plan,
                        DecomposeAndDiscretize(traj, plan_start,
                                               config.alpha));
  std::size_t cursor = 0;
  std::map<int, int> registry;
  KnownSet known;
  RobotState state{config.start,
                   config.start_heading.value_or(frame.angle())};

  auto finish = [&](Outcome outcome, std::string detail, double t) {
    log.outcome = outcome;
    log.detail = std::move(detail);
    log.steps.push_back({t, state, {}, cursor});
    log.min_clearance =
        std::min(log.min_clearance, internal::Clearance(env, state.p));
  };

  for (long j = 0;; ++j) {
    const double t = static_cast<double>(j) * config.dt;
    if (Distance(state.p, config.goal) <= config.epsilon) {
      finish(Outcome::kSuccess, "", t);
      break;
    }
    if (t >= config.t_max - 1e-9) {
      finish(Outcome::kTimeout, absl::StrCat("goal not reached by t=", t),
             t);
      break;
    }

    const std::size_t before = known.ids.size();
    known = SenseUpdate(env, state.p, std::move(known), t);
    bool grew = known.ids.size() > before;
    if (grew) {
      for (int id : known.ids) {
        if (log.enlarged.contains(id)) continue;
        log.sensed.push_back({t, id});
        RPCS_ASSIGN_OR_RETURN(
            EnlargedRegion e,
            Enlarge(env.obstacles.at(id).Transformed(
                        frame, TransformDirection::kToLocal),
                    env.robot_radius, config.arc_points));
        log.enlarged.emplace(id, std::move(e));
      }
    }

    const PathPosition progress =
        cursor > 0 ? plan.waypoints[cursor - 1].position : plan_start;
    if (grew || !BlockingSet(traj, progress, log.enlarged).empty()) {
      const double y_now = traj.PointAt(progress).y;
      const auto plan_begin = Clock::now();
      auto local = LocalModification(traj, progress, y_now, log.enlarged,
                                     x_g, config.planner, registry);
      const double spent =
          std::chrono::duration<double>(Clock::now() - plan_begin).count();
      log.planning_time_s += spent;
      if (!local.ok()) {
        finish(internal::PlannerFailure(local.status()),
               std::string(local.status().message()), t);
        break;
      }
      if (config.on_replan) {
        config.on_replan(local->trajectory, local->progress, log.enlarged);
      }
      if (!local->events.empty()) {
        for (const ReplanEvent& e : local->events) {
          log.replans.push_back({t, e, spent});
        }
        traj = std::move(local->trajectory);
        plan_start = local->progress;
        RPCS_ASSIGN_OR_RETURN(
            plan, DecomposeAndDiscretize(traj, plan_start, config.alpha));
        cursor = 0;
      }
    }

    const Unicycle dyn;
    auto out = ControllerStep(dyn, plan, cursor, state.ToArray(), frame,
                              config.epsilon, tracking, config.bounds);
    cursor = out.cursor;
    if (out.exhausted) {
      out.u = SolveTrackingControl(dyn, state.ToArray(), config.goal,
                                   tracking, config.bounds);
    }
    const ControlInput u{out.u[0], out.u[1]};
    log.steps.push_back({t, state, u, cursor});
    log.min_clearance =
        std::min(log.min_clearance, internal::Clearance(env, state.p));
    state = IntegrateStep(state, u, config.dt);

    const double clearance = internal::Clearance(env, state.p);
    if (clearance < env.robot_radius) {
      finish(Outcome::kCollision,
             absl::StrCat("robot within ", clearance,
                          " of an obstacle (radius ", env.robot_radius, ")"),
             static_cast<double>(j + 1) * config.dt);
      break;
    }
  }
  log.trajectory = std::move(traj);
  log.total_time_s =
      std::chrono::duration<double>(Clock::now() - wall_start).count();
  return log;
}

struct Metrics {
  double control_effort = 0.0;
  double trajectory_length = 0.0;
  double planning_time_s = 0.0;
  double total_time_s = 0.0;
  bool success = false;
  double completion_time_s = 0.0;
};

inline absl::StatusOr<Metrics> ComputeMetrics(const EpisodeLog& log) {
  if (log.steps.empty()) {
    return absl::InvalidArgumentError("episode log has no steps");
  }
  Metrics m;
  for (std::size_t j = 0; j < log.steps.size(); ++j) {
    const ControlInput& u = log.steps[j].u;
    m.control_effort += (u.v * u.v + u.w * u.w) * log.dt;
    if (j + 1 < log.steps.size()) {
      m.trajectory_length +=
          Distance(log.steps[j + 1].state.p, log.steps[j].state.p);
    }
  }
  m.planning_time_s = log.planning_time_s;
  m.total_time_s = log.total_time_s;
  m.success = log.success();
  m.completion_time_s = m.success ? log.steps.back().t : 0.0;
  return m;
}

}  // namespace rpcs

#endif  // RPCS_SIM_HPP_
