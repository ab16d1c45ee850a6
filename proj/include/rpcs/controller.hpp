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
/// Waypoint tracking: the remaining reference path is cut into parts, each
/// part is sampled every alpha along x, and the robot chases one waypoint at
/// a time with a grid-searched constant control.

#ifndef RPCS_CONTROLLER_HPP_
#define RPCS_CONTROLLER_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <type_traits>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "rpcs/dynamics.hpp"
#include "rpcs/geometry.hpp"
#include "rpcs/trajectory.hpp"

namespace rpcs {

// A run of consecutive pieces traversed in one direction.
struct PlanPart {
  std::size_t first_piece = 0;
  std::size_t last_piece = 0;
  double start_x = 0.0;
  double end_x = 0.0;
  Traversal traversal = Traversal::kForward;

  double length() const { return std::abs(end_x - start_x); }
};

struct Waypoint {
  // Local-frame target.
  Point2 q;
  PathPosition position;
  std::size_t part = 0;
};

struct WaypointPlan {
  std::vector<PlanPart> parts;
  std::vector<Waypoint> waypoints;
  // part_ends[i]: number of waypoints in parts 0..i.
  std::vector<std::size_t> part_ends;
  double alpha = 0.0;

  bool empty() const { return waypoints.empty(); }
  std::size_t size() const { return waypoints.size(); }
};

// Splits the path from `progress` on into parts: a new part starts when the
// traversal direction changes, at the first piece of a turn, and right after
// the last piece of a turn.
inline std::vector<PlanPart> DecomposeParts(const RefTrajectory& traj,
                                            const PathPosition& progress) {
  std::vector<PlanPart> parts;
  for (std::size_t i = progress.piece; i < traj.size(); ++i) {
    const TrajectoryPiece& p = traj.piece(i);
    const double start = i == progress.piece ? progress.x : p.StartX();
    bool split = parts.empty() || p.traversal != parts.back().traversal ||
                 p.kind == PieceKind::kTurnI;
    if (!split && traj.piece(i - 1).kind == PieceKind::kTurnIII) split = true;
    if (split) {
      parts.push_back({i, i, start, p.EndX(), p.traversal});
    } else {
      parts.back().last_piece = i;
      parts.back().end_x = p.EndX();
    }
  }
  return parts;
}

// Waypoints every alpha along x for each part, excluding the part's start
// and clamping the last one to the part's end.
inline absl::StatusOr<WaypointPlan> DecomposeAndDiscretize(
    const RefTrajectory& traj, const PathPosition& progress, double alpha) {
  if (!(alpha > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("waypoint spacing must be positive, got ", alpha));
  }
  if (progress.piece >= traj.size() ||
      !traj.piece(progress.piece).span.Contains(progress.x)) {
    return absl::OutOfRangeError(absl::StrCat(
        "robot position (piece ", progress.piece, ", x ", progress.x,
        ") is not on the trajectory"));
  }
  WaypointPlan plan;
  plan.alpha = alpha;
  plan.parts = DecomposeParts(traj, progress);
  for (std::size_t k = 0; k < plan.parts.size(); ++k) {
    const PlanPart& part = plan.parts[k];
    const double len = part.length();
    const int count =
        len > 0.0 ? static_cast<int>(std::ceil(len / alpha - 1e-9)) : 0;
    const double dir = part.traversal == Traversal::kForward ? 1.0 : -1.0;
    std::size_t j = part.first_piece;
    for (int l = 1; l <= count; ++l) {
      const double x = l == count ? part.end_x : part.start_x + dir * l * alpha;
      while (j < part.last_piece && !traj.piece(j).span.Contains(x)) ++j;
      plan.waypoints.push_back(
          {{x, traj.piece(j).Value(x)}, {j, x}, k});
    }
    plan.part_ends.push_back(plan.waypoints.size());
  }
  return plan;
}

inline absl::StatusOr<WaypointPlan> DecomposeAndDiscretize(
    const RefTrajectory& traj, double x_now, double alpha) {
  auto progress = LocateForward(traj, traj.Start(), x_now);
  if (!progress.has_value()) {
    return absl::OutOfRangeError(
        absl::StrCat("robot abscissa ", x_now, " not on the trajectory"));
  }
  return DecomposeAndDiscretize(traj, *progress, alpha);
}

// Moves to the next waypoint once the current one is within epsilon.
inline std::size_t WaypointAdvance(const WaypointPlan& plan, Point2 p_now,
                                   std::size_t cursor, double epsilon) {
  if (cursor < plan.size() &&
      Distance(p_now, plan.waypoints[cursor].q) <= epsilon) {
    return cursor + 1;
  }
  return cursor;
}

struct TrackingConfig {
  double mu = 0.05;
  double dt = 0.05;
  // Grid points per control dimension.
  std::vector<int> grid = {29, 21};
  int refine_levels = 3;
  // Number of integration steps of dt over which the candidate control is
  // held when scoring it.
  int horizon_steps = 1;

  absl::Status Validate(std::size_t control_dim) const {
    if (!(mu > 0.0) || !(dt > 0.0)) {
      return absl::InvalidArgumentError("mu and dt must be positive");
    }
    if (grid.size() != control_dim) {
      return absl::InvalidArgumentError(absl::StrCat(
          "control grid has ", grid.size(), " dimensions, expected ",
          control_dim));
    }
    for (int n : grid) {
      if (n < 1) return absl::InvalidArgumentError("grid sizes must be >= 1");
    }
    if (refine_levels < 0 || horizon_steps < 1) {
      return absl::InvalidArgumentError(
          "refine_levels must be >= 0 and horizon_steps >= 1");
    }
    return absl::OkStatus();
  }
};

// Cost of holding `u` from state `x`: squared distance of the reached
// position to `target` plus mu |u|^2.
template <std::size_t M>
double TrackingCost(Point2 reached, const std::array<double, M>& u,
                    Point2 target, double mu) {
  double effort = 0.0;
  for (double c : u) effort += c * c;
  const Point2 e = reached - target;
  return Dot(e, e) + mu * effort;
}

template <Dynamics D>
double TrackingCost(const D& dyn, const typename D::State& x,
                    const typename D::Control& u, Point2 target,
                    const TrackingConfig& cfg) {
  typename D::State s = x;
  for (int i = 0; i < cfg.horizon_steps; ++i) s = Rk4Step(dyn, s, u, cfg.dt);
  return TrackingCost(D::Position(s), u, target, cfg.mu);
}

namespace internal {

// Unicycle rollouts from one state under many constant controls. The heading
// path depends on w alone, so its sines and cosines are computed once per w;
// the arithmetic matches Rk4Step operation for operation.
class UnicycleRollout {
 public:
  UnicycleRollout(const Unicycle::State& x, double dt, int steps)
      : x_(x), dt_(dt), steps_(steps) {}

  Point2 Position(const Unicycle::Control& u) {
    const std::vector<double>& trig = Trig(u[1]);
    const double v = u[0];
    double px = x_[0];
    double py = x_[1];
    for (int i = 0; i < steps_; ++i) {
      const double* t = &trig[6 * i];
      px += dt_ / 6.0 *
            (v * t[0] + 2.0 * (v * t[2]) + 2.0 * (v * t[2]) + v * t[4]);
      py += dt_ / 6.0 *
            (v * t[1] + 2.0 * (v * t[3]) + 2.0 * (v * t[3]) + v * t[5]);
    }
    return {px, py};
  }

 private:
  const std::vector<double>& Trig(double w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    std::vector<double> trig(6 * steps_);
    double theta = x_[2];
    for (int i = 0; i < steps_; ++i) {
      const double mid = theta + 0.5 * dt_ * w;
      const double end = theta + dt_ * w;
      trig[6 * i + 0] = std::cos(theta);
      trig[6 * i + 1] = std::sin(theta);
      trig[6 * i + 2] = std::cos(mid);
      trig[6 * i + 3] = std::sin(mid);
      trig[6 * i + 4] = std::cos(end);
      trig[6 * i + 5] = std::sin(end);
      theta += dt_ / 6.0 * (w + 2.0 * w + 2.0 * w + w);
    }
    return cache_.emplace(w, std::move(trig)).first->second;
  }

  Unicycle::State x_;
  double dt_;
  int steps_;
  std::map<double, std::vector<double>> cache_;
};

}  // namespace internal

// Minimizes TrackingCost over a box grid, then repeatedly over a grid of the
// same size spanning one previous spacing around the incumbent. Ties go to
// the lexicographically smallest control.
template <Dynamics D>
typename D::Control SolveTrackingControl(
    const D& dyn, const typename D::State& x, Point2 target,
    const TrackingConfig& cfg,
    const ControlBox<std::tuple_size_v<typename D::Control>>& bounds) {
  using Control = typename D::Control;
  constexpr std::size_t M = std::tuple_size_v<Control>;
  [[maybe_unused]] auto rollout = [&] {
    if constexpr (std::is_same_v<D, Unicycle>) {
      return internal::UnicycleRollout(x, cfg.dt, cfg.horizon_steps);
    } else {
      return 0;
    }
  }();
  Control best{};
  double best_cost = std::numeric_limits<double>::infinity();
  bool have_best = false;
  auto cost = [&](const Control& u) {
    if constexpr (std::is_same_v<D, Unicycle>) {
      static_cast<void>(dyn);
      return TrackingCost(rollout.Position(u), u, target, cfg.mu);
    } else {
      return TrackingCost(dyn, x, u, target, cfg);
    }
  };
  auto consider = [&](const Control& u) {
    const double c = cost(u);
    if (!have_best || c < best_cost || (c == best_cost && u < best)) {
      best = u;
      best_cost = c;
      have_best = true;
    }
  };

  std::array<double, M> lo = bounds.lo;
  std::array<double, M> hi = bounds.hi;
  for (int level = 0; level <= cfg.refine_levels; ++level) {
    std::array<double, M> spacing{};
    for (std::size_t i = 0; i < M; ++i) {
      const int n = cfg.grid[i];
      spacing[i] = n > 1 ? (hi[i] - lo[i]) / (n - 1) : 0.0;
    }
    std::array<int, M> idx{};
    while (true) {
      Control u;
      for (std::size_t i = 0; i < M; ++i) {
        const int n = cfg.grid[i];
        u[i] = n > 1 ? (idx[i] == n - 1 ? hi[i] : lo[i] + spacing[i] * idx[i])
                     : 0.5 * (lo[i] + hi[i]);
      }
      consider(u);
      std::size_t d = M;
      while (d-- > 0) {
        if (++idx[d] < cfg.grid[d]) break;
        idx[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) break;
    }
    for (std::size_t i = 0; i < M; ++i) {
      lo[i] = std::max(bounds.lo[i], best[i] - spacing[i]);
      hi[i] = std::min(bounds.hi[i], best[i] + spacing[i]);
    }
  }
  return best;
}

template <Dynamics D>
struct ControllerOutput {
  typename D::Control u{};
  std::size_t cursor = 0;
  // Set when the cursor has passed the last waypoint; `u` is zero then.
  bool exhausted = false;
};

// Advances the cursor at most once, then tracks the current waypoint mapped
// to the global frame.
template <Dynamics D>
ControllerOutput<D> ControllerStep(
    const D& dyn, const WaypointPlan& plan, std::size_t cursor,
    const typename D::State& x, const Frame& frame, double epsilon,
    const TrackingConfig& cfg,
    const ControlBox<std::tuple_size_v<typename D::Control>>& bounds) {
  ControllerOutput<D> out;
  const Point2 p_local = frame.ToLocal(D::Position(x));
  out.cursor = WaypointAdvance(plan, p_local, cursor, epsilon);
  if (out.cursor >= plan.size()) {
    out.exhausted = true;
    return out;
  }
  const Point2 target = frame.ToGlobal(plan.waypoints[out.cursor].q);
  out.u = SolveTrackingControl(dyn, x, target, cfg, bounds);
  return out;
}

}  // namespace rpcs

#endif  // RPCS_CONTROLLER_HPP_
