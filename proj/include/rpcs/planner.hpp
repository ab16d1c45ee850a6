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
/// Reactive local modification of a reference trajectory.
///
/// All geometry here is in the local frame. Obstacles are given by their
/// enlarged regions, keyed by obstacle id. The robot's place on the
/// trajectory is a PathPosition; only the part of the path from there on is
/// checked for blocking obstacles.

#ifndef RPCS_PLANNER_HPP_
#define RPCS_PLANNER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "rpcs/geometry.hpp"
#include "rpcs/status_macros.hpp"
#include "rpcs/trajectory.hpp"

namespace rpcs {

using RegionMap = std::map<int, EnlargedRegion>;

// Intersections whose abscissa extent is at most this are treated as
// tangential contact, not as blocking.
inline constexpr double kContactTolerance = 1e-6;

enum class FreeParameter { kRho, kDelta };

struct PlannerConfig {
  FreeParameter free_param = FreeParameter::kDelta;
  // Value of the parameter that is held fixed.
  double fixed_value = 2.0;
  // Upper end of the search grid; 0 selects 10 * fixed_value.
  double grid_max = 0.0;
  double coarse_step = 0.05;
  double refine_tol = 1e-3;
  double clearance_margin = 0.0;
  // Iteration guard; 0 selects 10 * (number of known obstacles).
  int max_iterations = 0;

  double EffectiveGridMax() const {
    return grid_max > 0.0 ? grid_max : 10.0 * fixed_value;
  }

  absl::Status Validate() const {
    if (!(fixed_value > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("fixed turn parameter must be positive, got ",
                       fixed_value));
    }
    if (!(coarse_step > 0.0) || !(coarse_step < EffectiveGridMax())) {
      return absl::InvalidArgumentError(
          absl::StrCat("grid step ", coarse_step, " must be in (0, ",
                       EffectiveGridMax(), ")"));
    }
    if (!(refine_tol > 0.0) || !(refine_tol < coarse_step)) {
      return absl::InvalidArgumentError(
          absl::StrCat("refine tolerance ", refine_tol, " must be in (0, ",
                       coarse_step, ")"));
    }
    if (!(clearance_margin >= 0.0)) {
      return absl::InvalidArgumentError("clearance margin must be >= 0");
    }
    if (max_iterations < 0) {
      return absl::InvalidArgumentError("iteration guard must be >= 0");
    }
    return absl::OkStatus();
  }
};

// True when the piece passes through the region beyond tangential contact.
template <GraphCurve Curve>
bool Overlaps(const Curve& curve, const ConvexRegion& region) {
  for (const Interval& i : CurveRegionIntersect(curve, region)) {
    if (i.length() > kContactTolerance) return true;
  }
  return false;
}

// Ids of regions intersecting the path from `from` on.
inline std::set<int> BlockingSet(const RefTrajectory& traj,
                                 const PathPosition& from,
                                 const RegionMap& regions) {
  std::set<int> out;
  const std::vector<TrajectoryPiece> rest = traj.Suffix(from);
  for (const auto& [id, region] : regions) {
    for (const TrajectoryPiece& piece : rest) {
      if (Overlaps(piece, region.boundary)) {
        out.insert(id);
        break;
      }
    }
  }
  return out;
}

inline std::set<int> BlockingSet(const RefTrajectory& traj,
                                 const RegionMap& regions) {
  return BlockingSet(traj, traj.Start(), regions);
}

inline absl::StatusOr<int> SelectBypassObstacle(const std::set<int>& blocking,
                                                Point2 p_now,
                                                const RegionMap& regions) {
  if (blocking.empty()) {
    return absl::InvalidArgumentError("no blocking obstacle to select");
  }
  int best_id = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int id : blocking) {
    auto it = regions.find(id);
    if (it == regions.end()) {
      return absl::NotFoundError(absl::StrCat("unknown obstacle id ", id));
    }
    const double d = DistPointRegion(p_now, it->second);
    if (d < best) {
      best = d;
      best_id = id;
    }
  }
  return best_id;
}

struct CollisionPoint {
  Point2 point;
  PathPosition position;
  PieceKind kind = PieceKind::kInitialLine;
  std::optional<TurnTag> turn;

  bool OnTurn() const { return IsTurnKind(kind) && turn.has_value(); }
};

struct CollisionEndpoints {
  CollisionPoint first;
  CollisionPoint last;
};

// Leftmost and rightmost points of the path from `from` on that lie in the
// region, with the provenance of the pieces they lie on.
inline absl::StatusOr<CollisionEndpoints> FindCollisionEndpoints(
    const RefTrajectory& traj, const PathPosition& from,
    const EnlargedRegion& region) {
  std::optional<CollisionPoint> first;
  std::optional<CollisionPoint> last;
  for (std::size_t i = from.piece; i < traj.size(); ++i) {
    TrajectoryPiece piece = traj.piece(i);
    if (i == from.piece) piece = piece.After(from.x);
    for (const Interval& hit : CurveRegionIntersect(piece, region.boundary)) {
      if (hit.length() <= kContactTolerance) continue;
      const TrajectoryPiece& src = traj.piece(i);
      if (!first.has_value() || hit.lo < first->point.x) {
        first = CollisionPoint{{hit.lo, src.Value(hit.lo)},
                               {i, hit.lo},
                               src.kind,
                               src.turn};
      }
      if (!last.has_value() || hit.hi > last->point.x) {
        last = CollisionPoint{{hit.hi, src.Value(hit.hi)},
                              {i, hit.hi},
                              src.kind,
                              src.turn};
      }
    }
  }
  if (!first.has_value()) {
    return absl::NotFoundError("trajectory does not intersect the region");
  }
  return CollisionEndpoints{*first, *last};
}

inline absl::StatusOr<CollisionEndpoints> FindCollisionEndpoints(
    const RefTrajectory& traj, const EnlargedRegion& region) {
  return FindCollisionEndpoints(traj, traj.Start(), region);
}

// Side on which to pass the region. When neither endpoint lies on an earlier
// turn, the side where the region sticks out less from the trajectory is
// chosen (ordinates measured from the mean height of the two endpoints).
// Otherwise the earlier turn's direction is kept.
inline absl::StatusOr<int> TurningDirection(
    const CollisionEndpoints& endpoints, const EnlargedRegion& region) {
  for (const CollisionPoint* p : {&endpoints.first, &endpoints.last}) {
    if (!IsTurnKind(p->kind)) continue;
    if (p->turn.has_value()) return p->turn->direction;
    return absl::FailedPreconditionError(
        "collision endpoint lies on a turn without a recorded direction");
  }
  const double y_ref = 0.5 * (endpoints.first.point.y + endpoints.last.point.y);
  const Interval yr = region.boundary.YRange();
  return Sgn(std::abs(yr.lo - y_ref) - std::abs(yr.hi - y_ref));
}

// Single-valued view of a path for lookups ahead of and behind the robot:
// the last piece from `from` on covering x, else the already-traversed
// forward history, else the height of the nearest path end.
class ReferenceView {
 public:
  ReferenceView(const RefTrajectory& traj, PathPosition from)
      : traj_(&traj), from_(from) {}

  CurvePoint Eval(double x) const {
    if (auto pos = LocateLast(*traj_, from_, x)) return At(*pos);
    if (auto pos = LocateBackward(*traj_, from_, x)) return At(*pos);
    const Interval d = traj_->domain();
    const double edge = x < d.lo ? d.lo : d.hi;
    for (std::size_t i = traj_->size(); i-- > 0;) {
      if (traj_->piece(i).span.Contains(edge)) {
        return {traj_->piece(i).Value(edge), 0.0};
      }
    }
    return {0.0, 0.0};
  }

  double operator()(double x) const { return Eval(x).y; }

 private:
  CurvePoint At(const PathPosition& pos) const {
    const TrajectoryPiece& p = traj_->piece(pos.piece);
    return {p.Value(pos.x), p.Slope(pos.x)};
  }

  const RefTrajectory* traj_;
  PathPosition from_;
};

struct BypassGeometry {
  int beta = 1;
  Point2 o_first;
  Point2 o_last;
  double x_min = 0.0;
  double x_max = 0.0;
  double x_near = 0.0;
  double x_far = 0.0;
  double y_extreme = 0.0;
};

// Extremes of the part of `region` on side `beta` of `reference`.
inline absl::StatusOr<BypassGeometry> BypassExtremes(
    const EnlargedRegion& region, std::function<double(double)> reference,
    int beta) {
  RPCS_ASSIGN_OR_RETURN(
      RegionExtremes ext,
      ComputeRegionExtremes(region, SideFilter{std::move(reference), beta}));
  BypassGeometry out;
  out.beta = beta;
  out.x_min = ext.min_x;
  out.x_max = ext.max_x;
  out.x_near = ext.extreme_x.lo;
  out.x_far = ext.extreme_x.hi;
  out.y_extreme = ext.extreme_y;
  return out;
}

// Anchors and slopes of a turn around `geom` for a robot at `progress`
// (local height y_now), with lead distance rho and clearance delta.
inline absl::StatusOr<TurnAnchors> ChooseAnchors(const BypassGeometry& geom,
                                                 const RefTrajectory& traj,
                                                 const PathPosition& progress,
                                                 double y_now, double x_g,
                                                 double rho, double delta) {
  if (!(rho > 0.0) || !(delta > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("turn parameters must be positive: rho=", rho,
                     " delta=", delta));
  }
  const double x_now = progress.x;
  TurnAnchors out;
  const double x_a = x_now >= geom.x_min ? geom.x_min - rho
                                         : std::min(x_now, geom.x_min - rho);
  out.a = {x_a, y_now};
  out.slope_a = 0.0;
  if (x_a >= x_now) {
    const TrajectoryPiece& p = traj.piece(progress.piece);
    out.a.y = p.Value(x_now);
    out.slope_a = x_a > 0.0 ? p.Slope(x_now) : 0.0;
  } else if (x_a >= 0.0) {
    if (auto pos = LocateBackward(traj, progress, x_a)) {
      const TrajectoryPiece& p = traj.piece(pos->piece);
      out.a.y = p.Value(x_a);
      out.slope_a = x_a > 0.0 ? p.Slope(x_a) : 0.0;
    }
  }

  const double y_b = geom.y_extreme + geom.beta * delta;
  out.b = {geom.x_near, y_b};
  out.c = {geom.x_far, y_b};

  const double x_d = geom.x_max + rho;
  out.d = {x_d, 0.0};
  if (x_d <= x_g) {
    auto pos = LocateLast(traj, progress, x_d);
    if (!pos.has_value()) {
      return absl::OutOfRangeError(absl::StrCat(
          "turn end ", x_d, " not covered by the remaining trajectory"));
    }
    const TrajectoryPiece& p = traj.piece(pos->piece);
    out.d.y = p.Value(x_d);
    out.slope_d = p.Slope(x_d);
  }
  return out;
}

struct TurnParameters {
  double rho = 0.0;
  double delta = 0.0;
};

// Smallest free-parameter value whose turn avoids every constraint region:
// ascending scan of step, 2 step, ... up to grid max, then bisection between
// the last infeasible and the first feasible grid value.
inline absl::StatusOr<double> OptimizeTurnParameter(
    const PlannerConfig& config,
    const std::function<absl::StatusOr<TurningTrajectory>(double)>& build,
    const std::vector<ConvexRegion>& constraints) {
  auto feasible = [&](double value) -> absl::StatusOr<bool> {
    auto turn = build(value);
    if (!turn.ok()) return turn.status();
    for (const TrajectoryPiece& piece : turn->Pieces()) {
      for (const ConvexRegion& region : constraints) {
        if (Overlaps(piece, region)) return false;
      }
    }
    return true;
  };

  const double step = config.coarse_step;
  const double max = config.EffectiveGridMax();
  const auto n = static_cast<int>(std::floor(max / step + 1e-9));
  for (int i = 1; i <= n; ++i) {
    const double value = step * i;
    RPCS_ASSIGN_OR_RETURN(bool ok, feasible(value));
    if (!ok) continue;
    if (i == 1) return value;
    double lo = step * (i - 1);
    double hi = value;
    while (hi - lo > config.refine_tol) {
      const double mid = 0.5 * (lo + hi);
      RPCS_ASSIGN_OR_RETURN(bool mid_ok, feasible(mid));
      (mid_ok ? hi : lo) = mid;
    }
    return hi;
  }
  return absl::NotFoundError(absl::StrCat(
      "planner-infeasible: no turn parameter up to ", max, " clears the ",
      constraints.size(), " constraint region(s)"));
}

struct ReplanEvent {
  int obstacle_id = 0;
  int beta = 1;
  TurnAnchors anchors;
  double rho = 0.0;
  double delta = 0.0;
  std::size_t piece_count = 0;
};

struct LocalPlan {
  RefTrajectory trajectory;
  PathPosition progress;
  std::vector<ReplanEvent> events;
};

namespace internal {

inline absl::StatusOr<ConvexRegion> WithMargin(const EnlargedRegion& region,
                                               double margin) {
  if (margin == 0.0) return region.boundary;
  RPCS_ASSIGN_OR_RETURN(EnlargedRegion grown,
                        Enlarge(region.boundary, margin));
  return grown.boundary;
}

}  // namespace internal

// Repeatedly bypasses the nearest blocking obstacle until the path from the
// robot on is clear of every region in `regions`. `turn_registry` receives
// the direction used for each bypassed obstacle.
inline absl::StatusOr<LocalPlan> LocalModification(
    RefTrajectory traj, PathPosition progress, double y_now,
    const RegionMap& regions, double x_g, const PlannerConfig& config,
    std::map<int, int>& turn_registry) {
  RPCS_RETURN_IF_ERROR(config.Validate());
  const int guard = config.max_iterations > 0
                        ? config.max_iterations
                        : 10 * std::max<int>(1, regions.size());
  LocalPlan out{std::move(traj), progress, {}};
  for (int iteration = 0;; ++iteration) {
    const std::set<int> blocking =
        BlockingSet(out.trajectory, out.progress, regions);
    if (blocking.empty()) return out;
    if (iteration >= guard) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "iteration-limit: trajectory still blocked after ", guard,
          " modifications"));
    }
    const Point2 p_now{out.progress.x, y_now};
    RPCS_ASSIGN_OR_RETURN(int k,
                          SelectBypassObstacle(blocking, p_now, regions));
    const EnlargedRegion& region = regions.at(k);
    RPCS_ASSIGN_OR_RETURN(
        CollisionEndpoints ends,
        FindCollisionEndpoints(out.trajectory, out.progress, region));
    RPCS_ASSIGN_OR_RETURN(int beta,
                          TurningDirection(ends, region));
    const ReferenceView view(out.trajectory, out.progress);
    RPCS_ASSIGN_OR_RETURN(BypassGeometry geom,
                          BypassExtremes(region, view, beta));
    geom.o_first = ends.first.point;
    geom.o_last = ends.last.point;

    std::vector<ConvexRegion> constraints;
    RPCS_ASSIGN_OR_RETURN(ConvexRegion own, internal::WithMargin(
                                                region, config.clearance_margin));
    constraints.push_back(std::move(own));
    std::set<int> owners;
    for (const CollisionPoint* p : {&ends.first, &ends.last}) {
      if (p->OnTurn() && p->turn->obstacle_id != k) {
        owners.insert(p->turn->obstacle_id);
      }
    }
    for (int j : owners) {
      auto it = regions.find(j);
      if (it == regions.end()) continue;
      RPCS_ASSIGN_OR_RETURN(ConvexRegion other,
                            internal::WithMargin(it->second,
                                                 config.clearance_margin));
      constraints.push_back(std::move(other));
    }

    const TurnTag tag{k, beta};
    auto build = [&](double value) -> absl::StatusOr<TurningTrajectory> {
      const bool free_rho = config.free_param == FreeParameter::kRho;
      const double rho = free_rho ? value : config.fixed_value;
      const double delta = free_rho ? config.fixed_value : value;
      RPCS_ASSIGN_OR_RETURN(
          TurnAnchors anchors,
          ChooseAnchors(geom, out.trajectory, out.progress, y_now, x_g, rho,
                        delta));
      return BuildTurningTrajectory(anchors, tag, rho, delta);
    };
    RPCS_ASSIGN_OR_RETURN(double value,
                          OptimizeTurnParameter(config, build, constraints));
    RPCS_ASSIGN_OR_RETURN(TurningTrajectory turn, build(value));
    RPCS_ASSIGN_OR_RETURN(
        Assembly assembled,
        AssembleModified(out.trajectory, out.progress, turn, y_now, x_g));
    out.trajectory = std::move(assembled.trajectory);
    out.progress = assembled.progress;
    turn_registry[k] = beta;
    out.events.push_back({k, beta, turn.anchors, turn.rho, turn.delta,
                          out.trajectory.size()});
  }
}

// Form for a robot on the trajectory at abscissa x_now (first occurrence).
inline absl::StatusOr<RefTrajectory> LocalModification(
    const RefTrajectory& traj, const RegionMap& regions, double x_now,
    double y_now, double x_g, const PlannerConfig& config,
    std::map<int, int>& turn_registry) {
  auto progress = LocateForward(traj, traj.Start(), x_now);
  if (!progress.has_value()) {
    return absl::OutOfRangeError(
        absl::StrCat("robot abscissa ", x_now, " not on the trajectory"));
  }
  RPCS_ASSIGN_OR_RETURN(LocalPlan plan,
                        LocalModification(traj, *progress, y_now, regions,
                                          x_g, config, turn_registry));
  return std::move(plan.trajectory);
}

}  // namespace rpcs

#endif  // RPCS_PLANNER_HPP_
