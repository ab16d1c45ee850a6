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
/// Piecewise-cubic reference trajectories in the local frame.
///
/// A RefTrajectory is an ordered path of graph pieces y = p(x). Each piece is
/// traversed either towards +x or towards -x (connection pieces along which
/// the robot backs up), and consecutive pieces meet end-to-start. Because
/// backward pieces may overlap earlier pieces in x, lookups that need a
/// single-valued reference curve go through the Locate* helpers, which say
/// which portion of the path they search.

#ifndef RPCS_TRAJECTORY_HPP_
#define RPCS_TRAJECTORY_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "rpcs/geometry.hpp"

namespace rpcs {

inline constexpr double kContinuityTolerance = 1e-9;

// Cubic y = c[0] t^3 + c[1] t^2 + c[2] t + c[3] in the shifted variable
// t = x - origin. Keeping the shift avoids the cancellation of expanded
// power-basis coefficients far from x = 0.
struct Cubic {
  double origin = 0.0;
  std::array<double, 4> coeffs{};

  static Cubic Constant(double y) { return {0.0, {0.0, 0.0, 0.0, y}}; }

  double Value(double x) const {
    const double t = x - origin;
    return ((coeffs[0] * t + coeffs[1]) * t + coeffs[2]) * t + coeffs[3];
  }

  double Slope(double x) const {
    const double t = x - origin;
    return (3.0 * coeffs[0] * t + 2.0 * coeffs[1]) * t + coeffs[2];
  }

  // Coefficients (a, b, c, d) of a x^3 + b x^2 + c x + d.
  std::array<double, 4> PowerBasis() const {
    const double s = origin;
    const auto& [c3, c2, c1, c0] = coeffs;
    return {c3, c2 - 3.0 * c3 * s, c1 - 2.0 * c2 * s + 3.0 * c3 * s * s,
            c0 - c1 * s + c2 * s * s - c3 * s * s * s};
  }
};

// Cubic matching positions and slopes at two abscissae.
inline absl::StatusOr<Cubic> SolveHermiteCubic(Point2 p0, Point2 p1,
                                               double slope0, double slope1) {
  const double h = p1.x - p0.x;
  if (h == 0.0 || !std::isfinite(h)) {
    return absl::InvalidArgumentError(
        absl::StrCat("singular Hermite system: endpoints share abscissa ",
                     p0.x));
  }
  const double rise = p1.y - p0.y - slope0 * h;
  const double bend = slope1 - slope0;
  Cubic out;
  out.origin = p0.x;
  out.coeffs = {(bend * h - 2.0 * rise) / (h * h * h),
                (3.0 * rise - bend * h) / (h * h), slope0, p0.y};
  return out;
}

enum class PieceKind { kInitialLine, kConnection, kTurnI, kTurnII, kTurnIII };

inline std::string_view PieceKindName(PieceKind kind) {
  switch (kind) {
    case PieceKind::kInitialLine:
      return "initial-line";
    case PieceKind::kConnection:
      return "connection";
    case PieceKind::kTurnI:
      return "turn-I";
    case PieceKind::kTurnII:
      return "turn-II";
    case PieceKind::kTurnIII:
      return "turn-III";
  }
  return "unknown";
}

inline bool IsTurnKind(PieceKind kind) {
  return kind == PieceKind::kTurnI || kind == PieceKind::kTurnII ||
         kind == PieceKind::kTurnIII;
}

enum class Traversal { kForward, kBackward };

// Which obstacle a turn piece bypasses and on which side.
struct TurnTag {
  int obstacle_id = 0;
  int direction = 1;
};

struct TrajectoryPiece {
  Interval span;
  Cubic cubic;
  PieceKind kind = PieceKind::kInitialLine;
  Traversal traversal = Traversal::kForward;
  std::optional<TurnTag> turn;

  Interval domain() const { return span; }
  double Value(double x) const { return cubic.Value(x); }
  double Slope(double x) const { return cubic.Slope(x); }

  bool forward() const { return traversal == Traversal::kForward; }
  double StartX() const { return forward() ? span.lo : span.hi; }
  double EndX() const { return forward() ? span.hi : span.lo; }
  Point2 StartPoint() const { return {StartX(), Value(StartX())}; }
  Point2 EndPoint() const { return {EndX(), Value(EndX())}; }

  // Portion traversed before / after abscissa `x`.
  TrajectoryPiece Before(double x) const {
    TrajectoryPiece out = *this;
    out.span = forward() ? Interval{span.lo, x} : Interval{x, span.hi};
    return out;
  }
  TrajectoryPiece After(double x) const {
    TrajectoryPiece out = *this;
    out.span = forward() ? Interval{x, span.hi} : Interval{span.lo, x};
    return out;
  }
};

inline TrajectoryPiece HorizontalPiece(Interval span, double y, PieceKind kind,
                                       Traversal traversal) {
  return {span, Cubic::Constant(y), kind, traversal, std::nullopt};
}

// A point on a path: piece index and abscissa within that piece.
struct PathPosition {
  std::size_t piece = 0;
  double x = 0.0;

  friend bool operator==(const PathPosition&, const PathPosition&) = default;
};

inline bool PathBefore(const PathPosition& a, const PathPosition& b,
                       Traversal traversal_of_shared_piece) {
  if (a.piece != b.piece) return a.piece < b.piece;
  return traversal_of_shared_piece == Traversal::kForward ? a.x < b.x
                                                          : a.x > b.x;
}

class RefTrajectory {
 public:
  RefTrajectory() = default;

  // Validates the path: nonempty, well-formed pieces, consecutive pieces
  // meeting within kContinuityTolerance.
  static absl::StatusOr<RefTrajectory> Make(
      std::vector<TrajectoryPiece> pieces) {
    if (pieces.empty()) {
      return absl::InvalidArgumentError("trajectory has no pieces");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Interval s = pieces[i].span;
      if (!(s.lo <= s.hi) || !std::isfinite(s.lo) || !std::isfinite(s.hi)) {
        return absl::InvalidArgumentError(
            absl::StrCat("piece ", i, " has an empty or non-finite domain"));
      }
      if (i == 0) continue;
      const Point2 end = pieces[i - 1].EndPoint();
      const Point2 start = pieces[i].StartPoint();
      if (Distance(end, start) > kContinuityTolerance) {
        return absl::FailedPreconditionError(absl::StrCat(
            "discontinuity between pieces ", i - 1, " and ", i, ": (",
            end.x, ", ", end.y, ") vs (", start.x, ", ", start.y, ")"));
      }
    }
    RefTrajectory out;
    out.pieces_ = std::move(pieces);
    return out;
  }

  const std::vector<TrajectoryPiece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  const TrajectoryPiece& piece(std::size_t i) const { return pieces_[i]; }

  Interval domain() const {
    Interval d = pieces_.front().span;
    for (const auto& p : pieces_) {
      d.lo = std::min(d.lo, p.span.lo);
      d.hi = std::max(d.hi, p.span.hi);
    }
    return d;
  }

  Point2 StartPoint() const { return pieces_.front().StartPoint(); }
  Point2 EndPoint() const { return pieces_.back().EndPoint(); }
  PathPosition Start() const { return {0, pieces_.front().StartX()}; }
  PathPosition End() const {
    return {pieces_.size() - 1, pieces_.back().EndX()};
  }

  Point2 PointAt(const PathPosition& pos) const {
    return {pos.x, pieces_[pos.piece].Value(pos.x)};
  }

  // Pieces traversed before `pos` (the piece at `pos` cut there, possibly to
  // zero length).
  std::vector<TrajectoryPiece> Prefix(const PathPosition& pos) const {
    std::vector<TrajectoryPiece> out(pieces_.begin(),
                                     pieces_.begin() + pos.piece);
    out.push_back(pieces_[pos.piece].Before(pos.x));
    return out;
  }

  // Pieces traversed from `pos` on; zero-length leading cuts are dropped.
  std::vector<TrajectoryPiece> Suffix(const PathPosition& pos) const {
    std::vector<TrajectoryPiece> out;
    const TrajectoryPiece head = pieces_[pos.piece].After(pos.x);
    if (head.span.length() > 0.0 || pos.piece + 1 == pieces_.size()) {
      out.push_back(head);
    }
    out.insert(out.end(), pieces_.begin() + pos.piece + 1, pieces_.end());
    return out;
  }

 private:
  std::vector<TrajectoryPiece> pieces_;
};

// Straight line from the local origin to (x_g, 0).
inline absl::StatusOr<RefTrajectory> InitialTrajectory(double x_g) {
  if (!(x_g > 0.0) || !std::isfinite(x_g)) {
    return absl::InvalidArgumentError(
        absl::StrCat("nonpositive trajectory length: ", x_g));
  }
  return RefTrajectory::Make({HorizontalPiece(
      {0.0, x_g}, 0.0, PieceKind::kInitialLine, Traversal::kForward)});
}

struct CurvePoint {
  double y = 0.0;
  double slope = 0.0;
};

// Height and slope of the path at `x`. Where several pieces cover `x` the
// last one in path order wins, so at a junction of forward pieces the piece
// to the right is used.
inline absl::StatusOr<CurvePoint> EvalAndSlope(const RefTrajectory& traj,
                                               double x) {
  for (std::size_t i = traj.size(); i-- > 0;) {
    const TrajectoryPiece& p = traj.piece(i);
    if (p.span.Contains(x)) return CurvePoint{p.Value(x), p.Slope(x)};
  }
  const Interval d = traj.domain();
  return absl::OutOfRangeError(absl::StrCat(
      "abscissa ", x, " outside trajectory domain [", d.lo, ", ", d.hi, "]"));
}

namespace internal {

// Portion of piece `i` at or after `from` (the whole piece when i > from).
inline Interval RemainingSpan(const RefTrajectory& traj, std::size_t i,
                              const PathPosition& from) {
  const TrajectoryPiece& p = traj.piece(i);
  if (i != from.piece) return p.span;
  return p.After(from.x).span;
}

}  // namespace internal

// First position at or after `from` whose piece covers `x`.
inline std::optional<PathPosition> LocateForward(const RefTrajectory& traj,
                                                 const PathPosition& from,
                                                 double x) {
  for (std::size_t i = from.piece; i < traj.size(); ++i) {
    if (internal::RemainingSpan(traj, i, from).Contains(x)) return {{i, x}};
  }
  return std::nullopt;
}

// Last position at or after `from` whose piece covers `x`.
inline std::optional<PathPosition> LocateLast(const RefTrajectory& traj,
                                              const PathPosition& from,
                                              double x) {
  for (std::size_t i = traj.size(); i-- > from.piece;) {
    if (internal::RemainingSpan(traj, i, from).Contains(x)) return {{i, x}};
  }
  return std::nullopt;
}

// Walks back from `from` along already-traversed forward pieces until the
// abscissa decreases to `x`. Fails when a backward piece is met first.
inline std::optional<PathPosition> LocateBackward(const RefTrajectory& traj,
                                                  const PathPosition& from,
                                                  double x) {
  for (std::size_t i = from.piece + 1; i-- > 0;) {
    const TrajectoryPiece& p = traj.piece(i);
    if (!p.forward()) return std::nullopt;
    const Interval behind =
        i == from.piece ? Interval{p.span.lo, from.x} : p.span;
    if (behind.Contains(x)) return {{i, x}};
    if (x > behind.hi) return std::nullopt;
  }
  return std::nullopt;
}

// Reversed copies of the path between `to` and `from` (to before from), as
// backward connection pieces.
inline std::vector<TrajectoryPiece> RetracedPieces(const RefTrajectory& traj,
                                                   const PathPosition& from,
                                                   const PathPosition& to) {
  std::vector<TrajectoryPiece> out;
  for (std::size_t i = from.piece + 1; i-- > to.piece;) {
    TrajectoryPiece p = traj.piece(i);
    const double hi = i == from.piece ? from.x : p.span.hi;
    const double lo = i == to.piece ? to.x : p.span.lo;
    if (hi <= lo) continue;
    p.span = {lo, hi};
    p.kind = PieceKind::kConnection;
    p.traversal = Traversal::kBackward;
    p.turn.reset();
    out.push_back(p);
  }
  return out;
}

struct TurnAnchors {
  Point2 a, b, c, d;
  double slope_a = 0.0;
  double slope_b = 0.0;
  double slope_c = 0.0;
  double slope_d = 0.0;
};

// Three-part detour: Hermite cubic a->b, horizontal segment b->c, Hermite
// cubic c->d.
struct TurningTrajectory {
  TrajectoryPiece part1;
  TrajectoryPiece part2;
  TrajectoryPiece part3;
  TurnAnchors anchors;
  TurnTag tag;
  double rho = 0.0;
  double delta = 0.0;

  // Nondegenerate parts in path order.
  std::vector<TrajectoryPiece> Pieces() const {
    std::vector<TrajectoryPiece> out{part1};
    if (part2.span.length() > 0.0) out.push_back(part2);
    out.push_back(part3);
    return out;
  }
};

inline absl::StatusOr<TurningTrajectory> BuildTurningTrajectory(
    const TurnAnchors& anchors, TurnTag tag = {}, double rho = 0.0,
    double delta = 0.0) {
  const auto& [a, b, c, d, sa, sb, sc, sd] = anchors;
  if (!(a.x <= b.x && b.x <= c.x && c.x <= d.x)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "turn anchors out of order: ", a.x, ", ", b.x, ", ", c.x, ", ", d.x));
  }
  if (b.y != c.y) {
    return absl::InvalidArgumentError(
        absl::StrCat("turn anchors b and c differ in height: ", b.y, " vs ",
                     c.y));
  }
  auto first = SolveHermiteCubic(a, b, sa, sb);
  if (!first.ok()) return first.status();
  auto third = SolveHermiteCubic(c, d, sc, sd);
  if (!third.ok()) return third.status();
  TurningTrajectory out;
  out.part1 = {{a.x, b.x}, *first, PieceKind::kTurnI, Traversal::kForward,
               tag};
  out.part2 = {{b.x, c.x}, Cubic::Constant(b.y), PieceKind::kTurnII,
               Traversal::kForward, tag};
  out.part3 = {{c.x, d.x}, *third, PieceKind::kTurnIII, Traversal::kForward,
               tag};
  out.anchors = anchors;
  out.tag = tag;
  out.rho = rho;
  out.delta = delta;
  return out;
}

struct Assembly {
  RefTrajectory trajectory;
  // The robot's position on the new path.
  PathPosition progress;
};

// Splices `turn` into `traj` for a robot at `progress`: kept part before the
// turn, optional backward connection to the turn start, the turn, the kept
// part after it, and an optional backward connection from the turn end to
// the goal (x_g, 0). `y_now` is used for the connection when the turn
// starts behind the local origin.
inline absl::StatusOr<Assembly> AssembleModified(const RefTrajectory& traj,
                                                 const PathPosition& progress,
                                                 const TurningTrajectory& turn,
                                                 double y_now, double x_g) {
  const double x_now = progress.x;
  const double x_a = turn.anchors.a.x;
  const double x_d = turn.anchors.d.x;

  std::vector<TrajectoryPiece> pieces;
  PathPosition resume = progress;
  if (x_a >= x_now) {
    auto start = LocateForward(traj, progress, x_a);
    if (!start.has_value()) {
      return absl::FailedPreconditionError(
          absl::StrCat("turn start ", x_a, " not ahead on the trajectory"));
    }
    resume = *start;
    pieces = traj.Prefix(*start);
  } else {
    pieces = traj.Prefix(progress);
    std::optional<PathPosition> back;
    if (x_a >= 0.0) back = LocateBackward(traj, progress, x_a);
    if (back.has_value()) {
      auto retraced = RetracedPieces(traj, progress, *back);
      pieces.insert(pieces.end(), retraced.begin(), retraced.end());
    } else {
      pieces.push_back(HorizontalPiece({x_a, x_now}, y_now,
                                       PieceKind::kConnection,
                                       Traversal::kBackward));
    }
  }
  for (const TrajectoryPiece& p : turn.Pieces()) pieces.push_back(p);

  if (x_d < x_g) {
    auto rejoin = LocateLast(traj, resume, x_d);
    if (!rejoin.has_value() ||
        PathBefore(*rejoin, resume, traj.piece(resume.piece).traversal)) {
      return absl::FailedPreconditionError(
          absl::StrCat("turn end ", x_d, " not ahead on the trajectory"));
    }
    auto rest = traj.Suffix(*rejoin);
    pieces.insert(pieces.end(), rest.begin(), rest.end());
  } else if (x_d > x_g) {
    pieces.push_back(HorizontalPiece({x_g, x_d}, 0.0, PieceKind::kConnection,
                                     Traversal::kBackward));
  }

  auto out = RefTrajectory::Make(std::move(pieces));
  if (!out.ok()) return out.status();
  return Assembly{*std::move(out), progress};
}

// Convenience form for a robot on the trajectory at abscissa `x_now` (first
// forward occurrence).
inline absl::StatusOr<RefTrajectory> AssembleModified(
    const RefTrajectory& traj, const TurningTrajectory& turn, double x_now,
    double y_now, double x_g) {
  auto progress = LocateForward(traj, traj.Start(), x_now);
  if (!progress.has_value()) {
    return absl::OutOfRangeError(
        absl::StrCat("robot abscissa ", x_now, " not on the trajectory"));
  }
  auto out = AssembleModified(traj, *progress, turn, y_now, x_g);
  if (!out.ok()) return out.status();
  return std::move(out->trajectory);
}

}  // namespace rpcs

#endif  // RPCS_TRAJECTORY_HPP_
