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
/// Planar geometry for the planner: local frames, convex obstacle regions,
/// robot-size inflation, distances, side-filtered extremes and curve/region
/// intersection.

#ifndef RPCS_GEOMETRY_HPP_
#define RPCS_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace rpcs {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double Dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double Norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double Distance(Point2 a, Point2 b) { return Norm(a - b); }

// Sign with sgn(0) = -1, so boundary points always fall on the negative side.
inline int Sgn(double value) { return value > 0.0 ? 1 : -1; }

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool Contains(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class TransformDirection { kToLocal, kToGlobal };

// Frame whose origin is the start position and whose x-axis points at the
// goal. Local coordinates are R (p - origin) with
// R = [[cos a, sin a], [-sin a, cos a]].
class Frame {
 public:
  Frame() = default;
  Frame(Point2 origin, double angle)
      : origin_(origin),
        angle_(angle),
        cos_(std::cos(angle)),
        sin_(std::sin(angle)) {}

  // Frame from start `s` towards goal `g`. The angle is the full-circle
  // bearing of g - s, so the goal always lands on the positive local x-axis.
  static absl::StatusOr<Frame> FromEndpoints(Point2 s, Point2 g) {
    if (s == g) {
      return absl::InvalidArgumentError(
          "degenerate endpoints: start and goal coincide");
    }
    const double dx = g.x - s.x;
    const double dy = g.y - s.y;
    const double angle = dx != 0.0 ? std::atan2(dy, dx)
                                   : 0.5 * std::numbers::pi * Sgn(dy);
    return Frame(s, angle);
  }

  Point2 origin() const { return origin_; }
  double angle() const { return angle_; }

  Point2 ToLocal(Point2 p) const {
    const Point2 d = p - origin_;
    return {cos_ * d.x + sin_ * d.y, -sin_ * d.x + cos_ * d.y};
  }

  Point2 ToGlobal(Point2 q) const {
    return Point2{cos_ * q.x - sin_ * q.y, sin_ * q.x + cos_ * q.y} + origin_;
  }

  Point2 Apply(Point2 p, TransformDirection direction) const {
    return direction == TransformDirection::kToLocal ? ToLocal(p)
                                                     : ToGlobal(p);
  }

 private:
  Point2 origin_;
  double angle_ = 0.0;
  double cos_ = 1.0;
  double sin_ = 0.0;
};

inline Point2 Transform(const Frame& frame, Point2 p,
                        TransformDirection direction) {
  return frame.Apply(p, direction);
}

struct Disc {
  Point2 center;
  double radius = 0.0;
};

// Convex polygon with counterclockwise vertices.
struct Polygon {
  std::vector<Point2> vertices;
};

// A closed convex region: a disc or a convex polygon.
class ConvexRegion {
 public:
  static absl::StatusOr<ConvexRegion> MakeDisc(Point2 center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius) ||
        !std::isfinite(center.x) || !std::isfinite(center.y)) {
      return absl::InvalidArgumentError(
          absl::StrCat("disc radius must be positive and finite, got ",
                       radius));
    }
    return ConvexRegion(Disc{center, radius});
  }

  static absl::StatusOr<ConvexRegion> MakePolygon(
      std::vector<Point2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) {
      return absl::InvalidArgumentError(
          absl::StrCat("polygon needs at least 3 vertices, got ", n));
    }
    for (const Point2& v : vertices) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        return absl::InvalidArgumentError("polygon vertex is not finite");
      }
    }
    bool any_turn = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = vertices[i];
      const Point2 b = vertices[(i + 1) % n];
      const Point2 c = vertices[(i + 2) % n];
      const double turn = Cross(b - a, c - b);
      const double scale = Norm(b - a) * Norm(c - b);
      if (turn < -1e-12 * scale) {
        return absl::InvalidArgumentError(
            "polygon must be convex with counterclockwise vertices");
      }
      any_turn = any_turn || turn > 1e-12 * scale;
    }
    if (!any_turn) {
      return absl::InvalidArgumentError("polygon is degenerate");
    }
    return ConvexRegion(Polygon{std::move(vertices)});
  }

  bool is_disc() const { return std::holds_alternative<Disc>(shape_); }
  const Disc* disc() const { return std::get_if<Disc>(&shape_); }
  const Polygon* polygon() const { return std::get_if<Polygon>(&shape_); }

  bool Contains(Point2 p) const {
    if (const Disc* d = disc()) {
      return Distance(p, d->center) <= d->radius;
    }
    const auto& v = polygon()->vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point2 a = v[i];
      const Point2 b = v[(i + 1) % v.size()];
      if (Cross(b - a, p - a) < -1e-12 * Norm(b - a)) return false;
    }
    return true;
  }

  // Euclidean distance from `p` to the region; zero inside.
  double DistanceFrom(Point2 p) const {
    if (const Disc* d = disc()) {
      return std::max(0.0, Distance(p, d->center) - d->radius);
    }
    if (Contains(p)) return 0.0;
    const auto& v = polygon()->vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      best = std::min(best, SegmentDistance(p, v[i], v[(i + 1) % v.size()]));
    }
    return best;
  }

  // Largest distance from `p` to any point of the region.
  double MaxDistanceFrom(Point2 p) const {
    if (const Disc* d = disc()) return Distance(p, d->center) + d->radius;
    double best = 0.0;
    for (const Point2& v : polygon()->vertices) {
      best = std::max(best, Distance(p, v));
    }
    return best;
  }

  // Largest distance between two points of the region.
  double Diameter() const {
    if (const Disc* d = disc()) return 2.0 * d->radius;
    const auto& v = polygon()->vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        best = std::max(best, Distance(v[i], v[j]));
      }
    }
    return best;
  }

  Interval XRange() const {
    if (const Disc* d = disc()) {
      return {d->center.x - d->radius, d->center.x + d->radius};
    }
    Interval range{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
    for (const Point2& v : polygon()->vertices) {
      range.lo = std::min(range.lo, v.x);
      range.hi = std::max(range.hi, v.x);
    }
    return range;
  }

  Interval YRange() const {
    if (const Disc* d = disc()) {
      return {d->center.y - d->radius, d->center.y + d->radius};
    }
    Interval range{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
    for (const Point2& v : polygon()->vertices) {
      range.lo = std::min(range.lo, v.y);
      range.hi = std::max(range.hi, v.y);
    }
    return range;
  }

  // Intersection of the vertical line at `x` with the region.
  std::optional<Interval> VerticalSlice(double x) const {
    if (const Disc* d = disc()) {
      const double dx = x - d->center.x;
      const double h2 = d->radius * d->radius - dx * dx;
      if (h2 < 0.0) return std::nullopt;
      const double h = std::sqrt(h2);
      return Interval{d->center.y - h, d->center.y + h};
    }
    const auto& v = polygon()->vertices;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point2 a = v[i];
      const Point2 b = v[(i + 1) % v.size()];
      if (x < std::min(a.x, b.x) || x > std::max(a.x, b.x)) continue;
      if (a.x == b.x) {
        lo = std::min({lo, a.y, b.y});
        hi = std::max({hi, a.y, b.y});
      } else {
        const double y = a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
  }

  // Abscissa interval where the region attains its largest `side` * y,
  // together with that ordinate. `side` is +1 (top) or -1 (bottom).
  std::pair<Interval, double> ExtremeOrdinate(int side) const {
    if (const Disc* d = disc()) {
      return {{d->center.x, d->center.x},
              d->center.y + side * d->radius};
    }
    const auto& v = polygon()->vertices;
    double best = -std::numeric_limits<double>::infinity();
    for (const Point2& p : v) best = std::max(best, side * p.y);
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    Interval xs{std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
    for (const Point2& p : v) {
      if (side * p.y >= best - tol) {
        xs.lo = std::min(xs.lo, p.x);
        xs.hi = std::max(xs.hi, p.x);
      }
    }
    return {xs, side * best};
  }

  ConvexRegion Transformed(const Frame& frame,
                           TransformDirection direction) const {
    if (const Disc* d = disc()) {
      return ConvexRegion(Disc{frame.Apply(d->center, direction), d->radius});
    }
    Polygon out;
    out.vertices.reserve(polygon()->vertices.size());
    for (const Point2& v : polygon()->vertices) {
      out.vertices.push_back(frame.Apply(v, direction));
    }
    return ConvexRegion(std::move(out));
  }

  static double SegmentDistance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = Dot(ab, ab);
    if (len2 == 0.0) return Distance(p, a);
    const double t = std::clamp(Dot(p - a, ab) / len2, 0.0, 1.0);
    return Distance(p, a + t * ab);
  }

 private:
  explicit ConvexRegion(Disc d) : shape_(d) {}
  explicit ConvexRegion(Polygon p) : shape_(std::move(p)) {}

  std::variant<Disc, Polygon> shape_;
};

// An obstacle region inflated by the robot size.
struct EnlargedRegion {
  ConvexRegion source;
  double inflation = 0.0;
  ConvexRegion boundary;
};

inline constexpr int kDefaultArcPoints = 8;

// Minkowski sum of `region` with a disc of radius `r`. Discs grow exactly;
// polygon corners are replaced by `arc_points` vertices on tangent lines of
// the corner arc, so the result is a convex polygon containing the exact
// offset region.
inline absl::StatusOr<EnlargedRegion> Enlarge(
    const ConvexRegion& region, double r,
    int arc_points = kDefaultArcPoints) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    return absl::InvalidArgumentError(
        absl::StrCat("negative inflation: ", r));
  }
  if (arc_points < 1) {
    return absl::InvalidArgumentError("arc_points must be at least 1");
  }
  if (r == 0.0) return EnlargedRegion{region, 0.0, region};
  if (const Disc* d = region.disc()) {
    auto grown = ConvexRegion::MakeDisc(d->center, d->radius + r);
    if (!grown.ok()) return grown.status();
    return EnlargedRegion{region, r, *std::move(grown)};
  }
  const auto& v = region.polygon()->vertices;
  const std::size_t n = v.size();
  auto outward_angle = [](Point2 a, Point2 b) {
    const Point2 e = b - a;
    return std::atan2(-e.x, e.y);
  };
  std::vector<Point2> out;
  out.reserve(n * static_cast<std::size_t>(arc_points));
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 prev = v[(i + n - 1) % n];
    const Point2 cur = v[i];
    const Point2 next = v[(i + 1) % n];
    if (cur == prev || cur == next) continue;
    const double start = outward_angle(prev, cur);
    double sweep = outward_angle(cur, next) - start;
    while (sweep < 0.0) sweep += 2.0 * std::numbers::pi;
    while (sweep >= 2.0 * std::numbers::pi) sweep -= 2.0 * std::numbers::pi;
    if (sweep < 1e-12) {
      out.push_back(cur + r * Point2{std::cos(start), std::sin(start)});
      continue;
    }
    const double half = sweep / (2.0 * arc_points);
    const double reach = r / std::cos(half);
    for (int j = 0; j < arc_points; ++j) {
      const double a = start + (2 * j + 1) * half;
      out.push_back(cur + reach * Point2{std::cos(a), std::sin(a)});
    }
  }
  auto boundary = ConvexRegion::MakePolygon(std::move(out));
  if (!boundary.ok()) return boundary.status();
  return EnlargedRegion{region, r, *std::move(boundary)};
}

inline double DistPointRegion(Point2 p, const ConvexRegion& region) {
  return region.DistanceFrom(p);
}

inline double DistPointRegion(Point2 p, const EnlargedRegion& region) {
  return region.boundary.DistanceFrom(p);
}

// Keeps points p with sgn(p.y - reference(p.x)) == side.
struct SideFilter {
  std::function<double(double)> reference;
  int side = 1;
};

struct RegionExtremes {
  double min_x = 0.0;
  double max_x = 0.0;
  // Ordinate bounds of the unfiltered region.
  double min_y = 0.0;
  double max_y = 0.0;
  // Abscissa interval of the points attaining the extreme ordinate.
  Interval extreme_x;
  // Signed extreme ordinate.
  double extreme_y = 0.0;
};

namespace internal {

// Finds the boundary between `keep(a)` and `keep(b)` (which differ).
template <typename Pred>
double BisectBoundary(double a, double b, const Pred& keep) {
  const bool keep_a = keep(a);
  for (int i = 0; i < 80 && b - a > 1e-12 * std::max(1.0, std::abs(a));
       ++i) {
    const double m = 0.5 * (a + b);
    if (keep(m) == keep_a) {
      a = m;
    } else {
      b = m;
    }
  }
  return keep_a ? a : b;
}

}  // namespace internal

// Extremes of the region, optionally restricted to one side of a reference
// curve. Without a filter the extreme ordinate is the one of largest
// magnitude; with a filter it is the farthest ordinate on the kept side.
inline absl::StatusOr<RegionExtremes> ComputeRegionExtremes(
    const ConvexRegion& region, const std::optional<SideFilter>& filter) {
  RegionExtremes out;
  const Interval xr = region.XRange();
  const Interval yr = region.YRange();
  out.min_y = yr.lo;
  out.max_y = yr.hi;
  if (!filter.has_value()) {
    out.min_x = xr.lo;
    out.max_x = xr.hi;
    const int side = yr.hi >= -yr.lo ? 1 : -1;
    std::tie(out.extreme_x, out.extreme_y) = region.ExtremeOrdinate(side);
    return out;
  }

  const int side = filter->side;
  // The kept part of a vertical slice is nonempty iff its far edge lies
  // strictly on the kept side (or on/below the curve for side -1).
  auto edge = [&](double x) -> std::optional<double> {
    auto slice = region.VerticalSlice(x);
    if (!slice.has_value()) return std::nullopt;
    return side > 0 ? slice->hi : slice->lo;
  };
  auto keep = [&](double x) {
    const auto e = edge(x);
    if (!e.has_value()) return false;
    const double gap = *e - filter->reference(x);
    return side > 0 ? gap > 0.0 : gap <= 0.0;
  };

  constexpr int kSamples = 1024;
  std::vector<double> xs;
  xs.reserve(kSamples + 16);
  for (int i = 0; i <= kSamples; ++i) {
    xs.push_back(xr.lo + (xr.hi - xr.lo) * i / kSamples);
  }
  if (const Polygon* poly = region.polygon()) {
    for (const Point2& v : poly->vertices) xs.push_back(v.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Interval> kept;
  bool inside = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool k = keep(xs[i]);
    if (k && !inside) {
      const double lo =
          i == 0 ? xs[i] : internal::BisectBoundary(xs[i - 1], xs[i], keep);
      kept.push_back({lo, xs[i]});
    } else if (!k && inside) {
      kept.back().hi = internal::BisectBoundary(xs[i - 1], xs[i], keep);
    } else if (k) {
      kept.back().hi = xs[i];
    }
    inside = k;
  }
  if (kept.empty()) {
    return absl::FailedPreconditionError(
        "region is empty after side filtering");
  }
  out.min_x = kept.front().lo;
  out.max_x = kept.back().hi;

  // side * edge(x) is concave, so on each kept interval its maximum is the
  // global one when reachable and an interval end otherwise.
  const auto [top_x, top_y] = region.ExtremeOrdinate(side);
  struct Candidate {
    Interval x;
    double score;
  };
  std::vector<Candidate> candidates;
  for (const Interval& k : kept) {
    const double lo = std::max(top_x.lo, k.lo);
    const double hi = std::min(top_x.hi, k.hi);
    if (lo <= hi) {
      candidates.push_back({{lo, hi}, side * top_y});
    } else {
      const double x = top_x.hi < k.lo ? k.lo : k.hi;
      const auto e = edge(x);
      if (e.has_value()) candidates.push_back({{x, x}, side * *e});
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) best = std::max(best, c.score);
  const double tol = 1e-9 * std::max(1.0, std::abs(best));
  out.extreme_x = {std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  for (const Candidate& c : candidates) {
    if (c.score >= best - tol) {
      out.extreme_x.lo = std::min(out.extreme_x.lo, c.x.lo);
      out.extreme_x.hi = std::max(out.extreme_x.hi, c.x.hi);
    }
  }
  out.extreme_y = side * best;
  return out;
}

inline absl::StatusOr<RegionExtremes> ComputeRegionExtremes(
    const EnlargedRegion& region, const std::optional<SideFilter>& filter) {
  return ComputeRegionExtremes(region.boundary, filter);
}

// A graph curve y = f(x) over a closed abscissa domain.
template <typename Curve>
concept GraphCurve = requires(const Curve& c, double x) {
  { c.domain() } -> std::convertible_to<Interval>;
  { c.Value(x) } -> std::convertible_to<double>;
};

// Sorted, disjoint abscissa intervals where (x, curve(x)) lies in `region`.
// The curve is sampled at step min(0.01, domain/100) over its overlap with
// the region's x-range; each inside/outside change is refined by bisection
// to 1e-9.
template <GraphCurve Curve>
std::vector<Interval> CurveRegionIntersect(const Curve& curve,
                                           const ConvexRegion& region) {
  const Interval domain = curve.domain();
  const Interval xr = region.XRange();
  const double a = std::max(domain.lo, xr.lo);
  const double b = std::min(domain.hi, xr.hi);
  std::vector<Interval> out;
  if (a > b) return out;
  auto inside = [&](double x) {
    return region.Contains({x, curve.Value(x)});
  };
  if (a == b) {
    if (inside(a)) out.push_back({a, a});
    return out;
  }
  const double step = std::min(0.01, domain.length() / 100.0);
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / step));
  auto refine = [&](double lo, double hi) {
    const bool in_lo = inside(lo);
    while (hi - lo > 1e-9) {
      const double m = 0.5 * (lo + hi);
      if (inside(m) == in_lo) {
        lo = m;
      } else {
        hi = m;
      }
    }
    return in_lo ? lo : hi;
  };
  bool prev_in = inside(a);
  double prev_x = a;
  if (prev_in) out.push_back({a, a});
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = i == n ? b : a + (b - a) * static_cast<double>(i) / n;
    const bool in = inside(x);
    if (in && !prev_in) {
      out.push_back({refine(prev_x, x), x});
    } else if (!in && prev_in) {
      out.back().hi = refine(prev_x, x);
    } else if (in) {
      out.back().hi = x;
    }
    prev_in = in;
    prev_x = x;
  }
  return out;
}

template <GraphCurve Curve>
std::vector<Interval> CurveRegionIntersect(const Curve& curve,
                                           const EnlargedRegion& region) {
  return CurveRegionIntersect(curve, region.boundary);
}

}  // namespace rpcs

#endif  // RPCS_GEOMETRY_HPP_
