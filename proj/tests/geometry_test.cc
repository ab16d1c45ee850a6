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

#include "rpcs/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace rpcs {
namespace {

constexpr double kPi = std::numbers::pi;

ConvexRegion MakeBox(double x0, double y0, double x1, double y1) {
  return *ConvexRegion::MakePolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

// y = slope * x + offset over a fixed domain.
struct Line {
  Interval span;
  double slope = 0.0;
  double offset = 0.0;
  Interval domain() const { return span; }
  double Value(double x) const { return slope * x + offset; }
};

struct CubicCurve {
  Interval span;
  double a, b, c, d;
  Interval domain() const { return span; }
  double Value(double x) const { return ((a * x + b) * x + c) * x + d; }
};

TEST(FrameTest, ScenarioFrameIsTranslation) {
  auto frame = Frame::FromEndpoints({2, 10}, {46.5, 10});
  ASSERT_TRUE(frame.ok());
  EXPECT_DOUBLE_EQ(frame->angle(), 0.0);
  const Point2 g = frame->ToLocal({46.5, 10});
  EXPECT_NEAR(g.x, 44.5, 1e-9);
  EXPECT_NEAR(g.y, 0.0, 1e-9);
  const Point2 s = frame->ToLocal({2, 10});
  EXPECT_EQ(s, (Point2{0, 0}));
}

TEST(FrameTest, VerticalGoals) {
  auto up = Frame::FromEndpoints({0, 0}, {0, 5});
  ASSERT_TRUE(up.ok());
  EXPECT_NEAR(up->angle(), kPi / 2, 1e-15);
  auto down = Frame::FromEndpoints({0, 0}, {0, -5});
  ASSERT_TRUE(down.ok());
  EXPECT_NEAR(down->angle(), -kPi / 2, 1e-15);
  const Point2 g = down->ToLocal({0, -5});
  EXPECT_NEAR(g.x, 5.0, 1e-12);
  EXPECT_NEAR(g.y, 0.0, 1e-12);
}

TEST(FrameTest, GoalBehindStartLandsOnPositiveAxis) {
  auto frame = Frame::FromEndpoints({3, 1}, {-4, -2});
  ASSERT_TRUE(frame.ok());
  const Point2 g = frame->ToLocal({-4, -2});
  EXPECT_NEAR(g.x, std::hypot(7.0, 3.0), 1e-9);
  EXPECT_NEAR(g.y, 0.0, 1e-9);
}

TEST(FrameTest, DegenerateEndpoints) {
  auto frame = Frame::FromEndpoints({1, 1}, {1, 1});
  EXPECT_EQ(frame.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(TransformTest, Examples) {
  const Frame identity({0, 0}, 0.0);
  EXPECT_EQ(Transform(identity, {3, 4}, TransformDirection::kToLocal),
            (Point2{3, 4}));
  const Frame quarter({0, 0}, kPi / 2);
  const Point2 q = Transform(quarter, {0, 1}, TransformDirection::kToLocal);
  EXPECT_NEAR(q.x, 1.0, 1e-15);
  EXPECT_NEAR(q.y, 0.0, 1e-15);
}

TEST(TransformTest, RoundTripAndIsometry) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 10000; ++i) {
    const Frame frame({coord(rng), coord(rng)}, angle(rng));
    const Point2 p{coord(rng), coord(rng)};
    const Point2 q{coord(rng), coord(rng)};
    const Point2 back = frame.ToGlobal(frame.ToLocal(p));
    ASSERT_NEAR(back.x, p.x, 1e-12 * 200);
    ASSERT_NEAR(back.y, p.y, 1e-12 * 200);
    const double before = Distance(p, q);
    const double after = Distance(frame.ToLocal(p), frame.ToLocal(q));
    ASSERT_NEAR(before, after, 1e-12 * std::max(1.0, before));
  }
}

TEST(ConvexRegionTest, RejectsBadShapes) {
  EXPECT_FALSE(ConvexRegion::MakeDisc({0, 0}, 0.0).ok());
  EXPECT_FALSE(ConvexRegion::MakePolygon({{0, 0}, {1, 0}}).ok());
  // Clockwise square.
  EXPECT_FALSE(
      ConvexRegion::MakePolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}).ok());
  // Non-convex arrow.
  EXPECT_FALSE(ConvexRegion::MakePolygon(
                   {{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}})
                   .ok());
}

TEST(EnlargeTest, DiscGrowsByRadius) {
  auto disc = *ConvexRegion::MakeDisc({5, 0}, 1);
  auto grown = Enlarge(disc, 1);
  ASSERT_TRUE(grown.ok());
  ASSERT_TRUE(grown->boundary.is_disc());
  EXPECT_EQ(grown->boundary.disc()->center, (Point2{5, 0}));
  EXPECT_DOUBLE_EQ(grown->boundary.disc()->radius, 2.0);
}

TEST(EnlargeTest, ZeroInflationKeepsShape) {
  const ConvexRegion box = MakeBox(0, 0, 1, 1);
  auto same = Enlarge(box, 0.0);
  ASSERT_TRUE(same.ok());
  EXPECT_EQ(same->boundary.polygon()->vertices, box.polygon()->vertices);
}

TEST(EnlargeTest, UnitSquareOffset) {
  auto grown = Enlarge(MakeBox(0, 0, 1, 1), 1.0);
  ASSERT_TRUE(grown.ok());
  const Interval xr = grown->boundary.XRange();
  EXPECT_NEAR(xr.lo, -1.0, 1e-12);
  EXPECT_NEAR(xr.hi, 2.0, 1e-12);
  // Corner arcs are approximated from outside by at most r (1/cos(h) - 1).
  const double h = (kPi / 2) / (2 * kDefaultArcPoints);
  for (const Point2& v : grown->boundary.polygon()->vertices) {
    const double d = grown->source.DistanceFrom(v);
    EXPECT_GE(d, 1.0 - 1e-12);
    EXPECT_LE(d, 1.0 / std::cos(h) + 1e-12);
  }
}

TEST(EnlargeTest, NegativeInflation) {
  EXPECT_EQ(Enlarge(MakeBox(0, 0, 1, 1), -0.5).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(EnlargeTest, MonotoneInInflation) {
  const ConvexRegion tri = *ConvexRegion::MakePolygon({{0, 0}, {3, 1}, {1, 2}});
  const EnlargedRegion small = *Enlarge(tri, 0.5);
  const EnlargedRegion large = *Enlarge(tri, 1.0);
  for (const Point2& v : small.boundary.polygon()->vertices) {
    EXPECT_TRUE(large.boundary.Contains(v));
  }
  // Corner sweeps are below pi, so the outer approximation reaches at most
  // r (1 / cos(pi / 16) - 1) beyond the exact offset.
  const double slack = 1.0 / std::cos(kPi / (2 * kDefaultArcPoints)) - 1;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-4.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const Point2 p{coord(rng), coord(rng)};
    EXPECT_GE(DistPointRegion(p, large) + slack,
              DistPointRegion(p, tri) - 1.0);
  }
}

TEST(DistPointRegionTest, Examples) {
  EXPECT_DOUBLE_EQ(DistPointRegion({0, 0}, *ConvexRegion::MakeDisc({3, 0}, 1)),
                   2.0);
  EXPECT_EQ(DistPointRegion({0.5, 0.5}, MakeBox(0, 0, 1, 1)), 0.0);
  EXPECT_EQ(DistPointRegion({1, 0.5}, MakeBox(0, 0, 1, 1)), 0.0);
  EXPECT_NEAR(DistPointRegion({0, 0}, MakeBox(1, 1, 2, 2)), std::sqrt(2.0),
              1e-15);
}

TEST(RegionExtremesTest, DiscAboveLine) {
  const EnlargedRegion e = *Enlarge(*ConvexRegion::MakeDisc({5, 2}, 2), 0.0);
  auto ext = ComputeRegionExtremes(
      e, SideFilter{[](double) { return 0.0; }, +1});
  ASSERT_TRUE(ext.ok());
  EXPECT_NEAR(ext->min_x, 3.0, 1e-9);
  EXPECT_NEAR(ext->max_x, 7.0, 1e-9);
  EXPECT_DOUBLE_EQ(ext->extreme_x.lo, 5.0);
  EXPECT_DOUBLE_EQ(ext->extreme_x.hi, 5.0);
  EXPECT_DOUBLE_EQ(ext->extreme_y, 4.0);
}

TEST(RegionExtremesTest, DiscBelowLineMirrors) {
  const EnlargedRegion e = *Enlarge(*ConvexRegion::MakeDisc({5, -2}, 2), 0.0);
  auto ext = ComputeRegionExtremes(
      e, SideFilter{[](double) { return 0.0; }, -1});
  ASSERT_TRUE(ext.ok());
  EXPECT_NEAR(ext->min_x, 3.0, 1e-9);
  EXPECT_NEAR(ext->max_x, 7.0, 1e-9);
  EXPECT_DOUBLE_EQ(ext->extreme_y, -4.0);
}

TEST(RegionExtremesTest, UnfilteredBoxMatchesVertices) {
  auto ext = ComputeRegionExtremes(MakeBox(-1, -2, 3, 5), std::nullopt);
  ASSERT_TRUE(ext.ok());
  EXPECT_EQ(ext->min_x, -1.0);
  EXPECT_EQ(ext->max_x, 3.0);
  EXPECT_EQ(ext->min_y, -2.0);
  EXPECT_EQ(ext->max_y, 5.0);
  EXPECT_EQ(ext->extreme_y, 5.0);
  EXPECT_EQ(ext->extreme_x, (Interval{-1, 3}));
}

TEST(RegionExtremesTest, FlatTopAttainsMaxOnSegment) {
  auto ext = ComputeRegionExtremes(
      MakeBox(1, 1, 4, 3), SideFilter{[](double) { return 0.0; }, +1});
  ASSERT_TRUE(ext.ok());
  EXPECT_EQ(ext->extreme_x, (Interval{1, 4}));
  EXPECT_EQ(ext->extreme_y, 3.0);
  EXPECT_EQ(ext->min_x, 1.0);
  EXPECT_EQ(ext->max_x, 4.0);
}

TEST(RegionExtremesTest, FilterAgainstSlopedReference) {
  // Box [0,4]x[0,2] above y = x - 1: kept where the top edge 2 > x - 1.
  auto ext = ComputeRegionExtremes(
      MakeBox(0, 0, 4, 2), SideFilter{[](double x) { return x - 1; }, +1});
  ASSERT_TRUE(ext.ok());
  EXPECT_EQ(ext->min_x, 0.0);
  EXPECT_NEAR(ext->max_x, 3.0, 1e-9);
  EXPECT_EQ(ext->extreme_y, 2.0);
}

TEST(RegionExtremesTest, BoundaryPointsBelongToNegativeSide) {
  // The box touches y = 0 from above only along its bottom edge.
  const ConvexRegion box = MakeBox(0, 0, 1, 1);
  auto below = ComputeRegionExtremes(
      box, SideFilter{[](double) { return 0.0; }, -1});
  ASSERT_TRUE(below.ok());
  EXPECT_EQ(below->extreme_y, 0.0);
  auto empty = ComputeRegionExtremes(
      box, SideFilter{[](double) { return 5.0; }, +1});
  EXPECT_EQ(empty.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(CurveRegionIntersectTest, LineThroughDisc) {
  const auto hits = CurveRegionIntersect(Line{{0, 10}, 0, 0},
                                         *ConvexRegion::MakeDisc({5, 0}, 1));
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_NEAR(hits[0].lo, 4.0, 1e-9);
  EXPECT_NEAR(hits[0].hi, 6.0, 1e-9);
}

TEST(CurveRegionIntersectTest, LineClearOfDisc) {
  EXPECT_TRUE(CurveRegionIntersect(Line{{0, 10}, 0, 5},
                                   *ConvexRegion::MakeDisc({5, 0}, 1))
                  .empty());
}

TEST(CurveRegionIntersectTest, TangentCubicIsEmptyOrDegenerate) {
  // y = 1 - (x - 5)^2 = -x^2 + 10x - 24 peaks at (5, 1), touching the disc
  // of radius 1 about (5, 2) from below.
  const CubicCurve curve{{3, 7}, 0.0, -1.0, 10.0, -24.0};
  const auto hits =
      CurveRegionIntersect(curve, *ConvexRegion::MakeDisc({5, 2}, 1));
  for (const Interval& i : hits) EXPECT_LT(i.length(), 1e-3);
}

TEST(CurveRegionIntersectTest, AgreesWithDenseSampler) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-0.2, 0.2);
  std::uniform_real_distribution<double> pos(2.0, 8.0);
  std::uniform_real_distribution<double> size(0.5, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const CubicCurve curve{{0, 10}, coef(rng) * 0.05, coef(rng), coef(rng),
                           coef(rng) * 5};
    const double cx = pos(rng);
    const ConvexRegion region =
        trial % 2 == 0
            ? *ConvexRegion::MakeDisc({cx, coef(rng) * 5}, size(rng))
            : (*Enlarge(MakeBox(cx - 1, -1, cx + 1, 0.5), size(rng) * 0.5))
                  .boundary;
    const auto hits = CurveRegionIntersect(curve, region);
    // Brute-force transitions at step 1e-4.
    std::vector<double> edges;
    bool prev = region.Contains({0.0, curve.Value(0.0)});
    if (prev) edges.push_back(0.0);
    for (int i = 1; i <= 100000; ++i) {
      const double x = i * 1e-4;
      const bool in = region.Contains({x, curve.Value(x)});
      if (in != prev) edges.push_back(x);
      prev = in;
    }
    if (prev) edges.push_back(10.0);
    std::vector<double> reported;
    for (const Interval& i : hits) {
      reported.push_back(i.lo);
      reported.push_back(i.hi);
    }
    ASSERT_EQ(reported.size(), edges.size()) << "trial " << trial;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      EXPECT_NEAR(reported[i], edges[i], 1e-3) << "trial " << trial;
    }
  }
}

}  // namespace
}  // namespace rpcs
