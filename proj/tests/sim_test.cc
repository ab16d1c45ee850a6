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

#include "rpcs/sim.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "random_scenarios.hpp"

namespace rpcs {
namespace {

using std::numbers::pi;

Environment DiscEnvironment(Point2 center, double radius, double gamma) {
  Environment env;
  env.sensing_radius = gamma;
  env.obstacles.emplace(1, *ConvexRegion::MakeDisc(center, radius));
  return env;
}

TEST(SenseUpdateTest, ClosedDiscInclusion) {
  const Environment env = DiscEnvironment({5, 0}, 1, 6);
  const KnownSet known = SenseUpdate(env, {0, 0}, {}, 0.5);
  EXPECT_TRUE(known.ids.contains(1));
  EXPECT_EQ(known.first_seen.at(1), 0.5);
}

TEST(SenseUpdateTest, JustOutOfRange) {
  const Environment env = DiscEnvironment({5, 0}, 1, 5.9);
  EXPECT_TRUE(SenseUpdate(env, {0, 0}, {}, 0).ids.empty());
}

TEST(SenseUpdateTest, PolygonNeedsEveryVertex) {
  Environment env;
  env.obstacles.emplace(
      3, *ConvexRegion::MakePolygon({{4, -1}, {6, -1}, {6, 1}, {4, 1}}));
  // Far corner at distance sqrt(37) > 6.
  EXPECT_TRUE(SenseUpdate(env, {0, 0}, {}, 0).ids.empty());
  EXPECT_TRUE(SenseUpdate(env, {0.2, 0}, {}, 0).ids.contains(3));
}

TEST(SenseUpdateTest, KnowledgeIsMonotone) {
  const Environment env = DiscEnvironment({5, 0}, 1, 6);
  KnownSet known = SenseUpdate(env, {0, 0}, {}, 1.0);
  known = SenseUpdate(env, {100, 100}, std::move(known), 2.0);
  EXPECT_TRUE(known.ids.contains(1));
  EXPECT_EQ(known.first_seen.at(1), 1.0);
}

TEST(IntegrateStepTest, StraightIsExact) {
  const RobotState s = IntegrateStep({{0, 0}, 0}, {1, 0}, 1);
  EXPECT_EQ(s.p.x, 1.0);
  EXPECT_EQ(s.p.y, 0.0);
  EXPECT_EQ(s.theta, 0.0);
}

TEST(IntegrateStepTest, PureRotation) {
  const RobotState s = IntegrateStep({{0, 0}, 0}, {0, 1}, 1);
  EXPECT_EQ(s.p.x, 0.0);
  EXPECT_EQ(s.p.y, 0.0);
  EXPECT_DOUBLE_EQ(s.theta, 1.0);
}

double ArcError(int steps) {
  RobotState s{{0, 0}, 0};
  for (int i = 0; i < steps; ++i) s = IntegrateStep(s, {1, pi / 2}, 1.0 / steps);
  return Distance(s.p, {2 / pi, 2 / pi});
}

TEST(IntegrateStepTest, ArcBenchmark) {
  // Oracle: tests/oracles/oracles.py (classical RK4 is Simpson's rule here).
  EXPECT_NEAR(ArcError(1), 2.0526e-3, 1e-7);
  RobotState s = IntegrateStep({{0, 0}, 0}, {1, pi / 2}, 1);
  EXPECT_DOUBLE_EQ(s.theta, pi / 2);
}

TEST(IntegrateStepTest, FourthOrderConvergence) {
  EXPECT_GE(ArcError(1) / ArcError(2), 8.0);
  EXPECT_GE(ArcError(2) / ArcError(4), 8.0);
}

TEST(EnvironmentTest, AssumptionOneIsStrict) {
  Environment env = DiscEnvironment({5, 0}, 1.5, 4.0);
  // r + diameter = 1 + 3 = 4.
  const absl::Status status = env.Validate();
  EXPECT_EQ(status.code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(status.message().find("Assumption 1"), std::string_view::npos);
  env.sensing_radius = 4.0 + 1e-9;
  EXPECT_TRUE(env.Validate().ok());
}

void ExpectLogInvariants(const EpisodeLog& log, const ControlBox<2>& box) {
  ASSERT_FALSE(log.steps.empty());
  for (std::size_t j = 0; j < log.steps.size(); ++j) {
    const StepRecord& row = log.steps[j];
    EXPECT_EQ(row.t, static_cast<double>(j) * log.dt);
    EXPECT_TRUE(box.Contains(row.u.ToArray()));
    if (j == 0) continue;
    const StepRecord& prev = log.steps[j - 1];
    EXPECT_LE(std::abs(row.state.theta - prev.state.theta),
              box.hi[1] * log.dt + 1e-9);
    EXPECT_LE(Distance(row.state.p, prev.state.p),
              box.hi[0] * log.dt + 1e-9);
  }
}

TEST(RunEpisodeTest, EmptyEnvironmentGoesStraight) {
  Environment env;
  EpisodeConfig cfg;
  cfg.start = {0, 0};
  cfg.goal = {5, 0};
  auto log = RunEpisode(env, cfg);
  ASSERT_TRUE(log.ok()) << log.status();
  EXPECT_TRUE(log->success());
  EXPECT_TRUE(log->replans.empty());
  EXPECT_LE(Distance(log->steps.back().state.p, cfg.goal), cfg.epsilon);
  const Metrics m = *ComputeMetrics(*log);
  EXPECT_LE(m.trajectory_length, 1.05 * 5.0);
  EXPECT_EQ(m.completion_time_s, log->steps.back().t);
  ExpectLogInvariants(*log, cfg.bounds);
}

TEST(RunEpisodeTest, SingleDiscIsBypassed) {
  const Environment env = DiscEnvironment({10, 0.5}, 1, 6);
  EpisodeConfig cfg;
  cfg.start = {0, 0};
  cfg.goal = {20, 0};
  auto log = RunEpisode(env, cfg);
  ASSERT_TRUE(log.ok()) << log.status();
  EXPECT_TRUE(log->success()) << log->detail;
  EXPECT_GE(log->replans.size(), 1u);
  EXPECT_EQ(log->replans.front().event.obstacle_id, 1);
  EXPECT_GE(log->min_clearance, env.robot_radius);
  ASSERT_EQ(log->sensed.size(), 1u);
  EXPECT_LE(log->sensed.front().t, log->replans.front().t);
  ExpectLogInvariants(*log, cfg.bounds);
}

TEST(RunEpisodeTest, RotatedFrame) {
  const Environment env = DiscEnvironment({3, 7.2}, 0.8, 6);
  EpisodeConfig cfg;
  cfg.start = {-2, 1};
  cfg.goal = {8, 13};
  auto log = RunEpisode(env, cfg);
  ASSERT_TRUE(log.ok()) << log.status();
  EXPECT_TRUE(log->success()) << log->detail;
  EXPECT_GE(log->replans.size(), 1u);
  EXPECT_GE(log->min_clearance, env.robot_radius);
}

TEST(RunEpisodeTest, GoalInsideObstacleFails) {
  const Environment env = DiscEnvironment({10, 0}, 2, 6);
  EpisodeConfig cfg;
  cfg.start = {0, 0};
  cfg.goal = {10, 0};
  cfg.t_max = 30;
  auto log = RunEpisode(env, cfg);
  ASSERT_TRUE(log.ok()) << log.status();
  EXPECT_FALSE(log->success());
  // The planner gives up (no feasible turn or too many modifications).
  EXPECT_TRUE(log->outcome == Outcome::kPlannerInfeasible ||
              log->outcome == Outcome::kIterationLimit)
      << OutcomeName(log->outcome) << ": " << log->detail;
  EXPECT_FALSE(log->detail.empty());
  EXPECT_FALSE(ComputeMetrics(*log)->success);
}

TEST(RunEpisodeTest, RejectsBadThresholds) {
  EpisodeConfig cfg;
  cfg.goal = {5, 0};
  cfg.epsilon = 0.9;
  EXPECT_EQ(RunEpisode(Environment{}, cfg).status().code(),
            absl::StatusCode::kInvalidArgument);
  cfg.epsilon = 0.3;
  cfg.alpha = 6.0;
  EXPECT_EQ(RunEpisode(Environment{}, cfg).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(RunEpisodeTest, Deterministic) {
  const testing::RandomCourse course = testing::MakeRandomCourse(7);
  auto a = RunEpisode(course.env, course.config);
  auto b = RunEpisode(course.env, course.config);
  ASSERT_TRUE(a.ok() && b.ok());
  ASSERT_EQ(a->steps.size(), b->steps.size());
  for (std::size_t j = 0; j < a->steps.size(); ++j) {
    EXPECT_EQ(a->steps[j].state.p.x, b->steps[j].state.p.x);
    EXPECT_EQ(a->steps[j].state.p.y, b->steps[j].state.p.y);
    EXPECT_EQ(a->steps[j].state.theta, b->steps[j].state.theta);
    EXPECT_EQ(a->steps[j].u.v, b->steps[j].u.v);
    EXPECT_EQ(a->steps[j].u.w, b->steps[j].u.w);
  }
  EXPECT_EQ(a->replans.size(), b->replans.size());
}

TEST(RunEpisodeTest, RandomCourseInvariants) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const testing::RandomCourse course = testing::MakeRandomCourse(seed);
    auto log = RunEpisode(course.env, course.config);
    ASSERT_TRUE(log.ok()) << log.status();
    EXPECT_TRUE(log->success()) << seed << ": " << log->detail;
    EXPECT_GE(log->min_clearance, course.env.robot_radius - 1e-6);
    ExpectLogInvariants(*log, course.config.bounds);
    double last_seen = 0.0;
    for (const SenseRecord& s : log->sensed) {
      EXPECT_GE(s.t, last_seen);
      last_seen = s.t;
    }
  }
}

TEST(ComputeMetricsTest, ConstantControl) {
  EpisodeLog log;
  log.dt = 0.1;
  RobotState s{{0, 0}, 0};
  for (int j = 0; j < 10; ++j) {
    log.steps.push_back({0.1 * j, s, {1, 0}, 0});
    s = IntegrateStep(s, {1, 0}, 0.1);
  }
  log.steps.push_back({1.0, s, {0, 0}, 0});
  const Metrics m = *ComputeMetrics(log);
  EXPECT_NEAR(m.control_effort, 1.0, 1e-12);
  EXPECT_NEAR(m.trajectory_length, 1.0, 1e-12);
}

TEST(ComputeMetricsTest, ZeroControl) {
  EpisodeLog log;
  log.dt = 0.05;
  for (int j = 0; j < 4; ++j) log.steps.push_back({0.05 * j, {}, {}, 0});
  const Metrics m = *ComputeMetrics(log);
  EXPECT_EQ(m.control_effort, 0.0);
  EXPECT_EQ(m.trajectory_length, 0.0);
}

TEST(ComputeMetricsTest, EmptyLog) {
  EXPECT_EQ(ComputeMetrics(EpisodeLog{}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace rpcs
