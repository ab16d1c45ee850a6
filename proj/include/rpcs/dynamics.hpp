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
/// Robot dynamics x' = f(x, u) and their integration.

#ifndef RPCS_DYNAMICS_HPP_
#define RPCS_DYNAMICS_HPP_

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>

#include "rpcs/geometry.hpp"

namespace rpcs {

// A kinematic model with fixed-size state and control vectors whose first
// two state components need not be the position; Position() extracts it.
template <typename D>
concept Dynamics = requires(const D& d, const typename D::State& x,
                            const typename D::Control& u) {
  { d.Derivative(x, u) } -> std::same_as<typename D::State>;
  { D::Position(x) } -> std::convertible_to<Point2>;
};

template <std::size_t N>
std::array<double, N> Axpy(const std::array<double, N>& x, double a,
                           const std::array<double, N>& y) {
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + a * y[i];
  return out;
}

// One classical fourth-order Runge-Kutta step under constant control.
template <Dynamics D>
typename D::State Rk4Step(const D& dyn, const typename D::State& x,
                          const typename D::Control& u, double dt) {
  const auto k1 = dyn.Derivative(x, u);
  const auto k2 = dyn.Derivative(Axpy(x, 0.5 * dt, k1), u);
  const auto k3 = dyn.Derivative(Axpy(x, 0.5 * dt, k2), u);
  const auto k4 = dyn.Derivative(Axpy(x, dt, k3), u);
  typename D::State out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Axis-aligned control box.
template <std::size_t M>
struct ControlBox {
  std::array<double, M> lo{};
  std::array<double, M> hi{};

  bool Contains(const std::array<double, M>& u) const {
    for (std::size_t i = 0; i < M; ++i) {
      if (!(lo[i] <= u[i] && u[i] <= hi[i])) return false;
    }
    return true;
  }
};

// State (x, y, theta), control (v, w).
struct Unicycle {
  using State = std::array<double, 3>;
  using Control = std::array<double, 2>;

  State Derivative(const State& x, const Control& u) const {
    return {u[0] * std::cos(x[2]), u[0] * std::sin(x[2]), u[1]};
  }

  static Point2 Position(const State& x) { return {x[0], x[1]}; }
};

struct RobotState {
  Point2 p;
  // Heading, not wrapped.
  double theta = 0.0;

  Unicycle::State ToArray() const { return {p.x, p.y, theta}; }
  static RobotState FromArray(const Unicycle::State& x) {
    return {{x[0], x[1]}, x[2]};
  }
};

struct ControlInput {
  double v = 0.0;
  double w = 0.0;

  Unicycle::Control ToArray() const { return {v, w}; }
};

inline RobotState IntegrateStep(const RobotState& state, const ControlInput& u,
                                double dt) {
  return RobotState::FromArray(
      Rk4Step(Unicycle{}, state.ToArray(), u.ToArray(), dt));
}

}  // namespace rpcs

#endif  // RPCS_DYNAMICS_HPP_
