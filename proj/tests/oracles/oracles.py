"""Independent oracles used to freeze expected values in the C++ tests.

Run with `python3 tests/oracles/oracles.py`; nothing here imports the C++ code.
"""
import math

import numpy as np
import sympy as sp


def rk4_unicycle(state, v, w, dt):
    def f(s):
        return np.array([v * math.cos(s[2]), v * math.sin(s[2]), w])
    k1 = f(state)
    k2 = f(state + 0.5 * dt * k1)
    k3 = f(state + 0.5 * dt * k2)
    k4 = f(state + dt * k3)
    return state + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def arc_errors():
    exact = np.array([2 / math.pi, 2 / math.pi])
    one = rk4_unicycle(np.zeros(3), 1.0, math.pi / 2, 1.0)
    two = rk4_unicycle(rk4_unicycle(np.zeros(3), 1.0, math.pi / 2, 0.5), 1.0, math.pi / 2, 0.5)
    e1 = np.linalg.norm(one[:2] - exact)
    e2 = np.linalg.norm(two[:2] - exact)
    print("rk4 arc: one-step err", e1, "two half-steps err", e2, "ratio", e1 / e2)


def hermite_symbolic():
    x = sp.symbols("x")
    t = x - 3
    part3 = sp.expand(1 - (3 * t**2 - 2 * t**3))
    print("turn part III power basis:", sp.Poly(part3, x).all_coeffs())


def smoothstep_turn(xa, ya, xb, yb, x):
    t = (x - xa) / (xb - xa)
    return ya + (yb - ya) * (3 * t * t - 2 * t**3)


def min_feasible_delta():
    # Disc E=(5,2) r=2, straight reference y=0, beta=+1, rho=2, x_now=0, x_g=10.
    # a=(0,0), b=c=(5,4+delta), d=(9,0), all slopes zero. Dense scan in delta.
    cx, cy, rr = 5.0, 2.0, 2.0
    xs1 = np.arange(0.0, 5.0 + 1e-12, 1e-4)
    xs3 = np.arange(5.0, 9.0 + 1e-12, 1e-4)

    def feasible(delta):
        yb = 4.0 + delta
        y1 = smoothstep_turn(0.0, 0.0, 5.0, yb, xs1)
        y3 = smoothstep_turn(5.0, yb, 9.0, 0.0, xs3)
        d1 = np.hypot(xs1 - cx, y1 - cy)
        d3 = np.hypot(xs3 - cx, y3 - cy)
        return d1.min() > rr and d3.min() > rr

    delta = 1e-4
    while not feasible(delta):
        delta += 1e-4
    print("disc example: smallest feasible delta (step 1e-4) =", round(delta, 4))


def tracking_optimum():
    v = sp.symbols("v")
    cost = (1 - sp.Rational(1, 10) * v) ** 2 + sp.Rational(1, 20) * v**2
    sol = sp.solve(sp.diff(cost, v), v)[0]
    print("tracking example: v* =", sol, "cost =", cost.subs(v, sol))


if __name__ == "__main__":
    arc_errors()
    hermite_symbolic()
    min_feasible_delta()
    tracking_optimum()
