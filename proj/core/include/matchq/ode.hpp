#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "matchq/errors.hpp"

namespace matchq::ode {

using State = std::array<double, 2>;

struct StepResult {
  State y;
  double err;  // scaled error estimate, accept when <= 1
};

/// One Dormand-Prince 5(4) step of size h from (x, y).
template <class Rhs>
StepResult dp45_step(const Rhs& f, double x, const State& y, double h, double tol) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto axpy = [&](std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, k] : terms) {
      out[0] += h * c * (*k)[0];
      out[1] += h * c * (*k)[1];
    }
    return out;
  };

  const State k1 = f(x, y);
  const State k2 = f(x + c2 * h, axpy({{a21, &k1}}));
  const State k3 = f(x + c3 * h, axpy({{a31, &k1}, {a32, &k2}}));
  const State k4 = f(x + c4 * h, axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State k5 =
      f(x + c5 * h, axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State k6 = f(x + h, axpy({{a61, &k1}, {a62, &k2}, {a63, &k3},
                                  {a64, &k4}, {a65, &k5}}));
  const State y5 =
      axpy({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State k7 = f(x + h, y5);

  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
    const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
    err = std::max(err, std::abs(e) / sc);
  }
  return {y5, err};
}

/// Adaptive integration from x0 to x1 (either direction). `h` carries the
/// suggested step size across calls.
template <class Rhs>
State integrate(const Rhs& f, double x0, const State& y0, double x1, double tol,
                double& h) {
  const double span = x1 - x0;
  if (span == 0.0) return y0;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double h_min = 1e-14 * std::max(1.0, std::abs(x1));
  double x = x0;
  State y = y0;
  h = std::min(std::abs(h), std::abs(span));
  if (!(h > 0)) h = std::abs(span);
  while (dir * (x1 - x) > 0.0) {
    const double remaining = std::abs(x1 - x);
    const bool last = h >= remaining;
    const double step = last ? remaining : h;
    const StepResult r = dp45_step(f, x, y, dir * step, tol);
    if (r.err <= 1.0 && std::isfinite(r.y[0]) && std::isfinite(r.y[1])) {
      x = last ? x1 : x + dir * step;
      y = r.y;
      const double grow = r.err > 0 ? 0.9 * std::pow(r.err, -0.2) : 5.0;
      if (!last) h = step * std::clamp(grow, 0.2, 5.0);
    } else {
      const double shrink =
          std::isfinite(r.err) ? 0.9 * std::pow(r.err, -0.25) : 0.2;
      h = step * std::clamp(shrink, 0.1, 0.9);
      if (h < h_min) {
        std::ostringstream msg;
        msg << "ODE step size underflow at x = " << x;
        throw SolverError(msg.str());
      }
    }
  }
  return y;
}

}  // namespace matchq::ode
