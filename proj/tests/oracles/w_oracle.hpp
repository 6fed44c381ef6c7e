#pragma once

// Fixed-step classical RK4 integration of the W equations, independent of the
// library's adaptive integrator. Used as a cross-check for W_a curves.

#include <array>
#include <cmath>
#include <functional>

#include "matchq/params.hpp"

namespace matchq::oracle {

using State = std::array<double, 2>;

/// W'' of the inhomogeneous W equation on the side of x (x <= 0 buyers, x > 0 sellers).
inline double w_second(const ModelParams& p, double x, double w, double wp, bool left) {
  const double k2 = 2.0 / p.sigma2();
  if (left) return k2 * ((p.alpha() + p.delta_b()) * w + p.theta_b() - (p.beta() - p.delta_b() * x) * wp);
  return k2 * ((p.alpha() + p.delta_s()) * w - p.theta_s() - (p.beta() - p.delta_s() * x) * wp);
}

/// Integrates from (x0, y0) to x1 with n RK4 steps on one side of the origin.
inline State rk4(const ModelParams& p, double x0, State y, double x1, int n, bool left) {
  const double h = (x1 - x0) / n;
  auto f = [&](double x, const State& s) { return State{s[1], w_second(p, x, s[0], s[1], left)}; };
  double x = x0;
  for (int i = 0; i < n; ++i) {
    const State k1 = f(x, y);
    const State k2 = f(x + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const State k3 = f(x + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
    const State k4 = f(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    y = {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
         y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    x += h;
  }
  return y;
}

/// W_a at x (a < 0), integrating [a, 0] and [0, x] separately with step ~h.
inline State wa_at(const ModelParams& p, double a, double x, double h = 1e-4) {
  const double left_end = std::min(x, 0.0);
  State y = rk4(p, a, {-p.p_b(), 0.0}, left_end, std::max(1, static_cast<int>(std::ceil((left_end - a) / h))), true);
  if (x > 0.0) y = rk4(p, 0.0, y, x, std::max(1, static_cast<int>(std::ceil(x / h))), false);
  return y;
}

/// Sign of the eventual divergence of the x > 0 branch started from (w0, wp0)
/// at the origin: +1 up, -1 down, 0 if |W| stays below `big` up to x_end.
inline int tail_sign(const ModelParams& p, double w0, double wp0, double x_end, double big) {
  State y{w0, wp0};
  const double h = 1e-3;
  for (double x = 0.0; x < x_end; x += h) {
    y = rk4(p, x, y, x + h, 1, false);
    if (y[0] > big) return 1;
    if (y[0] < -big) return -1;
  }
  return 0;
}

}  // namespace matchq::oracle
