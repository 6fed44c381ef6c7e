#include "matchq/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "matchq/ode.hpp"

namespace matchq {
namespace {

using ode::State;

// Second-order linear equation on one half-line written as a first-order system:
//   W'' = (2 / sigma^2) [rate W + source - (beta - delta x) W'].
struct HalfLineRhs {
  double k2;
  double beta;
  double delta;
  double rate;
  double source;
  State operator()(double x, const State& y) const {
    return {y[1], k2 * (rate * y[0] + source - (beta - delta * x) * y[1])};
  }
};

HalfLineRhs left_rhs(const ModelParams& p, bool homogeneous = false) {
  return {2.0 / p.sigma2(), p.beta(), p.delta_b(), p.alpha() + p.delta_b(),
          homogeneous ? 0.0 : p.theta_b()};
}

HalfLineRhs right_rhs(const ModelParams& p, bool homogeneous = false) {
  return {2.0 / p.sigma2(), p.beta(), p.delta_s(), p.alpha() + p.delta_s(),
          homogeneous ? 0.0 : -p.theta_s()};
}

// Lattice nodes k*h strictly inside (from, to), ascending, followed by `to`.
std::vector<double> nodes_between(double from, double to, double h) {
  std::vector<double> out;
  const double eps = 1e-6 * h;
  for (auto k = static_cast<long long>(std::floor(from / h)) + 1;; ++k) {
    const double x = static_cast<double>(k) * h;
    if (x >= to - eps) break;
    if (x > from + eps) out.push_back(x);
  }
  out.push_back(to);
  return out;
}

State wa_state_at_origin(double a, const ModelParams& p, const SolverConfig& cfg) {
  double h = cfg.grid_step;
  return ode::integrate(left_rhs(p), a, State{-p.p_b(), 0.0}, 0.0, cfg.ode_tol, h);
}

// Locates the first interior maximum of a W_a curve and polishes it with
// bisection on the integration length inside the bracketing grid cell.
std::optional<MaxOfWa> interior_max(const Curve& cv, const ModelParams& p,
                                    const SolverConfig& cfg) {
  for (std::size_t i = 0; i + 1 < cv.size(); ++i) {
    if (!(cv.Wp[i] > 0.0 && cv.Wp[i + 1] <= 0.0)) continue;
    const double x0 = cv.grid[i];
    const State y0{cv.W[i], cv.Wp[i]};
    const bool right = x0 >= 0.0;
    const auto advance = [&](double s) {
      double h = s;
      return right ? ode::integrate(right_rhs(p), x0, y0, x0 + s, cfg.ode_tol, h)
                   : ode::integrate(left_rhs(p), x0, y0, x0 + s, cfg.ode_tol, h);
    };
    double lo = 0.0, hi = cv.grid[i + 1] - x0;
    for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, std::abs(x0)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (advance(mid)[1] > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double s = 0.5 * (lo + hi);
    const State y = advance(s);
    return MaxOfWa{y[0], x0 + s};
  }
  return std::nullopt;
}

// Decaying solution of the homogeneous x > 0 equation, normalized to 1 at 0.
// Integrated backwards from far out, where it behaves like x^{-(alpha+delta)/delta};
// the growing mode decays in this direction.
Curve psi0_backward(const ModelParams& p, double x_max, const SolverConfig& cfg) {
  const HalfLineRhs f = right_rhs(p, true);
  const double r = (p.alpha() + p.delta_s()) / p.delta_s();
  const double x_far = 2.0 * x_max;
  State y{1.0, -r / x_far};
  double h = cfg.grid_step;
  y = ode::integrate(f, x_far, y, x_max, cfg.ode_tol, h);

  std::vector<double> xs = nodes_between(0.0, x_max, cfg.grid_step);
  Curve rev;
  rev.push(x_max, y[0], y[1]);
  double x = x_max;
  for (auto it = xs.rbegin() + 1; it != xs.rend(); ++it) {
    y = ode::integrate(f, x, y, *it, cfg.ode_tol, h);
    x = *it;
    rev.push(x, y[0], y[1]);
  }
  y = ode::integrate(f, x, y, 0.0, cfg.ode_tol, h);
  rev.push(0.0, y[0], y[1]);

  const double norm = y[0];
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw SolverError("decaying solution: non-positive value at the origin");
  }
  Curve out;
  for (std::size_t i = rev.size(); i-- > 0;) {
    out.push(rev.grid[i], rev.W[i] / norm, rev.Wp[i] / norm);
  }
  return out;
}

Curve reflect_curve(const Curve& c, double value_sign) {
  Curve out;
  for (std::size_t i = c.size(); i-- > 0;) {
    out.push(-c.grid[i], value_sign * c.W[i], -value_sign * c.Wp[i]);
  }
  return out;
}

double mirror_x_min(const SolverConfig& cfg) { return -cfg.x_max; }

SolverConfig mirrored(const SolverConfig& cfg) {
  SolverConfig m = cfg;
  m.x_max = -cfg.x_min;
  m.x_min = mirror_x_min(cfg);
  return m;
}

double polished_c(const ModelParams& p, const SolverConfig& cfg) {
  const double c0 = find_c(p, cfg);
  double w = 2.0 * cfg.bisect_tol;
  for (int attempt = 0; attempt < 6; ++attempt, w *= 4.0) {
    try {
      return find_c_smooth_fit(p, cfg, c0 - w, std::min(c0 + w, -1e-12));
    } catch (const SolverError&) {
    }
  }
  return c0;
}

}  // namespace

SolverConfig SolverConfig::defaults_for(const ModelParams& p) {
  SolverConfig cfg;
  const auto [T_s, T_b] = thresholds(p);
  cfg.x_max = std::max(10.0, 10.0 * (std::abs(p.beta()) + 1.0) /
                                 std::min(p.delta_b(), p.delta_s()));
  cfg.x_min = -cfg.x_max;
  cfg.W_big = 50.0 * std::max({T_s, T_b, 1.0});
  return cfg;
}

void SolverConfig::validate(const ModelParams& p) const {
  auto fail = [](const char* field, const char* what) {
    throw std::invalid_argument(std::string("solver.") + field + " " + what);
  };
  if (!(x_max > 0.0)) fail("x_max", "must be > 0");
  if (!(x_min < 0.0)) fail("x_min", "must be < 0");
  if (!(ode_tol > 0.0)) fail("ode_tol", "must be > 0");
  if (!(bisect_tol > 0.0)) fail("bisect_tol", "must be > 0");
  if (!(grid_step > 0.0) || grid_step > 0.1 * x_max) fail("grid_step", "must be in (0, x_max/10]");
  if (max_iter <= 0) fail("max_iter", "must be > 0");
  const auto [T_s, T_b] = thresholds(p);
  if (!(W_big > std::max(T_s, T_b))) fail("W_big", "must exceed max(T_s, T_b)");
}

double Curve::value(double x) const {
  if (x <= grid.front()) return W.front() + Wp.front() * (x - grid.front());
  if (x >= grid.back()) return W.back() + Wp.back() * (x - grid.back());
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  const double h = grid[i + 1] - grid[i];
  const double t = (x - grid[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * W[i] + h10 * h * Wp[i] + h01 * W[i + 1] + h11 * h * Wp[i + 1];
}

double Curve::slope(double x) const {
  if (x <= grid.front()) return Wp.front();
  if (x >= grid.back()) return Wp.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return (1 - t) * Wp[i] + t * Wp[i + 1];
}

double PolicySolution::W(double x) const {
  return W_curve.value(std::clamp(x, W_curve.x_front(), W_curve.x_back()));
}

Curve integrate_Wa(double a, const ModelParams& p, const SolverConfig& cfg) {
  if (!(a < 0.0)) throw std::invalid_argument("integrate_Wa: need a < 0");
  Curve cv;
  State y{-p.p_b(), 0.0};
  cv.push(a, y[0], y[1]);
  double x = a;
  double h = cfg.grid_step;

  const HalfLineRhs lf = left_rhs(p);
  for (double node : nodes_between(a, 0.0, cfg.grid_step)) {
    y = ode::integrate(lf, x, y, node, cfg.ode_tol, h);
    x = node;
    cv.push(x, y[0], y[1]);
  }
  const HalfLineRhs rf = right_rhs(p);
  for (double node : nodes_between(0.0, cfg.x_max, cfg.grid_step)) {
    y = ode::integrate(rf, x, y, node, cfg.ode_tol, h);
    x = node;
    cv.push(x, y[0], y[1]);
    if (std::abs(y[0]) > cfg.W_big) break;
  }
  return cv;
}

TailClass classify_tail(const Curve& curve, const ModelParams&, const SolverConfig& cfg) {
  const double last = curve.W.back();
  if (last > cfg.W_big) return TailClass::DivergesUp;
  if (last < -cfg.W_big) return TailClass::DivergesDown;
  return TailClass::Bounded;
}

double find_c(const ModelParams& p, const SolverConfig& cfg) {
  const auto [T_s, T_b] = thresholds(p);
  if (!(p.p_b() < T_b)) throw std::invalid_argument("find_c: requires p_b < T_b");
  const auto diverges_up = [&](double a) {
    return classify_tail(integrate_Wa(a, p, cfg), p, cfg) == TailClass::DivergesUp;
  };

  double a_down = -10.0 * cfg.bisect_tol;
  if (diverges_up(a_down)) {
    throw SolverError("find_c: W_a does not diverge downwards for small |a|");
  }
  const double a_first = -1.0;
  double a_up = a_first;
  while (!diverges_up(a_up)) {
    a_down = a_up;
    a_up *= 2.0;
    if (a_up < 64.0 * a_first) {
      throw SolverError(
          "find_c: bracket not found down to a = -64; increase solver.W_big or solver.x_max");
    }
  }
  for (int it = 0; it < cfg.max_iter && a_down - a_up > cfg.bisect_tol; ++it) {
    const double mid = 0.5 * (a_up + a_down);
    if (diverges_up(mid)) {
      a_up = mid;
    } else {
      a_down = mid;
    }
  }
  return 0.5 * (a_up + a_down);
}

double find_c_smooth_fit(const ModelParams& p, const SolverConfig& cfg, double lo,
                         double hi) {
  const auto [T_s, T_b] = thresholds(p);
  const double psi0_slope = psi0_backward(p, cfg.x_max, cfg).Wp.front();
  // Sign equals the sign of the growing-mode coefficient on x > 0.
  const auto mismatch = [&](double a) {
    const State y = wa_state_at_origin(a, p, cfg);
    return y[1] - (y[0] - T_s) * psi0_slope;
  };
  double f_lo = mismatch(lo);
  double f_hi = mismatch(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw SolverError("find_c_smooth_fit: smooth-fit mismatch does not change sign");
  }
  for (int it = 0; it < std::max(cfg.max_iter, 100) && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = mismatch(mid);
    if (f > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MaxOfWa max_of_Wa(double a, const ModelParams& p, const SolverConfig& cfg) {
  SolverConfig work = cfg;
  for (int attempt = 0;; ++attempt) {
    const Curve cv = integrate_Wa(a, p, work);
    const auto m = interior_max(cv, p, work);
    if (!m) {
      std::ostringstream msg;
      msg << "max_of_Wa: no interior maximum for a = " << a << " (a outside (c, 0))";
      throw SolverError(msg.str());
    }
    if (m->r_a > 0.9 * work.x_max && attempt < 4) {
      work.x_max *= 2.0;
      continue;
    }
    return *m;
  }
}

namespace {

struct BarrierSearch {
  double a_star;
  MaxOfWa max;
};

BarrierSearch search_barriers(const ModelParams& p, const SolverConfig& cfg, double c) {
  double lo = c;                      // M(a) > p_s, or W_a diverges up
  double hi = -10.0 * cfg.bisect_tol; // M(a) < p_s
  std::optional<BarrierSearch> best;
  for (int it = 0; it < std::max(cfg.max_iter, 100); ++it) {
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
    const double mid = 0.5 * (lo + hi);
    std::optional<MaxOfWa> m;
    try {
      m = max_of_Wa(mid, p, cfg);
    } catch (const SolverError&) {
      m.reset();
    }
    if (!m || m->M > p.p_s()) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (m && (!best || std::abs(m->M - p.p_s()) < std::abs(best->max.M - p.p_s()))) {
      best = BarrierSearch{mid, *m};
    }
  }
  if (!best) throw SolverError("find_barriers: no admissible a in (c, 0)");
  return *best;
}

}  // namespace

Barriers find_barriers(const ModelParams& p, const SolverConfig& cfg) {
  if (classify_regime(p) != Regime::TwoSided) {
    throw std::invalid_argument("find_barriers: requires the TwoSided regime");
  }
  const BarrierSearch s = search_barriers(p, cfg, find_c(p, cfg));
  return {s.a_star, s.max.r_a};
}

DecayingSolutions decaying_solutions(const ModelParams& p, const SolverConfig& cfg) {
  DecayingSolutions out;
  out.psi0 = psi0_backward(p, cfg.x_max, cfg);
  out.phi0 = reflect_curve(psi0_backward(mirror(p), -cfg.x_min, cfg), 1.0);
  if (!(out.psi0.Wp.front() < 0.0) || !(out.phi0.Wp.back() > 0.0)) {
    throw SolverError("decaying solutions: unexpected slope sign at the origin");
  }
  return out;
}

double decaying_slope_by_shooting(const ModelParams& p, const SolverConfig& cfg,
                                  Side side) {
  if (side == Side::Negative) {
    return -decaying_slope_by_shooting(mirror(p), mirrored(cfg), Side::Positive);
  }
  const HalfLineRhs f = right_rhs(p, true);
  // +1: leaves (0, 1] upwards, -1: crosses zero, 0: stays bounded up to x_max.
  const auto fate = [&](double slope) {
    State y{1.0, slope};
    double x = 0.0, h = cfg.grid_step;
    while (x < cfg.x_max) {
      const double next = std::min(cfg.x_max, x + 0.01);
      y = ode::integrate(f, x, y, next, cfg.ode_tol, h);
      x = next;
      if (y[0] > 1.0) return 1;
      if (y[0] < 0.0) return -1;
    }
    return 0;
  };
  double hi = 0.0;
  if (fate(hi) != 1) throw SolverError("shooting: zero slope does not diverge upwards");
  double lo = -1.0;
  while (fate(lo) != -1) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e6) throw SolverError("shooting: slope bracket not found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    const int r = fate(mid);
    if (r == 1) {
      hi = mid;
    } else if (r == -1) {
      lo = mid;
    } else {
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

ZeroControlSolution solve_zero_control(const ModelParams& p, const SolverConfig& cfg) {
  const auto [T_s, T_b] = thresholds(p);
  const DecayingSolutions d = decaying_solutions(p, cfg);
  const double psi_p = d.psi0.Wp.front();
  const double phi_p = d.phi0.Wp.back();
  const double ratio = psi_p / phi_p;
  const double k_s = -(T_s + T_b) / (1.0 - ratio);
  const double k_b = k_s * ratio;

  ZeroControlSolution out{{}, k_s, k_b};
  for (std::size_t i = 0; i + 1 < d.phi0.size(); ++i) {
    out.W.push(d.phi0.grid[i], k_b * d.phi0.W[i] - T_b, k_b * d.phi0.Wp[i]);
  }
  for (std::size_t i = 0; i < d.psi0.size(); ++i) {
    out.W.push(d.psi0.grid[i], k_s * d.psi0.W[i] + T_s, k_s * d.psi0.Wp[i]);
  }
  return out;
}

Curve assemble_Q(const Curve& W, const ModelParams& p) {
  const auto it = std::find_if(W.grid.begin(), W.grid.end(),
                               [](double x) { return std::abs(x) <= 1e-12; });
  if (it == W.grid.end()) throw std::invalid_argument("assemble_Q: grid must contain 0");
  const std::size_t i0 = static_cast<std::size_t>(it - W.grid.begin());
  const std::size_t n = W.size();

  // Trapezoid with endpoint-derivative correction: int W = h/2 (W0 + W1) + h^2/12 (W0' - W1').
  const auto segment = [&](std::size_t i) {
    const double h = W.grid[i + 1] - W.grid[i];
    return 0.5 * h * (W.W[i] + W.W[i + 1]) + h * h / 12.0 * (W.Wp[i] - W.Wp[i + 1]);
  };

  std::vector<double> Q(n);
  Q[i0] = (0.5 * p.sigma2() * W.Wp[i0] + p.beta() * W.W[i0]) / p.alpha();
  for (std::size_t i = i0; i + 1 < n; ++i) Q[i + 1] = Q[i] + segment(i);
  for (std::size_t i = i0; i > 0; --i) Q[i - 1] = Q[i] - segment(i - 1);

  Curve out;
  out.grid = W.grid;
  out.W = std::move(Q);
  out.Wp = W.W;
  return out;
}

namespace {

void push_constant_nodes(Curve& cv, double from, double to, double h, double w,
                         bool include_to) {
  for (double x : nodes_between(from, to, h)) {
    if (x == to && !include_to) break;
    cv.push(x, w, 0.0);
  }
}

PolicySolution solve_two_sided(const ModelParams& p, SolverConfig cfg) {
  const double c = polished_c(p, cfg);
  const BarrierSearch s = search_barriers(p, cfg, c);
  const double a = s.a_star, b = s.max.r_a;
  cfg.x_min = std::min(cfg.x_min, a - 1.0);
  cfg.x_max = std::max(cfg.x_max, b + 1.0);
  const double h = cfg.grid_step;

  Curve W;
  W.push(cfg.x_min, -p.p_b(), 0.0);
  push_constant_nodes(W, cfg.x_min, a, h, -p.p_b(), false);
  const Curve inner = integrate_Wa(a, p, cfg);
  for (std::size_t i = 0; i < inner.size() && inner.grid[i] < b - 1e-6 * h; ++i) {
    if (i > 0 && inner.grid[i] - W.grid.back() < 1e-6 * h) continue;
    W.push(inner.grid[i], inner.W[i], inner.Wp[i]);
  }
  W.push(b, s.max.M, 0.0);
  for (double x : nodes_between(b, cfg.x_max, h)) {
    if (x - W.grid.back() < 1e-6 * h) continue;
    W.push(x, p.p_s(), 0.0);
  }

  PolicySolution sol{Regime::TwoSided, a, b, c, std::move(W), {}, {}, {}};
  sol.Q_curve = assemble_Q(sol.W_curve, p);
  return sol;
}

PolicySolution solve_left_reflect(const ModelParams& p, const SolverConfig& cfg) {
  const auto [T_s, T_b] = thresholds(p);
  const double c = polished_c(p, cfg);
  SolverConfig work = cfg;
  work.x_min = std::min(cfg.x_min, c - 1.0);
  const double h = work.grid_step;

  Curve W;
  W.push(work.x_min, -p.p_b(), 0.0);
  push_constant_nodes(W, work.x_min, c, h, -p.p_b(), false);
  const Curve inner = integrate_Wa(c, p, work);
  std::size_t i = 0;
  for (; i < inner.size() && inner.grid[i] <= 0.0; ++i) {
    if (i > 0 && inner.grid[i] - W.grid.back() < 1e-6 * h) continue;
    W.push(inner.grid[i], inner.W[i], inner.Wp[i]);
  }
  const double k = W.W.back() - T_s;
  const Curve psi0 = psi0_backward(p, work.x_max, work);
  for (std::size_t j = 1; j < psi0.size(); ++j) {
    W.push(psi0.grid[j], T_s + k * psi0.W[j], k * psi0.Wp[j]);
  }

  PolicySolution sol{Regime::LeftReflect, c, {}, c, std::move(W), {}, {}, {}};
  sol.Q_curve = assemble_Q(sol.W_curve, p);
  return sol;
}

}  // namespace

PolicySolution solve(const ModelParams& p, const SolverConfig& cfg) {
  cfg.validate(p);
  switch (classify_regime(p)) {
    case Regime::ZeroControl: {
      ZeroControlSolution z = solve_zero_control(p, cfg);
      PolicySolution sol{Regime::ZeroControl, {}, {}, {}, std::move(z.W), {}, z.k_s, z.k_b};
      sol.Q_curve = assemble_Q(sol.W_curve, p);
      return sol;
    }
    case Regime::TwoSided:
      return solve_two_sided(p, cfg);
    case Regime::LeftReflect:
      return solve_left_reflect(p, cfg);
    case Regime::RightReflect: {
      const PolicySolution m = solve_left_reflect(mirror(p), mirrored(cfg));
      PolicySolution sol{Regime::RightReflect, {}, -*m.a_star, -*m.c,
                         reflect_curve(m.W_curve, -1.0), {}, {}, {}};
      sol.Q_curve = assemble_Q(sol.W_curve, p);
      return sol;
    }
  }
  throw std::logic_error("solve: unknown regime");
}

PolicySolution solve(const ModelParams& p) {
  return solve(p, SolverConfig::defaults_for(p));
}

HjbResidual hjb_residual(const PolicySolution& sol, const ModelParams& p) {
  const Curve& Q = sol.Q_curve;
  const Curve& W = sol.W_curve;
  HjbResidual r;
  for (std::size_t i = 1; i + 1 < Q.size(); ++i) {
    const double x = Q.grid[i];
    const double q1 = W.W[i];
    const double q2 = W.Wp[i];
    r.x.push_back(x);
    r.generator.push_back(0.5 * p.sigma2() * q2 + (p.beta() - drift_h(p, x)) * q1 -
                          p.alpha() * Q.W[i] + holding_cost_C(p, x));
    r.lower.push_back(q1 + p.p_b());
    r.upper.push_back(p.p_s() - q1);
    r.scale.push_back(std::max(1.0, std::abs(Q.W[i])));
  }
  return r;
}

}  // namespace matchq
