#include "matchq/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "matchq/random.hpp"

namespace matchq {
namespace {

constexpr std::uint32_t kBrownianStream = 1;

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(T >= 0.0)) throw std::invalid_argument("T must be >= 0");
  return static_cast<std::size_t>(std::llround(T / dt));
}

// One projected Euler step. Returns the new state and adds clamp amounts.
struct Stepper {
  const ModelParams& p;
  const BarrierPolicy& policy;
  double dt;
  double sdt;

  double operator()(double x, double z, double& push_lo, double& push_hi) const {
    double y = x + (p.beta() - drift_h(p, x)) * dt + sdt * z;
    push_lo = push_hi = 0.0;
    if (policy.lower && y < *policy.lower) {
      push_lo = *policy.lower - y;
      y = *policy.lower;
    } else if (policy.upper && y > *policy.upper) {
      push_hi = y - *policy.upper;
      y = *policy.upper;
    }
    return y;
  }
};

double initial_jump(const BarrierPolicy& policy, double& x, double& lo, double& hi) {
  lo = hi = 0.0;
  if (policy.lower && x < *policy.lower) {
    lo = *policy.lower - x;
    x = *policy.lower;
  } else if (policy.upper && x > *policy.upper) {
    hi = x - *policy.upper;
    x = *policy.upper;
  }
  return x;
}

// int_T^inf e^{-alpha t} sqrt(m0 + K t) dt by composite Simpson on a
// truncated range; the integrand is smooth and decays exponentially.
double discounted_sqrt_tail(double alpha, double m0, double K, double T) {
  const double span = 60.0 / alpha;
  const int n = 20000;
  const double h = span / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = T + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::exp(-alpha * t) * std::sqrt(m0 + K * t);
  }
  return s * h / 3.0;
}

}  // namespace

BarrierPolicy BarrierPolicy::from_solution(const PolicySolution& sol) {
  switch (sol.regime) {
    case Regime::ZeroControl:
      return {};
    case Regime::TwoSided:
      return {sol.a_star, sol.b_star};
    case Regime::LeftReflect:
      return {sol.a_star, std::nullopt};
    case Regime::RightReflect:
      return {std::nullopt, sol.b_star};
  }
  return {};
}

void BarrierPolicy::validate() const {
  if (lower && upper && !(*lower < *upper)) {
    throw std::invalid_argument("policy: lower barrier must be below upper barrier");
  }
}

void McConfig::validate() const {
  if (reps < 2) throw std::invalid_argument("mc.reps must be >= 2");
  if (!(T_max > 0.0)) throw std::invalid_argument("mc.T_max must be > 0");
  if (!(dt > 0.0) || dt > T_max) throw std::invalid_argument("mc.dt must be in (0, T_max]");
}

SdePath simulate_reflected(const ModelParams& p, const BarrierPolicy& policy, double x0,
                           double T, double dt, std::uint64_t seed, std::uint64_t rep) {
  policy.validate();
  const std::size_t n = step_count(T, dt);
  std::vector<double> X(n + 1), La(n + 1), Lb(n + 1);
  double lo = 0.0, hi = 0.0;
  double x = initial_jump(policy, x0, lo, hi);
  X[0] = x;
  La[0] = lo;
  Lb[0] = hi;
  const Stepper step{p, policy, dt, std::sqrt(p.sigma2() * dt)};
  CounterRng rng(seed, kBrownianStream, rep);
  for (std::size_t k = 0; k < n; ++k) {
    x = step(x, rng.normal(), lo, hi);
    X[k + 1] = x;
    La[k + 1] = La[k] + lo;
    Lb[k + 1] = Lb[k] + hi;
  }
  return {Path(0.0, dt, std::move(X)), Path(0.0, dt, std::move(La)), Path(0.0, dt, std::move(Lb))};
}

SdePath simulate_reflected(const ModelParams& p, const PolicySolution& sol, double x0,
                           double T, double dt, std::uint64_t seed, std::uint64_t rep) {
  return simulate_reflected(p, BarrierPolicy::from_solution(sol), x0, T, dt, seed, rep);
}

double dcp_path_cost(const ModelParams& p, const BarrierPolicy& policy, double x0,
                     const McConfig& cfg, std::uint64_t rep) {
  const std::size_t n = step_count(cfg.T_max, cfg.dt);
  double lo = 0.0, hi = 0.0;
  double x = initial_jump(policy, x0, lo, hi);
  double control = p.p_b() * lo + p.p_s() * hi;
  double running = 0.0;
  const Stepper step{p, policy, cfg.dt, std::sqrt(p.sigma2() * cfg.dt)};
  const double decay = std::exp(-p.alpha() * cfg.dt);
  CounterRng rng(cfg.seed, kBrownianStream, rep);
  double disc = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    running += disc * holding_cost_C(p, x);
    x = step(x, rng.normal(), lo, hi);
    control += disc * (p.p_b() * lo + p.p_s() * hi);
    disc *= decay;
  }
  return running * cfg.dt + control;
}

double dcp_tail_bound(const ModelParams& p, const BarrierPolicy& policy, double x0,
                      double T_max) {
  const double alpha = p.alpha();
  const double e = std::exp(-alpha * T_max);
  const double theta_max = std::max(p.theta_b(), p.theta_s());

  if (policy.lower && policy.upper) {
    // Bounded state: C <= max(C(a), C(b)). Ito's formula for (x - a)^2 (and
    // (b - x)^2) bounds the discounted pushing restarted at any time by
    // [(b - a)^2 + (2 (b - a) D + sigma^2) / alpha] / (2 (b - a)).
    const double a = *policy.lower, b = *policy.upper;
    const double w = b - a;
    const double D = std::max({std::abs(p.beta() - drift_h(p, a)), std::abs(p.beta() - drift_h(p, b)),
                               std::abs(p.beta())});
    const double push = (w * w + (2.0 * w * D + p.sigma2()) / alpha) / (2.0 * w);
    const double c_max = std::max(holding_cost_C(p, a), holding_cost_C(p, b));
    return e * (c_max / alpha + (p.p_s() + p.p_b()) * push);
  }

  // The moment argument below needs pushing to point towards the origin.
  if ((policy.lower && *policy.lower > 0.0) || (policy.upper && *policy.upper < 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  // Unbounded side: d E[X^2] <= (beta^2 / (2 delta_min) + sigma^2) dt, and
  // pushing at a one-sided barrier moves X towards the origin.
  const double delta_min = std::min(p.delta_b(), p.delta_s());
  const double delta_max = std::max(p.delta_b(), p.delta_s());
  const double K = p.beta() * p.beta() / (2.0 * delta_min) + p.sigma2();
  double start = x0;
  if (policy.lower) start = std::max(start, *policy.lower);
  if (policy.upper) start = std::min(start, *policy.upper);
  const double I = discounted_sqrt_tail(alpha, start * start, K, T_max);
  double bound = theta_max * I;
  // Integrating dX against e^{-alpha t} bounds the discounted pushing at a
  // one-sided barrier c by alpha (I + |c| e/alpha) + |beta| e/alpha + delta_max I.
  const auto pushing = [&](double c) {
    return alpha * (I + std::abs(c) * e / alpha) + std::abs(p.beta()) * e / alpha + delta_max * I;
  };
  if (policy.lower) bound += p.p_b() * pushing(*policy.lower);
  if (policy.upper) bound += p.p_s() * pushing(*policy.upper);
  return bound;
}

CostEstimate estimate_dcp_cost(const ModelParams& p, const BarrierPolicy& policy, double x0,
                               const McConfig& cfg) {
  cfg.validate();
  policy.validate();
  const std::vector<double> costs = parallel_map(
      cfg.reps, [&](std::size_t r) { return dcp_path_cost(p, policy, x0, cfg, r); }, cfg.threads);
  return summarize(costs, cfg.T_max, dcp_tail_bound(p, policy, x0, cfg.T_max));
}

CostEstimate estimate_dcp_cost(const ModelParams& p, const PolicySolution& sol, double x0,
                               const McConfig& cfg) {
  return estimate_dcp_cost(p, BarrierPolicy::from_solution(sol), x0, cfg);
}

}  // namespace matchq
