#include "matchq/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "matchq/diffusion.hpp"
#include "matchq/report.hpp"

namespace matchq {
namespace {

struct NamedPolicy {
  std::string name;
  std::optional<double> lower;
  std::optional<double> upper;
  bool bounded;  // false for zero control
};

std::string shift_label(char side, double shift) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%+g", side, shift);
  return buf;
}

std::vector<NamedPolicy> policies_for(const PolicySolution& sol, double eps) {
  const BarrierPolicy base = BarrierPolicy::from_solution(sol);
  std::vector<NamedPolicy> out{{"threshold", base.lower, base.upper, true}};
  std::vector<double> lo_shifts{0.0}, hi_shifts{0.0};
  if (base.lower) lo_shifts = {-eps, eps};
  if (base.upper) hi_shifts = {-eps, eps};
  if (base.lower || base.upper) {
    for (double dl : lo_shifts) {
      for (double du : hi_shifts) {
        std::string name;
        if (base.lower) name += shift_label('a', dl);
        if (base.lower && base.upper) name += ',';
        if (base.upper) name += shift_label('b', du);
        std::optional<double> lo = base.lower, hi = base.upper;
        if (lo) *lo += dl;
        if (hi) *hi += du;
        out.push_back({name, lo, hi, true});
      }
    }
  }
  out.push_back({"zero", std::nullopt, std::nullopt, false});
  return out;
}

void require_same_limit(const ModelParams& a, const ModelParams& b) {
  const double fa[] = {a.sigma2(), a.beta(), a.alpha(), a.delta_b(), a.delta_s(),
                       a.theta_b(), a.theta_s(), a.p_b(), a.p_s()};
  const double fb[] = {b.sigma2(), b.beta(), b.alpha(), b.delta_b(), b.delta_s(),
                       b.theta_b(), b.theta_s(), b.p_b(), b.p_s()};
  for (std::size_t i = 0; i < 9; ++i) {
    if (std::abs(fa[i] - fb[i]) > 1e-12 * std::max(1.0, std::abs(fb[i]))) {
      throw std::invalid_argument("convergence: queue bridge does not reproduce the model parameters");
    }
  }
}

}  // namespace

void ConvergenceConfig::validate() const {
  if (ns.empty()) throw std::invalid_argument("convergence.ns must not be empty");
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("convergence.ns entries must be >= 1");
  }
  if (reps < 2) throw std::invalid_argument("convergence.reps must be >= 2");
  if (!(T_max > 0.0)) throw std::invalid_argument("convergence.T_max must be > 0");
  if (!(perturbation > 0.0)) throw std::invalid_argument("convergence.perturbation must be > 0");
  if (!(diagnostics_dt > 0.0)) throw std::invalid_argument("convergence.diagnostics_dt must be > 0");
}

const ConvergenceRow& ConvergenceReport::row(int n, const std::string& policy) const {
  for (const auto& r : rows) {
    if (r.n == n && r.policy == policy) return r;
  }
  throw std::out_of_range("convergence report has no row for policy " + policy);
}

ConvergenceReport convergence_study(const ModelParams& p, const QueueConfig& bridge,
                                    const ConvergenceConfig& cfg) {
  cfg.validate();
  require_same_limit(bridge.limit_params(), p);

  ConvergenceReport report;
  report.solution = solve(p);
  report.V0 = report.solution.Q(bridge.x0_hat);
  const std::vector<NamedPolicy> named = policies_for(report.solution, cfg.perturbation);

  for (int n : cfg.ns) {
    QueueConfig q = bridge;
    q.n = n;
    q.validate();
    std::vector<BufferPolicy> buffers;
    for (const auto& np : named) {
      buffers.push_back(np.bounded ? BufferPolicy::from_scaled(np.lower, np.upper, n) : BufferPolicy{});
    }

    std::vector<std::vector<double>> costs(named.size(), std::vector<double>(cfg.reps));
    std::vector<DiagnosticsReport> diag(cfg.reps);
    parallel_for(
        cfg.reps,
        [&](std::size_t r) {
          for (std::size_t j = 0; j < named.size(); ++j) {
            const QueueTrajectory traj = simulate_queue(q, buffers[j], cfg.T_max, cfg.seed, r);
            costs[j][r] = qcp_path_cost(q, traj);
            if (j == 0) diag[r] = diagnostics(q, traj, cfg.diagnostics_dt);
          }
        },
        cfg.threads);

    for (std::size_t j = 0; j < named.size(); ++j) {
      ConvergenceRow row;
      row.n = n;
      row.policy = named[j].name;
      row.buffers = buffers[j];
      row.cost = summarize(costs[j], cfg.T_max, qcp_tail_bound(q, buffers[j], cfg.T_max));
      row.gap = row.cost.mean - report.V0;
      report.rows.push_back(row);
    }

    DiagnosticsRow drow{n, {}};
    const auto average = [&](double DiagnosticsReport::*field) {
      std::vector<double> v(cfg.reps);
      for (std::size_t r = 0; r < cfg.reps; ++r) v[r] = diag[r].*field;
      return pairwise_sum(v) / static_cast<double>(cfg.reps);
    };
    drow.mean.abandonment_s = average(&DiagnosticsReport::abandonment_s);
    drow.mean.abandonment_b = average(&DiagnosticsReport::abandonment_b);
    drow.mean.little_s = average(&DiagnosticsReport::little_s);
    drow.mean.little_b = average(&DiagnosticsReport::little_b);
    drow.mean.fluid_blocking = average(&DiagnosticsReport::fluid_blocking);
    report.diagnostics.push_back(drow);
  }
  return report;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "n,policy,m_b,m_s,mean,stderr,reps,gap,tail_bound\n";
  for (const auto& r : report.rows) {
    os << r.n << ",\"" << r.policy << "\",";
    if (r.buffers.m_b) os << *r.buffers.m_b;
    os << ',';
    if (r.buffers.m_s) os << *r.buffers.m_s;
    os << ',' << format_number(r.cost.mean) << ',' << format_number(r.cost.std_error) << ','
       << r.cost.reps << ',' << format_number(r.gap) << ',' << format_number(r.cost.tail_bound)
       << '\n';
  }
}

}  // namespace matchq
