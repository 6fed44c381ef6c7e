#pragma once

#include <cstdint>
#include <optional>

#include "matchq/hjb.hpp"
#include "matchq/params.hpp"
#include "matchq/path.hpp"
#include "matchq/stats.hpp"

namespace matchq {

/// Reflecting barriers of a singular-control policy. An absent side is
/// uncontrolled.
struct BarrierPolicy {
  std::optional<double> lower;  // buyers are blocked at this level (cost p_b)
  std::optional<double> upper;  // sellers are blocked at this level (cost p_s)

  /// Barriers prescribed by an optimal solution of the given regime.
  static BarrierPolicy from_solution(const PolicySolution& sol);
  /// Throws std::invalid_argument unless lower < upper when both are present.
  void validate() const;
};

/// Sample path of the controlled diffusion on a uniform time grid.
struct SdePath {
  Path X;
  Path L_a;  // cumulative pushing at the lower barrier
  Path L_b;  // cumulative pushing at the upper barrier
};

struct McConfig {
  std::size_t reps = 10000;
  double T_max = 12.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// Throws std::invalid_argument naming the offending `mc.*` field.
  void validate() const;
};

/// Projected Euler-Maruyama scheme:
///   X~ = X_k + (beta - h(X_k)) dt + sigma sqrt(dt) Z_k,  X_{k+1} = clamp(X~),
/// where the clamp amounts are the local-time increments. A start outside the
/// barriers jumps to the nearest one at t = 0. Normal draws are keyed by
/// (seed, rep, step).
SdePath simulate_reflected(const ModelParams& p, const BarrierPolicy& policy, double x0,
                           double T, double dt, std::uint64_t seed, std::uint64_t rep = 0);
SdePath simulate_reflected(const ModelParams& p, const PolicySolution& sol, double x0,
                           double T, double dt, std::uint64_t seed, std::uint64_t rep = 0);

/// Discounted cost int_0^T e^{-alpha t} [C(X) dt + p_s dL_b + p_b dL_a] of one
/// replication, by the left-endpoint rule with control increments discounted
/// at their step time.
double dcp_path_cost(const ModelParams& p, const BarrierPolicy& policy, double x0,
                     const McConfig& cfg, std::uint64_t rep);

/// Bound on the expected discounted cost accrued after T_max.
double dcp_tail_bound(const ModelParams& p, const BarrierPolicy& policy, double x0,
                      double T_max);

CostEstimate estimate_dcp_cost(const ModelParams& p, const BarrierPolicy& policy, double x0,
                               const McConfig& cfg);
CostEstimate estimate_dcp_cost(const ModelParams& p, const PolicySolution& sol, double x0,
                               const McConfig& cfg);

}  // namespace matchq
