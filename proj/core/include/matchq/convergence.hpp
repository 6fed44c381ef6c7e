#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "matchq/diagnostics.hpp"
#include "matchq/hjb.hpp"
#include "matchq/queuesim.hpp"

namespace matchq {

struct ConvergenceConfig {
  std::vector<int> ns{25, 100, 400};
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  double T_max = 12.0;
  double perturbation = 0.1;  // barrier shift in scaled units
  double diagnostics_dt = 0.01;
  unsigned threads = 0;

  void validate() const;
};

/// Cost of one buffer policy at one scale, with its gap to the diffusion value.
struct ConvergenceRow {
  int n = 0;
  std::string policy;  // "threshold", "a-0.1,b+0.1", ..., "zero"
  BufferPolicy buffers;
  CostEstimate cost;
  double gap = 0.0;  // J^n - V(x0)
};

/// Replication averages of the trajectory diagnostics under the threshold policy.
struct DiagnosticsRow {
  int n = 0;
  DiagnosticsReport mean;
};

struct ConvergenceReport {
  double V0 = 0.0;  // diffusion value function at the scaled initial state
  PolicySolution solution;
  std::vector<ConvergenceRow> rows;
  std::vector<DiagnosticsRow> diagnostics;

  const ConvergenceRow& row(int n, const std::string& policy) const;
};

/// For each n, estimates the scaled cost of the lattice-translated optimal
/// policy, of its barrier perturbations and of zero control, all on common
/// random numbers. `bridge` supplies everything but n; its limit parameters
/// must reproduce `p`.
ConvergenceReport convergence_study(const ModelParams& p, const QueueConfig& bridge,
                                    const ConvergenceConfig& cfg);

/// Writes `n,policy,m_b,m_s,mean,stderr,reps,gap,tail_bound`; unbounded
/// buffers are written as empty fields.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

}  // namespace matchq
