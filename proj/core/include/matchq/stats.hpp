#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace matchq {

/// Monte Carlo estimate of a discounted cost.
struct CostEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  std::size_t reps = 0;
  double T_max = 0.0;       // truncation horizon
  double tail_bound = 0.0;  // bound on the discarded tail beyond T_max
};

/// Pairwise (cascade) summation; error grows like O(log n) ulps.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

/// Mean and standard error of `samples` (requires at least two samples).
CostEstimate summarize(const std::vector<double>& samples, double T_max, double tail_bound);

/// Combined standard error of a difference of two estimates.
double combined_stderr(const CostEstimate& a, const CostEstimate& b);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

/// Evaluates fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency) and returns results in index order. fn must be thread-safe.
std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& fn,
                                 unsigned threads = 0);

}  // namespace matchq
