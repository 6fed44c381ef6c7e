#include "matchq/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace matchq {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

CostEstimate summarize(const std::vector<double>& samples, double T_max, double tail_bound) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("summarize: need at least two samples");
  const double mean = pairwise_sum(samples) / static_cast<double>(n);
  std::vector<double> sq(n);
  std::transform(samples.begin(), samples.end(), sq.begin(),
                 [mean](double v) { return (v - mean) * (v - mean); });
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n, T_max, tail_bound};
}

double combined_stderr(const CostEstimate& a, const CostEstimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& fn,
                                 unsigned threads) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); }, threads);
  return out;
}

}  // namespace matchq
