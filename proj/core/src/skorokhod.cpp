#include "matchq/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace matchq {
namespace {

// Splits eta = phi - psi into its non-decreasing parts. Under complementarity
// a positive increment can only happen on the lower barrier and a negative one
// on the upper barrier, so the sign decides the attribution.
Decomposition split(const Path& psi, std::vector<double> phi) {
  const std::size_t n = psi.size();
  std::vector<double> eta_l(n, 0.0), eta_r(n, 0.0);
  double prev = 0.0, lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double eta = phi[k] - psi[k];
    const double d = eta - prev;
    if (d > 0.0) {
      lo += d;
    } else if (d < 0.0) {
      hi -= d;
    }
    eta_l[k] = lo;
    eta_r[k] = hi;
    prev = eta;
  }
  return {Path(psi.t0(), psi.dt(), std::move(phi)),
          Path(psi.t0(), psi.dt(), std::move(eta_l)),
          Path(psi.t0(), psi.dt(), std::move(eta_r))};
}

}  // namespace

Decomposition reflect_one_sided(const Path& psi, double a) {
  const std::size_t n = psi.size();
  std::vector<double> phi(n), eta(n);
  double push = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    push = std::max(push, a - psi[k]);
    phi[k] = psi[k] + push;
    eta[k] = push;
  }
  return {Path(psi.t0(), psi.dt(), std::move(phi)),
          Path(psi.t0(), psi.dt(), std::move(eta)),
          Path::constant(psi.t0(), psi.dt(), n, 0.0)};
}

Decomposition reflect_two_sided(const Path& psi, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("reflect_two_sided: need a < b");
  const Path g = reflect_one_sided(psi, a).phi;
  // lambda(t) = sup_{s<=t} min((g(s)-b)^+, inf_{u in [s,t]} (g(u)-a)),
  // updated in one forward scan.
  const std::size_t n = psi.size();
  std::vector<double> phi(n);
  double lambda = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    lambda = std::min(g[k] - a, std::max(lambda, std::max(g[k] - b, 0.0)));
    phi[k] = g[k] - lambda;
  }
  return split(psi, std::move(phi));
}

Decomposition reflect_time_varying(const Path& psi, const Path& l, const Path& r) {
  if (!psi.same_grid(l) || !psi.same_grid(r)) {
    throw std::invalid_argument("reflect_time_varying: misaligned grids");
  }
  const std::size_t n = psi.size();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) gap = std::min(gap, r[k] - l[k]);
  if (!(gap > 0.0)) {
    throw std::invalid_argument("reflect_time_varying: need inf(r - l) > 0");
  }

  std::vector<double> phi(n);
  double lower = std::max(psi[0] - r[0], 0.0);
  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double dl = psi[k] - l[k];
    const double dr = psi[k] - r[k];
    lower = std::min(lower, dl);
    upper = std::min(dl, std::max(upper, dr));
    phi[k] = psi[k] - std::max(lower, upper);
  }
  return split(psi, std::move(phi));
}

double oscillation(const Path& f, double t1, double t2) {
  if (t1 > t2) throw std::invalid_argument("oscillation: need t1 <= t2");
  std::size_t i1, i2;
  try {
    i1 = f.index_at(t1);
    i2 = f.index_at(t2);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("oscillation: window outside the path domain");
  }
  const auto [lo, hi] = std::minmax_element(f.values().begin() + i1,
                                            f.values().begin() + i2 + 1);
  return *hi - *lo;
}

double modulus(const Path& f, double delta, double T) {
  if (!(delta > 0.0)) throw std::invalid_argument("modulus: delta must be > 0");
  std::size_t last;
  try {
    last = f.index_at(T);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("modulus: T outside the path domain");
  }
  // Values v_i, v_k (i < k) are both seen within a window shorter than delta
  // iff (k - i - 1) dt < delta, i.e. k - i <= ceil(delta / dt).
  double q = delta / f.dt();
  if (std::abs(q - std::round(q)) < 1e-9) q = std::round(q);
  const auto lag = static_cast<std::size_t>(std::ceil(q));

  std::deque<std::size_t> maxq, minq;
  double best = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    while (!maxq.empty() && f[maxq.back()] <= f[k]) maxq.pop_back();
    while (!minq.empty() && f[minq.back()] >= f[k]) minq.pop_back();
    maxq.push_back(k);
    minq.push_back(k);
    while (maxq.front() + lag < k) maxq.pop_front();
    while (minq.front() + lag < k) minq.pop_front();
    best = std::max(best, f[maxq.front()] - f[minq.front()]);
  }
  return best;
}

}  // namespace matchq
