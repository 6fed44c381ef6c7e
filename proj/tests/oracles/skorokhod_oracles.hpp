#pragma once

// Independent reference implementations used only by tests: step-by-step
// projections for piecewise-constant inputs and exhaustive pairwise scans.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "matchq/path.hpp"

namespace matchq::oracle {

/// phi_0 = clamp(psi_0), phi_k = clamp(phi_{k-1} + psi_k - psi_{k-1}) with
/// clamp to [l_k, r_k].
inline std::vector<double> projected_walk(const Path& psi, const std::vector<double>& l,
                                          const std::vector<double>& r) {
  std::vector<double> phi(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double free = k == 0 ? psi[0] : phi[k - 1] + (psi[k] - psi[k - 1]);
    phi[k] = std::min(r[k], std::max(l[k], free));
  }
  return phi;
}

inline std::vector<double> projected_walk(const Path& psi, double a, double b) {
  return projected_walk(psi, std::vector<double>(psi.size(), a), std::vector<double>(psi.size(), b));
}

/// sup |f(t) - f(s)| over all grid pairs inside [i1, i2].
inline double brute_oscillation(const Path& f, std::size_t i1, std::size_t i2) {
  double best = 0.0;
  for (std::size_t i = i1; i <= i2; ++i) {
    for (std::size_t k = i; k <= i2; ++k) best = std::max(best, std::abs(f[k] - f[i]));
  }
  return best;
}

/// Modulus of the piecewise-constant path on [t0, t0 + last dt]: values v_i and
/// v_k (i < k) occur at times s, t with t - s < delta iff (k - i - 1) dt < delta.
inline double brute_modulus(const Path& f, double delta, std::size_t last) {
  double best = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    for (std::size_t k = i; k <= last; ++k) {
      if (static_cast<double>(k - i - (k > i ? 1 : 0)) * f.dt() < delta || k == i) {
        best = std::max(best, std::abs(f[k] - f[i]));
      }
    }
  }
  return best;
}

/// Random walk with N(0, scale^2) steps starting at start.
inline Path gaussian_walk(std::mt19937_64& gen, std::size_t steps, double dt, double scale,
                          double start = 0.0) {
  std::normal_distribution<double> z(0.0, scale);
  std::vector<double> v(steps + 1);
  v[0] = start;
  for (std::size_t k = 1; k <= steps; ++k) v[k] = v[k - 1] + z(gen);
  return Path(0.0, dt, std::move(v));
}

/// Random walk with +-1 steps.
inline Path sign_walk(std::mt19937_64& gen, std::size_t steps) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(steps + 1, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) v[k] = v[k - 1] + (coin(gen) ? 1.0 : -1.0);
  return Path(0.0, 1.0, std::move(v));
}

}  // namespace matchq::oracle
