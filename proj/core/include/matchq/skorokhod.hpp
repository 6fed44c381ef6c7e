#pragma once

#include "matchq/path.hpp"

namespace matchq {

/// Skorokhod decomposition phi = psi + eta_l - eta_r of a path constrained to
/// [l, r]. eta_l and eta_r are non-decreasing, start at >= 0 and only grow
/// while phi sits on the corresponding barrier.
struct Decomposition {
  Path phi;
  Path eta_l;
  Path eta_r;
};

/// Gamma_a(psi)(t) = psi(t) + sup_{s<=t} (a - psi(s))^+.
Decomposition reflect_one_sided(const Path& psi, double a);

/// Two-sided map on [a, b] computed as Lambda_{a,b} o Gamma_a.
/// Throws std::invalid_argument unless a < b.
Decomposition reflect_two_sided(const Path& psi, double a, double b);

/// Map on the time-dependent interval [l(t), r(t)]:
///   phi = psi - Theta(psi),  Theta = max(lower_part, upper_part),
///   lower_part(t) = min((psi(0) - r(0))^+, inf_{u<=t} (psi(u) - l(u))),
///   upper_part(t) = sup_{s<=t} min(psi(s) - r(s), inf_{u in [s,t]} (psi(u) - l(u))).
/// Requires aligned grids and inf (r - l) > 0.
Decomposition reflect_time_varying(const Path& psi, const Path& l, const Path& r);

/// sup |f(t) - f(s)| over s, t in [t1, t2].
double oscillation(const Path& f, double t1, double t2);

/// Modulus of continuity: sup |f(t) - f(s)| over s, t in [t0, T] with
/// |t - s| < delta, evaluated exactly for the piecewise-constant path.
double modulus(const Path& f, double delta, double T);

}  // namespace matchq
