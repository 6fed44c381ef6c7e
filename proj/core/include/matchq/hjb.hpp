#pragma once

#include <optional>
#include <vector>

#include "matchq/errors.hpp"
#include "matchq/params.hpp"

namespace matchq {

/// Numerical settings of the free-boundary solver.
struct SolverConfig {
  double x_max = 10.0;      // integration horizon on the positive axis
  double x_min = -10.0;     // working-grid left end
  double ode_tol = 1e-10;   // local error tolerance of the integrator
  double W_big = 50.0;      // divergence-detection magnitude
  double bisect_tol = 1e-6; // barrier tolerance
  int max_iter = 100;       // bisection cap
  double grid_step = 1e-3;  // spacing of the output lattice (anchored at 0)

  /// x_max = max(10, 10 (|beta| + 1) / min(delta_b, delta_s)), x_min = -x_max,
  /// W_big = 50 max(T_s, T_b, 1).
  static SolverConfig defaults_for(const ModelParams& p);

  /// Throws std::invalid_argument naming the offending `solver.*` field.
  void validate(const ModelParams& p) const;
};

/// Tabulated function with its first derivative on a strictly increasing grid.
struct Curve {
  std::vector<double> grid;
  std::vector<double> W;
  std::vector<double> Wp;

  std::size_t size() const { return grid.size(); }
  bool empty() const { return grid.empty(); }
  double x_front() const { return grid.front(); }
  double x_back() const { return grid.back(); }

  /// Cubic Hermite value on [front, back]; linear extension outside.
  double value(double x) const;
  /// Piecewise-linear derivative on [front, back]; end slope outside.
  double slope(double x) const;

  void push(double x, double w, double wp) {
    grid.push_back(x);
    W.push_back(w);
    Wp.push_back(wp);
  }
};

enum class TailClass { DivergesUp, DivergesDown, Bounded };

struct PolicySolution {
  Regime regime;
  std::optional<double> a_star;
  std::optional<double> b_star;
  std::optional<double> c;
  Curve W_curve;  // W = Q'
  Curve Q_curve;  // stored as (x, Q, Q')
  std::optional<double> k_s;
  std::optional<double> k_b;

  double Q(double x) const { return Q_curve.value(x); }
  double W(double x) const;
};

struct MaxOfWa {
  double M;    // max of W_a over [a, x_end]
  double r_a;  // its abscissa
};

/// W_a on [a, x_end]: the x <= 0 branch starts from W(a) = -p_b, W'(a) = 0
/// and the x > 0 branch continues from (W(0), W'(0)). Stops at x_max or at
/// the first lattice node with |W| > W_big.
Curve integrate_Wa(double a, const ModelParams& p, const SolverConfig& cfg);

TailClass classify_tail(const Curve& curve, const ModelParams& p,
                        const SolverConfig& cfg);

/// Separatrix c = sup{a < 0 : W_a -> +inf}, located by bisection on the
/// divergence direction. Requires p_b < T_b.
double find_c(const ModelParams& p, const SolverConfig& cfg);

/// Same separatrix located as the root of the smooth-fit mismatch
/// W_a'(0) - (W_a(0) - T_s) Psi0'(0+) inside [lo, hi].
double find_c_smooth_fit(const ModelParams& p, const SolverConfig& cfg,
                         double lo, double hi);

MaxOfWa max_of_Wa(double a, const ModelParams& p, const SolverConfig& cfg);

struct Barriers {
  double a_star;
  double b_star;
};

/// a* in (c, 0) with M(a*) = p_s and b* = r_{a*}. Requires the TwoSided regime.
Barriers find_barriers(const ModelParams& p, const SolverConfig& cfg);

/// Bounded decaying solutions of the homogeneous equations, normalized to 1
/// at the origin: Phi0 on [x_min, 0], Psi0 on [0, x_max].
struct DecayingSolutions {
  Curve phi0;
  Curve psi0;
};

DecayingSolutions decaying_solutions(const ModelParams& p, const SolverConfig& cfg);

enum class Side { Negative, Positive };

/// Initial slope of the decaying homogeneous solution found by forward
/// shooting from the origin with value 1 and bisection on the slope.
double decaying_slope_by_shooting(const ModelParams& p, const SolverConfig& cfg,
                                  Side side);

struct ZeroControlSolution {
  Curve W;
  double k_s;
  double k_b;
};

/// Smooth-fit solution W = k_b Phi0 - T_b (x <= 0), k_s Psi0 + T_s (x >= 0).
ZeroControlSolution solve_zero_control(const ModelParams& p, const SolverConfig& cfg);

/// alpha Q(x) = sigma^2/2 W'(0) + beta W(0) + alpha int_0^x W. The grid must
/// contain the origin.
Curve assemble_Q(const Curve& W, const ModelParams& p);

/// Dispatches on the regime and assembles the value function.
PolicySolution solve(const ModelParams& p, const SolverConfig& cfg);
PolicySolution solve(const ModelParams& p);

/// HJB branches at each interior node of the solution grid.
struct HjbResidual {
  std::vector<double> x;
  std::vector<double> generator;  // G Q + C
  std::vector<double> lower;      // Q' + p_b
  std::vector<double> upper;      // p_s - Q'
  std::vector<double> scale;      // max(1, |Q|)
};

HjbResidual hjb_residual(const PolicySolution& sol, const ModelParams& p);

}  // namespace matchq
