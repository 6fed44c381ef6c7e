#pragma once

#include <string_view>

namespace matchq {

/// Parameter tuple of the limiting diffusion control problem.
///
/// Holds the effective (already folded) holding-cost slopes theta = c + r*delta;
/// the split into holding and abandonment costs lives in QueueConfig.
/// Construction validates every positivity constraint and throws
/// std::invalid_argument naming the offending field.
class ModelParams {
 public:
  ModelParams(double sigma2, double beta, double alpha, double delta_b,
              double delta_s, double theta_b, double theta_s, double p_b,
              double p_s);

  /// sigma^2 = 1, beta = 2, alpha = 1, delta_b = 2, delta_s = 4,
  /// theta_b = 4, theta_s = 5, p_b = 0.4, p_s = 0.1.
  static ModelParams reference_example();

  double sigma2() const { return sigma2_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  double delta_b() const { return delta_b_; }
  double delta_s() const { return delta_s_; }
  double theta_b() const { return theta_b_; }
  double theta_s() const { return theta_s_; }
  double p_b() const { return p_b_; }
  double p_s() const { return p_s_; }

  // Copies with a single field replaced (re-validated).
  ModelParams with_p_b(double p_b) const;
  ModelParams with_p_s(double p_s) const;
  ModelParams with_beta(double beta) const;
  ModelParams with_sigma2(double sigma2) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double sigma2_;
  double beta_;
  double alpha_;
  double delta_b_;
  double delta_s_;
  double theta_b_;
  double theta_s_;
  double p_b_;
  double p_s_;
};

struct Thresholds {
  double T_s;
  double T_b;
};

enum class Regime { ZeroControl, TwoSided, LeftReflect, RightReflect };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view s);

/// T_s = theta_s / (alpha + delta_s), T_b = theta_b / (alpha + delta_b).
Thresholds thresholds(const ModelParams& p);

/// Ties p == T fall on the "no blocking" side.
Regime classify_regime(const ModelParams& p);

/// h(x) = delta_s x^+ - delta_b x^-.
double drift_h(const ModelParams& p, double x);

/// C(x) = theta_s x^+ + theta_b x^-.
double holding_cost_C(const ModelParams& p, double x);

/// Reflection x -> -x: swaps the buyer and seller triples and negates beta.
ModelParams mirror(const ModelParams& p);

}  // namespace matchq
