#include "matchq/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace matchq {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("model.") + name +
                                " must be finite and > 0");
  }
}

}  // namespace

ModelParams::ModelParams(double sigma2, double beta, double alpha,
                         double delta_b, double delta_s, double theta_b,
                         double theta_s, double p_b, double p_s)
    : sigma2_(sigma2),
      beta_(beta),
      alpha_(alpha),
      delta_b_(delta_b),
      delta_s_(delta_s),
      theta_b_(theta_b),
      theta_s_(theta_s),
      p_b_(p_b),
      p_s_(p_s) {
  require_positive(sigma2, "sigma2");
  if (!std::isfinite(beta)) throw std::invalid_argument("model.beta must be finite");
  require_positive(alpha, "alpha");
  require_positive(delta_b, "delta_b");
  require_positive(delta_s, "delta_s");
  require_positive(theta_b, "theta_b");
  require_positive(theta_s, "theta_s");
  require_positive(p_b, "p_b");
  require_positive(p_s, "p_s");
}

ModelParams ModelParams::reference_example() {
  return ModelParams(1.0, 2.0, 1.0, 2.0, 4.0, 4.0, 5.0, 0.4, 0.1);
}

ModelParams ModelParams::with_p_b(double p_b) const {
  return ModelParams(sigma2_, beta_, alpha_, delta_b_, delta_s_, theta_b_,
                     theta_s_, p_b, p_s_);
}

ModelParams ModelParams::with_p_s(double p_s) const {
  return ModelParams(sigma2_, beta_, alpha_, delta_b_, delta_s_, theta_b_,
                     theta_s_, p_b_, p_s);
}

ModelParams ModelParams::with_beta(double beta) const {
  return ModelParams(sigma2_, beta, alpha_, delta_b_, delta_s_, theta_b_,
                     theta_s_, p_b_, p_s_);
}

ModelParams ModelParams::with_sigma2(double sigma2) const {
  return ModelParams(sigma2, beta_, alpha_, delta_b_, delta_s_, theta_b_,
                     theta_s_, p_b_, p_s_);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::ZeroControl: return "ZeroControl";
    case Regime::TwoSided: return "TwoSided";
    case Regime::LeftReflect: return "LeftReflect";
    case Regime::RightReflect: return "RightReflect";
  }
  return "?";
}

Regime regime_from_string(std::string_view s) {
  if (s == "ZeroControl") return Regime::ZeroControl;
  if (s == "TwoSided") return Regime::TwoSided;
  if (s == "LeftReflect") return Regime::LeftReflect;
  if (s == "RightReflect") return Regime::RightReflect;
  throw std::invalid_argument("unknown regime '" + std::string(s) + "'");
}

Thresholds thresholds(const ModelParams& p) {
  return {p.theta_s() / (p.alpha() + p.delta_s()),
          p.theta_b() / (p.alpha() + p.delta_b())};
}

Regime classify_regime(const ModelParams& p) {
  const auto [T_s, T_b] = thresholds(p);
  const bool block_s = p.p_s() < T_s;
  const bool block_b = p.p_b() < T_b;
  if (block_s && block_b) return Regime::TwoSided;
  if (block_b) return Regime::LeftReflect;
  if (block_s) return Regime::RightReflect;
  return Regime::ZeroControl;
}

double drift_h(const ModelParams& p, double x) {
  return x >= 0.0 ? p.delta_s() * x : p.delta_b() * x;
}

double holding_cost_C(const ModelParams& p, double x) {
  return x >= 0.0 ? p.theta_s() * x : -p.theta_b() * x;
}

ModelParams mirror(const ModelParams& p) {
  return ModelParams(p.sigma2(), -p.beta(), p.alpha(), p.delta_s(),
                     p.delta_b(), p.theta_s(), p.theta_b(), p.p_s(), p.p_b());
}

}  // namespace matchq
