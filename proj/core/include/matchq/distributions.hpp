#pragma once

#include <string>
#include <string_view>

#include "matchq/random.hpp"

namespace matchq {

enum class InterarrivalFamily { Exponential, Deterministic, Erlang, Hyperexponential };

/// Renewal interarrival law with a prescribed rate and squared coefficient of
/// variation: exponential (scv 1), deterministic (scv 0), Erlang-k (scv 1/k)
/// and two-phase hyperexponential with balanced means (any scv >= 1).
struct InterarrivalSpec {
  InterarrivalFamily family = InterarrivalFamily::Exponential;
  int erlang_k = 2;  // Erlang only
  double scv = 1.0;  // Hyperexponential only

  static InterarrivalSpec exponential() { return {}; }
  static InterarrivalSpec deterministic() { return {InterarrivalFamily::Deterministic, 2, 0.0}; }
  static InterarrivalSpec erlang(int k) { return {InterarrivalFamily::Erlang, k, 1.0 / k}; }
  static InterarrivalSpec hyperexponential(double scv) {
    return {InterarrivalFamily::Hyperexponential, 2, scv};
  }

  /// Squared coefficient of variation of the law.
  double squared_cv() const;
  /// Draws one interarrival time with mean 1 / rate.
  double sample(double rate, CounterRng& rng) const;
  /// Throws std::invalid_argument mentioning `field`.
  void validate(const std::string& field) const;
};

enum class PatienceFamily { Exponential, Uniform, Deterministic, None };

/// Patience-time law. Exponential(delta) and Uniform[0, 1/delta] both have
/// F'(0+) = delta; Deterministic(duration) and None have zero hazard at 0.
struct PatienceSpec {
  PatienceFamily family = PatienceFamily::Exponential;
  double delta = 1.0;     // Exponential, Uniform
  double duration = 1.0;  // Deterministic

  static PatienceSpec exponential(double delta) { return {PatienceFamily::Exponential, delta, 1.0}; }
  static PatienceSpec uniform(double delta) { return {PatienceFamily::Uniform, delta, 1.0}; }
  static PatienceSpec deterministic(double d) { return {PatienceFamily::Deterministic, 1.0, d}; }
  static PatienceSpec none() { return {PatienceFamily::None, 1.0, 1.0}; }

  /// Right derivative of the CDF at 0.
  double hazard_at_zero() const;
  /// Patience time; +infinity for None.
  double sample(CounterRng& rng) const;
  void validate(const std::string& field) const;
};

std::string_view to_string(InterarrivalFamily f);
std::string_view to_string(PatienceFamily f);
InterarrivalFamily interarrival_family_from_string(std::string_view s);
PatienceFamily patience_family_from_string(std::string_view s);

}  // namespace matchq
