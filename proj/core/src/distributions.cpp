#include "matchq/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace matchq {

double InterarrivalSpec::squared_cv() const {
  switch (family) {
    case InterarrivalFamily::Exponential:
      return 1.0;
    case InterarrivalFamily::Deterministic:
      return 0.0;
    case InterarrivalFamily::Erlang:
      return 1.0 / erlang_k;
    case InterarrivalFamily::Hyperexponential:
      return scv;
  }
  return 1.0;
}

double InterarrivalSpec::sample(double rate, CounterRng& rng) const {
  switch (family) {
    case InterarrivalFamily::Exponential:
      return rng.exponential(rate);
    case InterarrivalFamily::Deterministic:
      return 1.0 / rate;
    case InterarrivalFamily::Erlang: {
      double s = 0.0;
      for (int i = 0; i < erlang_k; ++i) s += rng.exponential(erlang_k * rate);
      return s;
    }
    case InterarrivalFamily::Hyperexponential: {
      // Balanced means: p1 / mu1 = p2 / mu2 = 1 / (2 rate).
      const double p1 = 0.5 * (1.0 + std::sqrt((scv - 1.0) / (scv + 1.0)));
      const double u = rng.uniform();
      const double p = u < p1 ? p1 : 1.0 - p1;
      return rng.exponential(2.0 * p * rate);
    }
  }
  return 1.0 / rate;
}

void InterarrivalSpec::validate(const std::string& field) const {
  if (family == InterarrivalFamily::Erlang && erlang_k < 1) {
    throw std::invalid_argument(field + ".k must be >= 1");
  }
  if (family == InterarrivalFamily::Hyperexponential && !(scv >= 1.0)) {
    throw std::invalid_argument(field + ".scv must be >= 1 for the hyperexponential family");
  }
}

double PatienceSpec::hazard_at_zero() const {
  switch (family) {
    case PatienceFamily::Exponential:
    case PatienceFamily::Uniform:
      return delta;
    case PatienceFamily::Deterministic:
    case PatienceFamily::None:
      return 0.0;
  }
  return 0.0;
}

double PatienceSpec::sample(CounterRng& rng) const {
  switch (family) {
    case PatienceFamily::Exponential:
      return rng.exponential(delta);
    case PatienceFamily::Uniform:
      return rng.uniform() / delta;
    case PatienceFamily::Deterministic:
      return duration;
    case PatienceFamily::None:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

void PatienceSpec::validate(const std::string& field) const {
  if ((family == PatienceFamily::Exponential || family == PatienceFamily::Uniform) &&
      !(delta > 0.0 && std::isfinite(delta))) {
    throw std::invalid_argument(field + ".delta must be finite and > 0");
  }
  if (family == PatienceFamily::Deterministic && !(duration > 0.0)) {
    throw std::invalid_argument(field + ".duration must be > 0");
  }
}

std::string_view to_string(InterarrivalFamily f) {
  switch (f) {
    case InterarrivalFamily::Exponential:
      return "exponential";
    case InterarrivalFamily::Deterministic:
      return "deterministic";
    case InterarrivalFamily::Erlang:
      return "erlang";
    case InterarrivalFamily::Hyperexponential:
      return "hyperexponential";
  }
  return "exponential";
}

std::string_view to_string(PatienceFamily f) {
  switch (f) {
    case PatienceFamily::Exponential:
      return "exponential";
    case PatienceFamily::Uniform:
      return "uniform";
    case PatienceFamily::Deterministic:
      return "deterministic";
    case PatienceFamily::None:
      return "none";
  }
  return "none";
}

InterarrivalFamily interarrival_family_from_string(std::string_view s) {
  for (auto f : {InterarrivalFamily::Exponential, InterarrivalFamily::Deterministic,
                 InterarrivalFamily::Erlang, InterarrivalFamily::Hyperexponential}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown interarrival family '" + std::string(s) + "'");
}

PatienceFamily patience_family_from_string(std::string_view s) {
  for (auto f : {PatienceFamily::Exponential, PatienceFamily::Uniform,
                 PatienceFamily::Deterministic, PatienceFamily::None}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown patience family '" + std::string(s) + "'");
}

}  // namespace matchq
