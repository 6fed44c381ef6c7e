#pragma once

// Truncated birth-death chain for the Markovian double-ended queue. States are
// the imbalance k in [m_b, m_s]; sellers arrive at rate lambda_s, buyers at
// lambda_b, and each waiting customer abandons at its class rate. Arrivals
// that would leave the buffer range are blocked.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <cstdlib>

namespace matchq::oracle {

struct BirthDeath {
  long m_b;
  long m_s;
  double lambda_b, lambda_s;
  double delta_b, delta_s;

  int size() const { return static_cast<int>(m_s - m_b + 1); }
  int index(long k) const { return static_cast<int>(k - m_b); }
  long state(int i) const { return m_b + i; }

  Eigen::MatrixXd generator() const {
    const int n = size();
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const long k = state(i);
      double up = k < m_s ? lambda_s : 0.0;
      double down = k > m_b ? lambda_b : 0.0;
      if (k > 0) down += static_cast<double>(k) * delta_s;   // a seller abandons
      if (k < 0) up += static_cast<double>(-k) * delta_b;    // a buyer abandons
      if (i + 1 < n) Q(i, i + 1) = up;
      if (i > 0) Q(i, i - 1) = down;
      Q(i, i) = -(Q.row(i).sum());
    }
    return Q;
  }

  /// Law of the state at time T starting from k0.
  Eigen::VectorXd law_at(long k0, double T) const {
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Zero(size());
    pi(index(k0)) = 1.0;
    const Eigen::MatrixXd P = (generator() * T).exp();
    return (pi * P).transpose();
  }

  /// E int_0^T e^{-alpha t} g(X_t) dt = pi0 (alpha I - Q)^{-1} (I - e^{(Q - alpha I) T}) g.
  double discounted(long k0, double alpha, double T, const Eigen::VectorXd& g) const {
    const int n = size();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd A = generator() - alpha * I;
    const Eigen::MatrixXd E = (A * T).exp();
    const Eigen::VectorXd v = (-A).partialPivLu().solve((I - E) * g);
    return v(index(k0));
  }
};

/// Running cost rate of the scaled queue cost in state k: holding, expected
/// abandonment penalties and expected blocking penalties per unit time.
struct QueueCostRates {
  double sqrt_n;
  double c_s, c_b, r_s, r_b, p_s, p_b;

  Eigen::VectorXd operator()(const BirthDeath& bd) const {
    Eigen::VectorXd g(bd.size());
    for (int i = 0; i < bd.size(); ++i) {
      const long k = bd.state(i);
      const double x = static_cast<double>(k) / sqrt_n;
      double rate = x > 0 ? c_s * x : -c_b * x;
      double jumps = 0.0;
      if (k > 0) jumps += r_s * bd.delta_s * static_cast<double>(k);
      if (k < 0) jumps += r_b * bd.delta_b * static_cast<double>(-k);
      if (k == bd.m_s) jumps += p_s * bd.lambda_s;
      if (k == bd.m_b) jumps += p_b * bd.lambda_b;
      g(i) = rate + jumps / sqrt_n;
    }
    return g;
  }
};

}  // namespace matchq::oracle
