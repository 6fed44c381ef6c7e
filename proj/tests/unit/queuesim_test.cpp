#include "matchq/queuesim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ctmc.hpp"
#include "matchq/hjb.hpp"

namespace matchq {
namespace {

// n = 4 makes 1/sqrt(n) = 1/2; rates are lambda0 n + beta sqrt(n).
QueueConfig deterministic_config(double seller_gap, double buyer_gap) {
  QueueConfig q;
  q.n = 4;
  q.lambda0 = 0.25;
  q.beta_s = (1.0 / seller_gap - 1.0) / 2.0;
  q.beta_b = (1.0 / buyer_gap - 1.0) / 2.0;
  q.interarrival_s = q.interarrival_b = InterarrivalSpec::deterministic();
  q.patience_s = q.patience_b = PatienceSpec::none();
  return q;
}

void expect_invariants(const QueueTrajectory& traj, const BufferPolicy& pol, long x0) {
  const QueueEvent* prev = nullptr;
  for (const QueueEvent& e : traj.events) {
    ASSERT_EQ(e.X, x0 + e.A_s - e.A_b - e.G_s + e.G_b - e.U_s + e.U_b)
        << "balance at t = " << e.t;
    if (pol.m_b) ASSERT_GE(e.X, *pol.m_b);
    if (pol.m_s) ASSERT_LE(e.X, *pol.m_s);
    if (prev) {
      ASSERT_GE(e.t, prev->t);
      ASSERT_GE(e.G_b, prev->G_b);
      ASSERT_GE(e.G_s, prev->G_s);
      ASSERT_GE(e.U_b, prev->U_b);
      ASSERT_GE(e.U_s, prev->U_s);
      // Exactly one counter moves per event.
      const long moved = (e.A_b - prev->A_b) + (e.A_s - prev->A_s) + (e.G_b - prev->G_b) + (e.G_s - prev->G_s);
      ASSERT_EQ(moved, 1);
    }
    if (e.type == EventType::Abandon) {
      ASSERT_TRUE(std::isfinite(e.since));
      ASSERT_GT(e.since, 0.0);  // initial customers never abandon
      ASSERT_LE(e.since, e.t);
    }
    prev = &e;
  }
}

TEST(SimulateQueue, NoArrivalsKeepsInitialSellers) {
  QueueConfig q = deterministic_config(100.0, 100.0);
  q.x0_hat = 1.5;  // three sellers
  q.patience_s = PatienceSpec::exponential(50.0);
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{}, 10.0, 1);
  ASSERT_EQ(traj.events.size(), 1u);
  EXPECT_EQ(traj.state_at(9.9).X, 3);
  EXPECT_EQ(traj.events[0].G_s + traj.events[0].U_s, 0);
}

TEST(SimulateQueue, SellerThenBuyerHandTrace) {
  const QueueConfig q = deterministic_config(1.5, 2.0);  // sellers at 1.5, 3.0; buyers at 2.0
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{-5, 5}, 2.9, 1);
  ASSERT_EQ(traj.events.size(), 3u);
  EXPECT_EQ(traj.events[1].type, EventType::Arrival);
  EXPECT_EQ(traj.events[1].cls, CustomerClass::Seller);
  EXPECT_DOUBLE_EQ(traj.events[1].t, 1.5);
  EXPECT_EQ(traj.events[1].X, 1);
  EXPECT_EQ(traj.events[2].type, EventType::Match);
  EXPECT_EQ(traj.events[2].cls, CustomerClass::Buyer);
  EXPECT_DOUBLE_EQ(traj.events[2].t, 2.0);
  EXPECT_EQ(traj.events[2].X, 0);
  for (const auto& e : traj.events) EXPECT_EQ(e.G_b + e.G_s + e.U_b + e.U_s, 0);
}

TEST(SimulateQueue, TiesResolveSellerFirst) {
  const QueueConfig q = deterministic_config(1.0, 1.0);
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{}, 1.5, 1);
  ASSERT_EQ(traj.events.size(), 3u);
  EXPECT_EQ(traj.events[1].cls, CustomerClass::Seller);
  EXPECT_EQ(traj.events[2].cls, CustomerClass::Buyer);
  EXPECT_EQ(traj.events[2].type, EventType::Match);
}

TEST(SimulateQueue, BlockingAtTheSellerBuffer) {
  const QueueConfig q = deterministic_config(1.0, 100.0);
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{-1, 2}, 5.5, 1);
  const QueueEvent& last = traj.events.back();
  EXPECT_EQ(last.X, 2);
  EXPECT_EQ(last.U_s, 3);
  EXPECT_EQ(traj.events[3].type, EventType::Block);
}

TEST(SimulateQueue, InitialRemovalIsChargedAtTimeZero) {
  QueueConfig q = deterministic_config(100.0, 100.0);
  q.x0_hat = -3.0;  // six buyers
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{-2, 2}, 1.0, 1);
  EXPECT_EQ(traj.events[0].X, -2);
  EXPECT_EQ(traj.events[0].U_b, 4);
  const double expected = q.p_b * 4 / 2.0 + q.c_b * (2.0 / 2.0) * (1 - std::exp(-q.alpha)) / q.alpha;
  EXPECT_NEAR(qcp_path_cost(q, traj), expected, 1e-12);
}

TEST(SimulateQueue, AbandonmentCancelledByMatch) {
  // Seller at 1 with patience 0.5 would abandon at 1.5, but a buyer at 1.25 matches it.
  QueueConfig q = deterministic_config(1.0, 1.25);
  q.patience_s = PatienceSpec::deterministic(0.5);
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{}, 1.9, 1);
  for (const auto& e : traj.events) EXPECT_NE(e.type, EventType::Abandon);
  EXPECT_EQ(traj.events.back().X, 0);
}

TEST(SimulateQueue, InvariantsOnRandomRuns) {
  const ModelParams p = ModelParams::reference_example();
  QueueConfig q = QueueConfig::markovian_bridge(p, 100, -1.0, 1.0, 1.0);
  q.x0_hat = 0.7;
  for (const BufferPolicy& pol : {BufferPolicy{-5, 1}, BufferPolicy{}, BufferPolicy{-2, std::nullopt}}) {
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      const QueueTrajectory traj = simulate_queue(q, pol, 6.0, 17, rep);
      long x0 = q.initial_imbalance();
      expect_invariants(traj, pol, x0);
    }
  }
}

TEST(SimulateQueue, DeterministicEventLog) {
  const QueueConfig q = QueueConfig::markovian_bridge(ModelParams::reference_example(), 25, -1.0, 1.0, 1.0);
  std::ostringstream a, b, c;
  write_event_log(a, simulate_queue(q, BufferPolicy{-3, 1}, 5.0, 9, 2));
  write_event_log(b, simulate_queue(q, BufferPolicy{-3, 1}, 5.0, 9, 2));
  write_event_log(c, simulate_queue(q, BufferPolicy{-3, 1}, 5.0, 10, 2));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "t,event_type,class,X,G_b,G_s,U_b,U_s");
}

TEST(SimulateQueue, TransientLawMatchesBirthDeathChain) {
  QueueConfig q;
  q.n = 1;
  q.lambda0 = 1.0;
  q.beta_b = 0.0;
  q.beta_s = 0.5;
  q.patience_b = PatienceSpec::exponential(2.0);
  q.patience_s = PatienceSpec::exponential(4.0);
  const BufferPolicy pol{-3, 3};
  const oracle::BirthDeath bd{-3, 3, q.lambda_b(), q.lambda_s(), 2.0, 4.0};
  const Eigen::VectorXd law = bd.law_at(0, 5.0);
  const int reps = 100000;
  std::vector<double> freq(7, 0.0);
  for (int r = 0; r < reps; ++r) {
    const QueueTrajectory traj = simulate_queue(q, pol, 5.0, 31, static_cast<std::uint64_t>(r));
    freq[static_cast<std::size_t>(traj.events.back().X + 3)] += 1.0 / reps;
  }
  double tv = 0.0;
  for (int i = 0; i < 7; ++i) tv += 0.5 * std::abs(freq[static_cast<std::size_t>(i)] - law(i));
  EXPECT_LE(tv, 0.01);
}

TEST(QcpPathCost, ZeroArrivalsCostNothing) {
  const QueueConfig q = deterministic_config(100.0, 100.0);
  EXPECT_EQ(qcp_path_cost(q, simulate_queue(q, BufferPolicy{}, 10.0, 1)), 0.0);
}

TEST(QcpPathCost, SingleAbandoningSeller) {
  QueueConfig q = deterministic_config(1.0, 100.0);
  q.patience_s = PatienceSpec::deterministic(0.5);
  q.c_s = 3.0;
  q.r_s = 2.0;
  q.alpha = 0.7;
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{}, 1.9, 1);
  ASSERT_EQ(traj.events.back().type, EventType::Abandon);
  const double a = q.alpha;
  const double expected = q.c_s * 0.5 * (std::exp(-a) - std::exp(-1.5 * a)) / a + q.r_s * 0.5 * std::exp(-1.5 * a);
  EXPECT_NEAR(qcp_path_cost(q, traj), expected, 1e-12);
}

TEST(EstimateQcpCost, MatchesChainIntegratedCost) {
  const ModelParams p = ModelParams::reference_example();
  const int n = 100;
  const QueueConfig q = QueueConfig::markovian_bridge(p, n, -1.0, 1.0, 1.0);
  const PolicySolution sol = solve(p);
  const BufferPolicy pol = BufferPolicy::from_scaled(sol.a_star, sol.b_star, n);
  ASSERT_EQ(*pol.m_b, -5);
  ASSERT_EQ(*pol.m_s, 1);
  const double T = 12.0;
  const oracle::BirthDeath bd{*pol.m_b, *pol.m_s, q.lambda_b(), q.lambda_s(), p.delta_b(), p.delta_s()};
  const oracle::QueueCostRates rates{q.sqrt_n(), q.c_s, q.c_b, q.r_s, q.r_b, q.p_s, q.p_b};
  const double exact = bd.discounted(0, q.alpha, T, rates(bd));
  const CostEstimate e = estimate_qcp_cost(q, pol, 2000, 3, T);
  EXPECT_NEAR(e.mean, exact, 3 * e.std_error);
  EXPECT_GE(e.tail_bound, 0.0);
}

TEST(EstimateQcpCost, TailBoundCoversLongerHorizon) {
  const QueueConfig q = QueueConfig::markovian_bridge(ModelParams::reference_example(), 25, -1.0, 1.0, 1.0);
  const BufferPolicy pol{-3, 1};
  const CostEstimate short_h = estimate_qcp_cost(q, pol, 200, 4, 2.0);
  const CostEstimate long_h = estimate_qcp_cost(q, pol, 200, 4, 14.0);
  EXPECT_LE(long_h.mean - short_h.mean, short_h.tail_bound);
}

TEST(VirtualWait, DefinitionChecks) {
  // Sellers at 1, 2 (none abandon); buyers every 1.5 time units starting at 1.5.
  QueueConfig q = deterministic_config(1.0, 1.5);
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{}, 2.2, 1);
  // At t = 0.5 nobody waits: an admitted seller is matched by the first buyer at 1.5.
  EXPECT_DOUBLE_EQ(virtual_waiting_time(traj, CustomerClass::Seller, 0.5), 1.0);
  // At t = 1.2 one seller waits: the newcomer needs the second buyer (t = 3.0), beyond the log.
  EXPECT_TRUE(std::isnan(virtual_waiting_time(traj, CustomerClass::Seller, 1.2)));
  // Buyers find sellers waiting at t = 1.2: no wait.
  EXPECT_EQ(virtual_waiting_time(traj, CustomerClass::Buyer, 1.2), 0.0);
}

TEST(ScaleTrajectory, DividesBySqrtN) {
  QueueConfig q = deterministic_config(100.0, 100.0);
  q.n = 10000;
  q.lambda0 = 1e-6;  // rates 0.01: the first arrival comes at t = 100
  q.beta_s = q.beta_b = 0.0;
  q.x0_hat = 2.0;
  const QueueTrajectory traj = simulate_queue(q, BufferPolicy{}, 1.0, 1);
  ASSERT_EQ(traj.events[0].X, 200);
  const ScaledTrajectory s = scale_trajectory(q, traj, 0.25);
  EXPECT_EQ(s.X.size(), 5u);
  for (std::size_t k = 0; k < s.X.size(); ++k) EXPECT_DOUBLE_EQ(s.X[k], 2.0);
}

TEST(ScaleTrajectory, LittlesLawTightensWithScale) {
  const ModelParams p = ModelParams::reference_example();
  const auto residual = [&](int n) {
    const QueueConfig q = QueueConfig::markovian_bridge(p, n, -1.0, 1.0, 1.0);
    const BufferPolicy pol = BufferPolicy::from_scaled(-0.5248, 0.1104, n);
    double total = 0.0;
    int count = 0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      const QueueTrajectory traj = simulate_queue(q, pol, 6.0, 12, rep);
      const ScaledTrajectory s = scale_trajectory(q, traj, 0.05);
      for (std::size_t k = 0; k < s.X.size(); ++k) {
        const double t = s.X.time(k);
        if (t < 1.0 || std::isnan(s.V_s[k])) continue;
        total += std::abs(std::max(s.X[k], 0.0) - q.lambda0 * s.V_s[k]);
        ++count;
      }
    }
    return total / count;
  };
  EXPECT_LT(residual(400), residual(100));
}

TEST(QueueConfig, BridgeReproducesLimitParameters) {
  const ModelParams p = ModelParams::reference_example();
  const QueueConfig q = QueueConfig::markovian_bridge(p, 100, -1.0, 1.0, 1.0);
  const ModelParams lim = q.limit_params();
  EXPECT_DOUBLE_EQ(lim.sigma2(), p.sigma2());
  EXPECT_DOUBLE_EQ(lim.beta(), p.beta());
  EXPECT_DOUBLE_EQ(lim.theta_b(), p.theta_b());
  EXPECT_DOUBLE_EQ(lim.theta_s(), p.theta_s());
  EXPECT_DOUBLE_EQ(lim.delta_b(), p.delta_b());
  EXPECT_DOUBLE_EQ(lim.delta_s(), p.delta_s());
  EXPECT_EQ(q.c_b, 2.0);
  EXPECT_EQ(q.c_s, 1.0);
  EXPECT_EQ(q.lambda0, 0.5);
}

TEST(QueueConfig, Validation) {
  QueueConfig q;
  q.beta_b = -2.0;  // n = 1, lambda0 = 1: non-positive buyer rate
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = QueueConfig{};
  q.n = 0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  EXPECT_THROW((BufferPolicy{0, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((BufferPolicy{-1, 0}.validate()), std::invalid_argument);
}

TEST(BufferPolicy, FromScaledRoundsAndKeepsAtLeastOne) {
  const BufferPolicy b = BufferPolicy::from_scaled(-0.5248, 0.1104, 25);
  EXPECT_EQ(*b.m_b, -3);
  EXPECT_EQ(*b.m_s, 1);
  const BufferPolicy c = BufferPolicy::from_scaled(-0.01, std::nullopt, 4);
  EXPECT_EQ(*c.m_b, -1);
  EXPECT_FALSE(c.m_s);
}

}  // namespace
}  // namespace matchq
