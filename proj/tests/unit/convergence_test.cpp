#include "matchq/convergence.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

namespace matchq {
namespace {

ConvergenceConfig small_study() {
  ConvergenceConfig c;
  c.ns = {16, 64};
  c.reps = 20;
  c.T_max = 4.0;
  c.seed = 3;
  c.diagnostics_dt = 0.1;
  return c;
}

TEST(ConvergenceStudy, RowsPoliciesAndGaps) {
  const ModelParams p = ModelParams::reference_example();
  const QueueConfig bridge = QueueConfig::markovian_bridge(p, 1, -1.0, 1.0, 1.0);
  const ConvergenceReport r = convergence_study(p, bridge, small_study());
  EXPECT_NEAR(r.V0, solve(p).Q(0.0), 1e-12);
  ASSERT_EQ(r.rows.size(), 2u * 6u);
  std::set<std::string> names;
  for (const auto& row : r.rows) {
    names.insert(row.policy);
    EXPECT_DOUBLE_EQ(row.gap, row.cost.mean - r.V0);
    EXPECT_EQ(row.cost.reps, 20u);
  }
  EXPECT_EQ(names, (std::set<std::string>{"threshold", "a-0.1,b-0.1", "a-0.1,b+0.1", "a+0.1,b-0.1",
                                          "a+0.1,b+0.1", "zero"}));
  const ConvergenceRow& thr = r.row(64, "threshold");
  EXPECT_EQ(*thr.buffers.m_b, -4);  // round(0.5248 * 8)
  EXPECT_EQ(*thr.buffers.m_s, 1);
  EXPECT_FALSE(r.row(64, "zero").buffers.m_b);
  EXPECT_THROW(r.row(32, "threshold"), std::out_of_range);
  ASSERT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.diagnostics[1].n, 64);
}

TEST(ConvergenceStudy, ThresholdRowMatchesDirectEstimate) {
  const ModelParams p = ModelParams::reference_example();
  const QueueConfig bridge = QueueConfig::markovian_bridge(p, 1, -1.0, 1.0, 1.0);
  const ConvergenceConfig c = small_study();
  const ConvergenceReport r = convergence_study(p, bridge, c);
  QueueConfig q = bridge;
  q.n = 64;
  const ConvergenceRow& row = r.row(64, "threshold");
  const CostEstimate direct = estimate_qcp_cost(q, row.buffers, c.reps, c.seed, c.T_max);
  EXPECT_EQ(direct.mean, row.cost.mean);
  EXPECT_EQ(direct.std_error, row.cost.std_error);
}

TEST(ConvergenceStudy, RejectsMismatchedBridge) {
  const ModelParams p = ModelParams::reference_example();
  const QueueConfig bridge = QueueConfig::markovian_bridge(p.with_p_s(0.3), 1, -1.0, 1.0, 1.0);
  EXPECT_THROW(convergence_study(p, bridge, small_study()), std::invalid_argument);
  ConvergenceConfig bad = small_study();
  bad.ns = {};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(ConvergenceStudy, OneSidedRegimeNamesOnlyTheActiveBarrier) {
  const ModelParams p = ModelParams::reference_example().with_p_s(2.0);
  const QueueConfig bridge = QueueConfig::markovian_bridge(p, 1, -1.0, 1.0, 1.0);
  ConvergenceConfig c = small_study();
  c.ns = {16};
  const ConvergenceReport r = convergence_study(p, bridge, c);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_NO_THROW(r.row(16, "a-0.1"));
  EXPECT_NO_THROW(r.row(16, "a+0.1"));
  EXPECT_FALSE(r.row(16, "threshold").buffers.m_s);
}

TEST(ConvergenceCsv, HeaderAndRowCount) {
  const ModelParams p = ModelParams::reference_example();
  ConvergenceConfig c = small_study();
  c.ns = {16};
  const ConvergenceReport r =
      convergence_study(p, QueueConfig::markovian_bridge(p, 1, -1.0, 1.0, 1.0), c);
  std::ostringstream os;
  write_convergence_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,policy,m_b,m_s,mean,stderr,reps,gap,tail_bound");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 6);
  EXPECT_NE(os.str().find("16,\"zero\",,,"), std::string::npos);
}

}  // namespace
}  // namespace matchq
