#include "matchq/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace matchq {
namespace {

TEST(FormatNumber, TwelveSignificantDigitsRoundTripToTenDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-0.5248), "-0.5248");
  EXPECT_EQ(format_number(4.0 / 3.0), "1.33333333333");
  for (double v : {1.0 / 7.0, -123.456789012345, 6.02214076e23, 1e-9 / 3.0}) {
    const double back = std::strtod(format_number(v).c_str(), nullptr);
    EXPECT_NEAR(back, v, 1e-10 * std::abs(v));
  }
}

TEST(KeyValueReport, LineOrientedKeyValue) {
  KeyValueReport r;
  r.add("regime", std::string("TwoSided"));
  r.add("x", 0.25);
  r.add("reps", 10LL);
  std::ostringstream os;
  r.write(os);
  EXPECT_EQ(os.str(), "regime=TwoSided\nx=0.25\nreps=10\n");
  EXPECT_EQ(r.entries().size(), 3u);
}

TEST(PolicyReport, TwoSidedFields) {
  const ModelParams p = ModelParams::reference_example();
  const KeyValueReport r = policy_report(solve(p), p);
  std::set<std::string> keys;
  for (const auto& [k, v] : r.entries()) keys.insert(k);
  for (const char* k : {"regime", "a_star", "b_star", "c", "T_s", "T_b", "Q0"}) EXPECT_TRUE(keys.count(k)) << k;
  EXPECT_FALSE(keys.count("k_s"));
  EXPECT_EQ(r.entries().front().second, "TwoSided");
}

TEST(PolicyReport, ZeroControlEmitsNoBarriers) {
  const ModelParams p = ModelParams::reference_example().with_p_b(10.0).with_p_s(10.0);
  const KeyValueReport r = policy_report(solve(p), p);
  for (const auto& [k, v] : r.entries()) {
    EXPECT_NE(k, "a_star");
    EXPECT_NE(k, "b_star");
    EXPECT_NE(k, "c");
  }
  EXPECT_EQ(r.entries().front().second, "ZeroControl");
}

TEST(Csv, CurvesAndPaths) {
  Curve c;
  c.push(-1.0, 0.5, 0.25);
  c.push(0.0, 1.0, 0.0);
  std::ostringstream w, q;
  write_W_csv(w, c);
  write_Q_csv(q, c);
  EXPECT_EQ(w.str(), "x,W,Wp\n-1,0.5,0.25\n0,1,0\n");
  EXPECT_EQ(q.str(), "x,Q\n-1,0.5\n0,1\n");

  const Path a(0.0, 0.5, {1.0, 2.0, 3.0});
  const Path b(0.0, 0.5, {0.0, 0.0, 1.0});
  std::ostringstream os;
  write_paths_csv(os, {"X", "L"}, {&a, &b});
  EXPECT_EQ(os.str(), "t,X,L\n0,1,0\n0.5,2,0\n1,3,1\n");
  const Path other(0.0, 0.25, {1.0, 2.0, 3.0});
  std::ostringstream sink;
  EXPECT_THROW(write_paths_csv(sink, {"X", "Y"}, {&a, &other}), std::invalid_argument);
  EXPECT_THROW(write_paths_csv(sink, {"X"}, {&a, &b}), std::invalid_argument);
}

}  // namespace
}  // namespace matchq
