#include "matchq/report.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace matchq {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void KeyValueReport::add(std::string key, double value) {
  entries_.emplace_back(std::move(key), format_number(value));
}

void KeyValueReport::add(std::string key, long long value) {
  entries_.emplace_back(std::move(key), std::to_string(value));
}

void KeyValueReport::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueReport::write(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

void write_W_csv(std::ostream& os, const Curve& W) {
  os << "x,W,Wp\n";
  for (std::size_t i = 0; i < W.size(); ++i) {
    os << format_number(W.grid[i]) << ',' << format_number(W.W[i]) << ',' << format_number(W.Wp[i])
       << '\n';
  }
}

void write_Q_csv(std::ostream& os, const Curve& Q) {
  os << "x,Q\n";
  for (std::size_t i = 0; i < Q.size(); ++i) {
    os << format_number(Q.grid[i]) << ',' << format_number(Q.W[i]) << '\n';
  }
}

void write_path_csv(std::ostream& os, const Path& path) {
  write_paths_csv(os, {"value"}, {&path});
}

void write_paths_csv(std::ostream& os, const std::vector<std::string>& names,
                     const std::vector<const Path*>& paths) {
  if (names.size() != paths.size() || paths.empty()) {
    throw std::invalid_argument("write_paths_csv: need one name per path");
  }
  for (const Path* p : paths) {
    if (!p->same_grid(*paths.front())) throw std::invalid_argument("write_paths_csv: grids differ");
  }
  os << 't';
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  const Path& first = *paths.front();
  for (std::size_t k = 0; k < first.size(); ++k) {
    os << format_number(first.time(k));
    for (const Path* p : paths) os << ',' << format_number((*p)[k]);
    os << '\n';
  }
}

KeyValueReport policy_report(const PolicySolution& sol, const ModelParams& p) {
  KeyValueReport r;
  r.add("regime", std::string(to_string(sol.regime)));
  if (sol.a_star) r.add("a_star", *sol.a_star);
  if (sol.b_star) r.add("b_star", *sol.b_star);
  if (sol.c) r.add("c", *sol.c);
  if (sol.k_s) r.add("k_s", *sol.k_s);
  if (sol.k_b) r.add("k_b", *sol.k_b);
  const auto [T_s, T_b] = thresholds(p);
  r.add("T_s", T_s);
  r.add("T_b", T_b);
  r.add("Q0", sol.Q(0.0));
  return r;
}

}  // namespace matchq
