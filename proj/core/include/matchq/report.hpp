#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matchq/hjb.hpp"
#include "matchq/path.hpp"

namespace matchq {

/// Locale-independent "%.12g" rendering: 12 significant digits, '.' separator.
std::string format_number(double v);

/// Line-oriented `key=value` report, written in insertion order.
class KeyValueReport {
 public:
  void add(std::string key, double value);
  void add(std::string key, long long value);
  void add(std::string key, std::string value);
  void write(std::ostream& os) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Writes `x,W,Wp` rows of a curve.
void write_W_csv(std::ostream& os, const Curve& W);
/// Writes `x,Q` rows of a value-function curve.
void write_Q_csv(std::ostream& os, const Curve& Q);
/// Writes a single path as `t,value`.
void write_path_csv(std::ostream& os, const Path& path);
/// Writes aligned paths as `t,<name1>,<name2>,...`.
void write_paths_csv(std::ostream& os, const std::vector<std::string>& names,
                     const std::vector<const Path*>& paths);

/// Report of a solver run: regime, barriers, separatrix, smooth-fit constants
/// and thresholds. Absent quantities are omitted.
KeyValueReport policy_report(const PolicySolution& sol, const ModelParams& p);

}  // namespace matchq
