#pragma once

#include <cstddef>
#include <vector>

namespace matchq {

/// Right-continuous piecewise-constant function sampled on a uniform grid
/// t0, t0 + dt, ..., t0 + (size-1) dt.
class Path {
 public:
  Path(double t0, double dt, std::vector<double> values);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  double t_end() const { return t0_ + dt_ * static_cast<double>(size() - 1); }
  double time(std::size_t k) const { return t0_ + dt_ * static_cast<double>(k); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  /// Index of the grid cell containing t (right-continuous convention).
  std::size_t index_at(double t) const;
  double at(double t) const { return values_[index_at(t)]; }

  bool same_grid(const Path& other) const;

  static Path constant(double t0, double dt, std::size_t n, double value);

 private:
  double t0_;
  double dt_;
  std::vector<double> values_;
};

/// Pointwise sup-norm distance; grids must match.
double sup_distance(const Path& a, const Path& b);

}  // namespace matchq
