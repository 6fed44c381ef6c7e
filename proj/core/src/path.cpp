#include "matchq/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace matchq {

Path::Path(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
  if (!(dt > 0.0)) throw std::invalid_argument("Path: dt must be > 0");
  if (values_.empty()) throw std::invalid_argument("Path: values must be non-empty");
}

std::size_t Path::index_at(double t) const {
  if (t < t0_ - 1e-12 * dt_ || t > t_end() + 1e-12 * dt_) {
    throw std::out_of_range("Path: time outside the path domain");
  }
  const double u = (t - t0_) / dt_;
  // Snap to a node when t is a grid time up to rounding.
  const double r = std::round(u);
  const double k = std::abs(u - r) < 1e-9 ? r : std::floor(u);
  return std::min(static_cast<std::size_t>(std::max(k, 0.0)), size() - 1);
}

bool Path::same_grid(const Path& other) const {
  return size() == other.size() &&
         std::abs(t0_ - other.t0_) <= 1e-12 * std::max(1.0, std::abs(t0_)) &&
         std::abs(dt_ - other.dt_) <= 1e-12 * dt_;
}

Path Path::constant(double t0, double dt, std::size_t n, double value) {
  return Path(t0, dt, std::vector<double>(n, value));
}

double sup_distance(const Path& a, const Path& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("sup_distance: grids differ");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace matchq
