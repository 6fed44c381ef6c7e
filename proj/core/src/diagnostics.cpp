#include "matchq/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace matchq {

DiagnosticsReport diagnostics(const QueueConfig& cfg, const QueueTrajectory& traj, double dt) {
  DiagnosticsReport out;
  const double rn = cfg.sqrt_n();
  const double d_s = cfg.patience_s.hazard_at_zero();
  const double d_b = cfg.patience_b.hazard_at_zero();

  double int_pos = 0.0, int_neg = 0.0;  // int_0^t X^+ and X^- (scaled)
  const auto& ev = traj.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double t_next = i + 1 < ev.size() ? ev[i + 1].t : traj.T;
    const double x = static_cast<double>(ev[i].X) / rn;
    const double g_s = static_cast<double>(ev[i].G_s) / rn;
    const double g_b = static_cast<double>(ev[i].G_b) / rn;
    // Residuals right after event i and just before event i + 1.
    for (int side = 0; side < 2; ++side) {
      out.abandonment_s = std::max(out.abandonment_s, std::abs(g_s - d_s * int_pos));
      out.abandonment_b = std::max(out.abandonment_b, std::abs(g_b - d_b * int_neg));
      if (side == 0) {
        int_pos += std::max(x, 0.0) * (t_next - ev[i].t);
        int_neg += std::max(-x, 0.0) * (t_next - ev[i].t);
      }
    }
  }

  const std::size_t n = static_cast<std::size_t>(std::floor(traj.T / dt + 1e-9)) + 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double x = static_cast<double>(traj.state_at(t).X) / rn;
    const double v_s = rn * virtual_waiting_time(traj, CustomerClass::Seller, t);
    const double v_b = rn * virtual_waiting_time(traj, CustomerClass::Buyer, t);
    if (std::isfinite(v_s)) {
      out.little_s = std::max(out.little_s, std::abs(std::max(x, 0.0) - cfg.lambda0 * v_s));
    }
    if (std::isfinite(v_b)) {
      out.little_b = std::max(out.little_b, std::abs(std::max(-x, 0.0) - cfg.lambda0 * v_b));
    }
  }

  const QueueEvent& last = ev.back();
  out.fluid_blocking = static_cast<double>(last.U_b + last.U_s) / static_cast<double>(cfg.n);
  return out;
}

}  // namespace matchq
