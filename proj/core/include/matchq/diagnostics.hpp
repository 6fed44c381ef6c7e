#pragma once

#include "matchq/queuesim.hpp"

namespace matchq {

/// Fluid and diffusion-scale consistency residuals of one queue trajectory.
struct DiagnosticsReport {
  double abandonment_s = 0.0;  // sup_t |G^_s(t) - delta_s int_0^t X^+ ds|
  double abandonment_b = 0.0;  // sup_t |G^_b(t) - delta_b int_0^t X^- ds|
  double little_s = 0.0;       // sup_t |X^+(t) - lambda0 V^_s(t)|
  double little_b = 0.0;       // sup_t |X^-(t) - lambda0 V^_b(t)|
  double fluid_blocking = 0.0; // (U_b(T) + U_s(T)) / n
};

/// The abandonment residual is evaluated exactly at every event; the Little's
/// law residual on a grid of step `dt`, skipping times whose virtual wait is
/// not resolved before the horizon.
DiagnosticsReport diagnostics(const QueueConfig& cfg, const QueueTrajectory& traj, double dt = 0.01);

}  // namespace matchq
