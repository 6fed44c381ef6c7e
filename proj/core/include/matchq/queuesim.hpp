#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "matchq/distributions.hpp"
#include "matchq/params.hpp"
#include "matchq/path.hpp"
#include "matchq/stats.hpp"

namespace matchq {

/// The n-th double-ended queue: renewal arrivals of buyers and sellers with
/// rates lambda0 n + beta sqrt(n), first-come-first-match, patience-driven
/// abandonment, and holding / abandonment / blocking costs.
struct QueueConfig {
  int n = 1;
  double lambda0 = 1.0;
  double beta_b = 0.0;
  double beta_s = 0.0;
  InterarrivalSpec interarrival_b;
  InterarrivalSpec interarrival_s;
  PatienceSpec patience_b;
  PatienceSpec patience_s;
  double c_s = 1.0, c_b = 1.0;  // holding cost rates
  double r_s = 0.0, r_b = 0.0;  // abandonment penalties
  double p_s = 1.0, p_b = 1.0;  // blocking penalties
  double alpha = 1.0;
  double x0_hat = 0.0;  // scaled initial imbalance (sellers minus buyers)

  double sqrt_n() const;
  double lambda_b() const;
  double lambda_s() const;
  /// X(0-) = round(x0_hat sqrt(n)); these customers never abandon.
  long initial_imbalance() const;

  /// Throws std::invalid_argument naming the offending `queue.*` field.
  void validate() const;

  /// Limiting diffusion parameters: sigma^2 = (scv_b + scv_s) lambda0,
  /// beta = beta_s - beta_b, delta = patience hazard at 0, theta = c + r delta.
  ModelParams limit_params() const;

  /// Poisson arrivals and exponential patience whose limit is `p`, with the
  /// holding rates c = theta - r delta implied by the given abandonment costs.
  static QueueConfig markovian_bridge(const ModelParams& p, int n, double beta_b,
                                      double r_b, double r_s);
};

/// Queue capacities (admission control). Absent means unbounded.
struct BufferPolicy {
  std::optional<long> m_b;  // <= -1: buyers are blocked when X would go below it
  std::optional<long> m_s;  // >= 1: sellers are blocked when X would exceed it

  void validate() const;
  /// Lattice barriers m_b = -max(1, round(|a| sqrt(n))), m_s = max(1, round(b sqrt(n))).
  static BufferPolicy from_scaled(std::optional<double> a, std::optional<double> b, int n);
};

enum class EventType { Initial, Arrival, Match, Block, Abandon };
enum class CustomerClass { Buyer, Seller };

std::string_view to_string(EventType e);
std::string_view to_string(CustomerClass c);

/// State right after an event. `since` is the arrival time of the customer
/// that abandons (abandonments only).
struct QueueEvent {
  double t;
  EventType type;
  CustomerClass cls;
  long X;
  long A_b, A_s;
  long G_b, G_s;
  long U_b, U_s;
  double since;
};

struct QueueTrajectory {
  double T = 0.0;
  std::vector<QueueEvent> events;  // first entry is the state at time 0

  /// Index of the last event at or before t.
  std::size_t event_index_at(double t) const;
  const QueueEvent& state_at(double t) const { return events[event_index_at(t)]; }
};

/// Event-driven simulation on [0, T]. Ties are ordered seller arrival, buyer
/// arrival, abandonment, and FIFO within a class. Interarrival and patience
/// draws come from separate counter-based streams keyed by (seed, rep), with
/// the patience of the j-th arrival of a class depending only on j, so
/// different policies see common random numbers.
QueueTrajectory simulate_queue(const QueueConfig& cfg, const BufferPolicy& policy, double T,
                               std::uint64_t seed, std::uint64_t rep = 0);

/// Diffusion-scaled processes on a uniform grid. V_b and V_s are the scaled
/// virtual waiting times sqrt(n) V(t) of an infinitely patient customer
/// arriving at t; NaN where the wait is not resolved before the horizon.
struct ScaledTrajectory {
  Path X, G_b, G_s, U_b, U_s, V_b, V_s;
};

ScaledTrajectory scale_trajectory(const QueueConfig& cfg, const QueueTrajectory& traj, double dt);

/// Unscaled virtual waiting time of an infinitely patient customer of class
/// `cls` arriving at t, or NaN when unresolved by the horizon.
double virtual_waiting_time(const QueueTrajectory& traj, CustomerClass cls, double t);

/// Discounted scaled cost of one trajectory over [0, traj.T]: exact integral of
/// e^{-alpha t} C~(X^) plus discounted abandonment and blocking charges.
double qcp_path_cost(const QueueConfig& cfg, const QueueTrajectory& traj);

/// Bound on the expected discounted cost accrued after T_max.
double qcp_tail_bound(const QueueConfig& cfg, const BufferPolicy& policy, double T_max);

CostEstimate estimate_qcp_cost(const QueueConfig& cfg, const BufferPolicy& policy,
                               std::size_t reps, std::uint64_t seed, double T_max,
                               unsigned threads = 0);

/// Writes `t,event_type,class,X,G_b,G_s,U_b,U_s`.
void write_event_log(std::ostream& os, const QueueTrajectory& traj);

}  // namespace matchq
