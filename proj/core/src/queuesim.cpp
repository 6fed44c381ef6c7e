#include "matchq/queuesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace matchq {
namespace {

constexpr std::uint32_t kSellerArrivals = 2;
constexpr std::uint32_t kBuyerArrivals = 3;
constexpr std::uint32_t kSellerPatience = 4;
constexpr std::uint32_t kBuyerPatience = 5;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Customer {
  double arrival;
  bool alive;
};

struct PendingAbandon {
  double t;
  std::uint64_t seq;
  CustomerClass cls;
  std::size_t id;
  bool operator>(const PendingAbandon& o) const { return t != o.t ? t > o.t : seq > o.seq; }
};

// One side of the market: FIFO queue with lazily removed entries.
struct Side {
  std::vector<Customer> customers;
  std::deque<std::size_t> fifo;
  long live = 0;

  std::size_t admit(double t) {
    customers.push_back({t, true});
    fifo.push_back(customers.size() - 1);
    ++live;
    return customers.size() - 1;
  }
  void match_head() {
    while (!customers[fifo.front()].alive) fifo.pop_front();
    customers[fifo.front()].alive = false;
    fifo.pop_front();
    --live;
  }
};

bool is_arrival_of(const QueueEvent& e, CustomerClass cls) {
  return e.cls == cls &&
         (e.type == EventType::Arrival || e.type == EventType::Match || e.type == EventType::Block);
}

double holding_rate(const QueueConfig& cfg, double x_hat) {
  return x_hat >= 0.0 ? cfg.c_s * x_hat : -cfg.c_b * x_hat;
}

}  // namespace

double QueueConfig::sqrt_n() const { return std::sqrt(static_cast<double>(n)); }
double QueueConfig::lambda_b() const { return lambda0 * n + beta_b * sqrt_n(); }
double QueueConfig::lambda_s() const { return lambda0 * n + beta_s * sqrt_n(); }
long QueueConfig::initial_imbalance() const { return std::lround(x0_hat * sqrt_n()); }

void QueueConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("queue." + msg); };
  if (n < 1) fail("n must be a positive integer");
  if (!(lambda0 > 0.0)) fail("lambda0 must be > 0");
  if (!std::isfinite(beta_b) || !std::isfinite(beta_s)) fail("beta_b/beta_s must be finite");
  if (!(lambda_b() > 0.0)) fail("beta_b gives a non-positive buyer arrival rate");
  if (!(lambda_s() > 0.0)) fail("beta_s gives a non-positive seller arrival rate");
  interarrival_b.validate("queue.interarrival_b");
  interarrival_s.validate("queue.interarrival_s");
  patience_b.validate("queue.patience_b");
  patience_s.validate("queue.patience_s");
  for (auto [name, v] : {std::pair{"c_s", c_s}, {"c_b", c_b}, {"r_s", r_s}, {"r_b", r_b}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and >= 0");
  }
  for (auto [name, v] : {std::pair{"p_s", p_s}, {"p_b", p_b}, {"alpha", alpha}}) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and > 0");
  }
  if (!std::isfinite(x0_hat)) fail("x0_hat must be finite");
}

ModelParams QueueConfig::limit_params() const {
  const double d_b = patience_b.hazard_at_zero();
  const double d_s = patience_s.hazard_at_zero();
  const double sigma2 = (interarrival_b.squared_cv() + interarrival_s.squared_cv()) * lambda0;
  return ModelParams(sigma2, beta_s - beta_b, alpha, d_b, d_s, c_b + r_b * d_b, c_s + r_s * d_s,
                     p_b, p_s);
}

QueueConfig QueueConfig::markovian_bridge(const ModelParams& p, int n, double beta_b, double r_b,
                                          double r_s) {
  QueueConfig q;
  q.n = n;
  q.lambda0 = p.sigma2() / 2.0;
  q.beta_b = beta_b;
  q.beta_s = beta_b + p.beta();
  q.interarrival_b = InterarrivalSpec::exponential();
  q.interarrival_s = InterarrivalSpec::exponential();
  q.patience_b = PatienceSpec::exponential(p.delta_b());
  q.patience_s = PatienceSpec::exponential(p.delta_s());
  q.r_b = r_b;
  q.r_s = r_s;
  q.c_b = p.theta_b() - r_b * p.delta_b();
  q.c_s = p.theta_s() - r_s * p.delta_s();
  q.p_b = p.p_b();
  q.p_s = p.p_s();
  q.alpha = p.alpha();
  if (q.c_b < 0.0 || q.c_s < 0.0) {
    throw std::invalid_argument("markovian_bridge: abandonment cost exceeds theta / delta");
  }
  return q;
}

void BufferPolicy::validate() const {
  if (m_b && *m_b > -1) throw std::invalid_argument("policy.m_b must be <= -1");
  if (m_s && *m_s < 1) throw std::invalid_argument("policy.m_s must be >= 1");
}

BufferPolicy BufferPolicy::from_scaled(std::optional<double> a, std::optional<double> b, int n) {
  const double rn = std::sqrt(static_cast<double>(n));
  BufferPolicy out;
  if (a) out.m_b = -std::max(1L, std::lround(std::abs(*a) * rn));
  if (b) out.m_s = std::max(1L, std::lround(*b * rn));
  return out;
}

std::string_view to_string(EventType e) {
  switch (e) {
    case EventType::Initial:
      return "initial";
    case EventType::Arrival:
      return "arrival";
    case EventType::Match:
      return "match";
    case EventType::Block:
      return "block";
    case EventType::Abandon:
      return "abandon";
  }
  return "initial";
}

std::string_view to_string(CustomerClass c) { return c == CustomerClass::Buyer ? "buyer" : "seller"; }

std::size_t QueueTrajectory::event_index_at(double t) const {
  const auto it = std::upper_bound(events.begin(), events.end(), t,
                                   [](double v, const QueueEvent& e) { return v < e.t; });
  return it == events.begin() ? 0 : static_cast<std::size_t>(it - events.begin()) - 1;
}

QueueTrajectory simulate_queue(const QueueConfig& cfg, const BufferPolicy& policy, double T,
                               std::uint64_t seed, std::uint64_t rep) {
  cfg.validate();
  policy.validate();
  if (!(T >= 0.0)) throw std::invalid_argument("simulate_queue: T must be >= 0");

  CounterRng arr_s(seed, kSellerArrivals, rep), arr_b(seed, kBuyerArrivals, rep);
  CounterRng pat_s(seed, kSellerPatience, rep), pat_b(seed, kBuyerPatience, rep);
  const double lam_s = cfg.lambda_s(), lam_b = cfg.lambda_b();

  QueueTrajectory traj;
  traj.T = T;
  QueueEvent st{0.0, EventType::Initial, CustomerClass::Seller, cfg.initial_imbalance(),
                0, 0, 0, 0, 0, 0, kNaN};
  if (policy.m_s && st.X > *policy.m_s) {
    st.U_s = st.X - *policy.m_s;
    st.X = *policy.m_s;
  } else if (policy.m_b && st.X < *policy.m_b) {
    st.U_b = *policy.m_b - st.X;
    st.X = *policy.m_b;
    st.cls = CustomerClass::Buyer;
  }

  Side sellers, buyers;
  for (long i = 0; i < st.X; ++i) sellers.admit(0.0);
  for (long i = 0; i < -st.X; ++i) buyers.admit(0.0);
  traj.events.push_back(st);

  std::priority_queue<PendingAbandon, std::vector<PendingAbandon>, std::greater<>> pending;
  std::uint64_t seq = 0;
  std::uint64_t n_arr_s = 0, n_arr_b = 0;
  double next_s = cfg.interarrival_s.sample(lam_s, arr_s);
  double next_b = cfg.interarrival_b.sample(lam_b, arr_b);

  const auto arrive = [&](CustomerClass cls, double t) {
    const bool seller = cls == CustomerClass::Seller;
    Side& own = seller ? sellers : buyers;
    Side& other = seller ? buyers : sellers;
    const std::uint64_t index = seller ? n_arr_s++ : n_arr_b++;
    st.t = t;
    st.cls = cls;
    st.since = kNaN;
    (seller ? st.A_s : st.A_b) += 1;
    if (other.live > 0) {
      other.match_head();
      st.type = EventType::Match;
      st.X += seller ? 1 : -1;
    } else if (seller ? (policy.m_s && st.X + 1 > *policy.m_s)
                      : (policy.m_b && st.X - 1 < *policy.m_b)) {
      st.type = EventType::Block;
      (seller ? st.U_s : st.U_b) += 1;
    } else {
      st.type = EventType::Arrival;
      st.X += seller ? 1 : -1;
      const std::size_t id = own.admit(t);
      CounterRng& pat = seller ? pat_s : pat_b;
      pat.seek(2 * index);
      const double patience = (seller ? cfg.patience_s : cfg.patience_b).sample(pat);
      if (std::isfinite(patience)) pending.push({t + patience, seq++, cls, id});
    }
    traj.events.push_back(st);
  };

  for (;;) {
    while (!pending.empty()) {
      const PendingAbandon& top = pending.top();
      const Side& side = top.cls == CustomerClass::Seller ? sellers : buyers;
      if (side.customers[top.id].alive) break;
      pending.pop();
    }
    const double t_ab = pending.empty() ? std::numeric_limits<double>::infinity() : pending.top().t;
    const double t = std::min({next_s, next_b, t_ab});
    if (t > T) break;
    if (next_s <= next_b && next_s <= t_ab) {
      arrive(CustomerClass::Seller, next_s);
      next_s += cfg.interarrival_s.sample(lam_s, arr_s);
    } else if (next_b <= t_ab) {
      arrive(CustomerClass::Buyer, next_b);
      next_b += cfg.interarrival_b.sample(lam_b, arr_b);
    } else {
      const PendingAbandon ab = pending.top();
      pending.pop();
      const bool seller = ab.cls == CustomerClass::Seller;
      Side& side = seller ? sellers : buyers;
      side.customers[ab.id].alive = false;
      --side.live;
      st.t = ab.t;
      st.type = EventType::Abandon;
      st.cls = ab.cls;
      st.since = side.customers[ab.id].arrival;
      st.X += seller ? -1 : 1;
      (seller ? st.G_s : st.G_b) += 1;
      traj.events.push_back(st);
    }
  }
  return traj;
}

double virtual_waiting_time(const QueueTrajectory& traj, CustomerClass cls, double t) {
  const std::size_t i = traj.event_index_at(t);
  const bool seller = cls == CustomerClass::Seller;
  const long own = seller ? traj.events[i].X : -traj.events[i].X;
  if (own < 0) return 0.0;  // the opposite class is waiting
  const CustomerClass other = seller ? CustomerClass::Buyer : CustomerClass::Seller;
  long ahead = own;
  for (std::size_t j = i + 1; j < traj.events.size(); ++j) {
    const QueueEvent& e = traj.events[j];
    if (is_arrival_of(e, other)) {
      if (ahead == 0) return e.t - t;
      --ahead;
    } else if (e.type == EventType::Abandon && e.cls == cls && e.since <= t && ahead > 0) {
      --ahead;
    }
  }
  return kNaN;
}

ScaledTrajectory scale_trajectory(const QueueConfig& cfg, const QueueTrajectory& traj, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("scale_trajectory: dt must be > 0");
  const std::size_t n = static_cast<std::size_t>(std::floor(traj.T / dt + 1e-9)) + 1;
  const double rn = cfg.sqrt_n();
  std::vector<double> X(n), Gb(n), Gs(n), Ub(n), Us(n), Vb(n), Vs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const QueueEvent& e = traj.state_at(t);
    X[k] = static_cast<double>(e.X) / rn;
    Gb[k] = static_cast<double>(e.G_b) / rn;
    Gs[k] = static_cast<double>(e.G_s) / rn;
    Ub[k] = static_cast<double>(e.U_b) / rn;
    Us[k] = static_cast<double>(e.U_s) / rn;
    Vb[k] = rn * virtual_waiting_time(traj, CustomerClass::Buyer, t);
    Vs[k] = rn * virtual_waiting_time(traj, CustomerClass::Seller, t);
  }
  auto path = [dt](std::vector<double>& v) { return Path(0.0, dt, std::move(v)); };
  return {path(X), path(Gb), path(Gs), path(Ub), path(Us), path(Vb), path(Vs)};
}

double qcp_path_cost(const QueueConfig& cfg, const QueueTrajectory& traj) {
  const double rn = cfg.sqrt_n();
  const double a = cfg.alpha;
  const auto& ev = traj.events;
  double holding = 0.0, jumps = 0.0;
  const QueueEvent& first = ev.front();
  jumps += (cfg.p_s * static_cast<double>(first.U_s) + cfg.p_b * static_cast<double>(first.U_b)) / rn;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double t0 = ev[i].t;
    const double t1 = i + 1 < ev.size() ? ev[i + 1].t : traj.T;
    const double disc = std::exp(-a * t0);
    // int_{t0}^{t1} e^{-a t} dt = e^{-a t0} (1 - e^{-a (t1 - t0)}) / a
    holding += holding_rate(cfg, static_cast<double>(ev[i].X) / rn) * disc *
               (-std::expm1(-a * (t1 - t0))) / a;
    if (i == 0) continue;
    const bool seller = ev[i].cls == CustomerClass::Seller;
    if (ev[i].type == EventType::Abandon) jumps += (seller ? cfg.r_s : cfg.r_b) * disc / rn;
    if (ev[i].type == EventType::Block) jumps += (seller ? cfg.p_s : cfg.p_b) * disc / rn;
  }
  return holding + jumps;
}

double qcp_tail_bound(const QueueConfig& cfg, const BufferPolicy& policy, double T_max) {
  const double a = cfg.alpha;
  const double e = std::exp(-a * T_max);
  const double rn = cfg.sqrt_n();
  const double rate = cfg.lambda_b() + cfg.lambda_s();
  const double c_max = std::max(cfg.c_s, cfg.c_b);
  // Each arrival causes at most one block or one later abandonment.
  const double jump_rate = rate * std::max({cfg.r_s, cfg.r_b, cfg.p_s, cfg.p_b}) / rn;
  // |X(t)| <= |X(0)| + (arrivals by t), whose mean grows like rate * t.
  const double x0 = std::abs(static_cast<double>(cfg.initial_imbalance()));
  double holding = c_max / rn * e * (x0 / a + rate * (T_max / a + 1.0 / (a * a)));
  if (policy.m_b && policy.m_s) {
    const double bound = std::max(-*policy.m_b, *policy.m_s) / rn;
    holding = std::min(holding, e * c_max * bound / a);
  }
  return holding + e * jump_rate / a;
}

CostEstimate estimate_qcp_cost(const QueueConfig& cfg, const BufferPolicy& policy,
                               std::size_t reps, std::uint64_t seed, double T_max,
                               unsigned threads) {
  cfg.validate();
  policy.validate();
  if (reps < 2) throw std::invalid_argument("reps must be >= 2");
  const std::vector<double> costs = parallel_map(
      reps, [&](std::size_t r) { return qcp_path_cost(cfg, simulate_queue(cfg, policy, T_max, seed, r)); },
      threads);
  return summarize(costs, T_max, qcp_tail_bound(cfg, policy, T_max));
}

void write_event_log(std::ostream& os, const QueueTrajectory& traj) {
  char buf[64];
  os << "t,event_type,class,X,G_b,G_s,U_b,U_s\n";
  for (const QueueEvent& e : traj.events) {
    std::snprintf(buf, sizeof buf, "%.12g", e.t);
    os << buf << ',' << to_string(e.type) << ',' << to_string(e.cls) << ',' << e.X << ','
       << e.G_b << ',' << e.G_s << ',' << e.U_b << ',' << e.U_s << '\n';
  }
}

}  // namespace matchq
