#include "matchq_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "matchq/report.hpp"

namespace matchq::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  const fs::path path = fs::path(cfg.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output_dir: cannot write '" + path.string() + "'");
  return out;
}

void add_estimate(KeyValueReport& r, const CostEstimate& e) {
  r.add("mean", e.mean);
  r.add("stderr", e.std_error);
  r.add("reps", static_cast<long long>(e.reps));
  r.add("T_max", e.T_max);
  r.add("tail_bound", e.tail_bound);
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const ModelParams& p = *cfg.model;
  const PolicySolution sol = solve(p, cfg.solver_for(p));
  const KeyValueReport report = policy_report(sol, p);
  auto policy = open_output(cfg, "policy.txt");
  report.write(policy);
  auto w = open_output(cfg, "W.csv");
  write_W_csv(w, sol.W_curve);
  auto q = open_output(cfg, "Q.csv");
  write_Q_csv(q, sol.Q_curve);
  report.write(log);
  return kOk;
}

int cmd_simulate_dcp(const RunConfig& cfg, std::ostream& log) {
  const ModelParams& p = *cfg.model;
  const PolicySolution sol = solve(p, cfg.solver_for(p));
  McConfig mc = cfg.mc->mc;
  mc.seed = *cfg.seed;
  const double x0 = cfg.mc->x0;
  const CostEstimate est = estimate_dcp_cost(p, sol, x0, mc);

  KeyValueReport r;
  r.add("regime", std::string(to_string(sol.regime)));
  r.add("x0", x0);
  r.add("seed", static_cast<long long>(mc.seed));
  r.add("dt", mc.dt);
  add_estimate(r, est);
  r.add("Q_x0", sol.Q(x0));
  auto out = open_output(cfg, "cost.txt");
  r.write(out);
  r.write(log);

  if (cfg.mc->write_path) {
    const SdePath path = simulate_reflected(p, sol, x0, mc.T_max, mc.dt, mc.seed, 0);
    auto csv = open_output(cfg, "path.csv");
    write_paths_csv(csv, {"X", "L_a", "L_b"}, {&path.X, &path.L_a, &path.L_b});
  }
  return kOk;
}

int cmd_simulate_queue(const RunConfig& cfg, std::ostream& log) {
  const QueueBlock& qb = *cfg.queue;
  const QueueConfig& q = qb.queue;
  BufferPolicy buffers;
  std::string policy_name = "explicit";
  if (qb.buffers) {
    buffers = *qb.buffers;
  } else if (qb.unbounded) {
    policy_name = "none";
  } else {
    const ModelParams p = q.limit_params();
    const PolicySolution sol = solve(p, cfg.solver_for(p));
    const BarrierPolicy barriers = BarrierPolicy::from_solution(sol);
    buffers = BufferPolicy::from_scaled(barriers.lower, barriers.upper, q.n);
    policy_name = "optimal";
  }
  const std::uint64_t seed = *cfg.seed;
  const CostEstimate est = estimate_qcp_cost(q, buffers, qb.reps, seed, qb.T);

  KeyValueReport r;
  r.add("policy", policy_name);
  if (buffers.m_b) r.add("m_b", static_cast<long long>(*buffers.m_b));
  if (buffers.m_s) r.add("m_s", static_cast<long long>(*buffers.m_s));
  r.add("n", static_cast<long long>(q.n));
  r.add("seed", static_cast<long long>(seed));
  add_estimate(r, est);
  auto out = open_output(cfg, "cost.txt");
  r.write(out);
  r.write(log);

  const QueueTrajectory traj = simulate_queue(q, buffers, qb.T, seed, 0);
  auto events = open_output(cfg, "events.csv");
  write_event_log(events, traj);
  const ScaledTrajectory s = scale_trajectory(q, traj, qb.scaled_dt);
  auto scaled = open_output(cfg, "scaled.csv");
  write_paths_csv(scaled, {"Xhat", "Ghat_b", "Ghat_s", "Uhat_b", "Uhat_s", "Vhat_b", "Vhat_s"},
                  {&s.X, &s.G_b, &s.G_s, &s.U_b, &s.U_s, &s.V_b, &s.V_s});
  return kOk;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& log) {
  const QueueConfig& bridge = cfg.queue->queue;
  const ModelParams p = cfg.model ? *cfg.model : bridge.limit_params();
  ConvergenceConfig cc = cfg.convergence.value_or(ConvergenceConfig{});
  cc.seed = *cfg.seed;
  const ConvergenceReport report = convergence_study(p, bridge, cc);

  auto csv = open_output(cfg, "convergence.csv");
  write_convergence_csv(csv, report);
  auto diag = open_output(cfg, "diagnostics.csv");
  diag << "n,abandonment_s,abandonment_b,little_s,little_b,fluid_blocking\n";
  for (const auto& d : report.diagnostics) {
    diag << d.n << ',' << format_number(d.mean.abandonment_s) << ','
         << format_number(d.mean.abandonment_b) << ',' << format_number(d.mean.little_s) << ','
         << format_number(d.mean.little_b) << ',' << format_number(d.mean.fluid_blocking) << '\n';
  }
  log << "V0=" << format_number(report.V0) << '\n';
  write_convergence_csv(log, report);
  return kOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& log) {
  const ModelParams base = ModelParams::reference_example();
  KeyValueReport r;
  int failures = 0;
  std::size_t row_no = 0;
  for (const TableRow& row : reference_table()) {
    ++row_no;
    const ModelParams p = base.with_p_s(row.p_s);
    const PolicySolution sol = solve(p, cfg.solver_for(p));
    const double a = sol.a_star.value_or(NAN), b = sol.b_star.value_or(NAN), c = sol.c.value_or(NAN);
    const bool ok_a = std::abs(a - row.a_star) <= kReferenceTolerance;
    const bool ok_b = std::abs(b - row.b_star) <= kReferenceTolerance;
    const bool ok_c = std::abs(c - kReferenceC) <= kReferenceTolerance;
    const bool ok = ok_a && ok_b && ok_c;
    failures += ok ? 0 : 1;
    const std::string key = "row" + std::to_string(row_no);
    r.add(key + ".p_s", row.p_s);
    r.add(key + ".c", c);
    r.add(key + ".a_star", a);
    r.add(key + ".a_star_expected", row.a_star);
    r.add(key + ".b_star", b);
    r.add(key + ".b_star_expected", row.b_star);
    r.add(key + ".status", std::string(ok ? "pass" : "FAIL"));
    log << "p_s=" << format_number(row.p_s) << " c=" << format_number(c) << (ok_c ? " ok" : " FAIL")
        << " a*=" << format_number(a) << " (expected " << format_number(row.a_star) << ")"
        << (ok_a ? " ok" : " FAIL") << " b*=" << format_number(b) << " (expected "
        << format_number(row.b_star) << ")" << (ok_b ? " ok" : " FAIL") << '\n';
  }
  const std::size_t total = reference_table().size();
  r.add("passed", static_cast<long long>(total - static_cast<std::size_t>(failures)));
  r.add("total", static_cast<long long>(total));
  auto out = open_output(cfg, "check.txt");
  r.write(out);
  log << (total - static_cast<std::size_t>(failures)) << '/' << total << " rows pass\n";
  return failures == 0 ? kOk : kCheckFailed;
}

class NullBuffer : public std::streambuf {
 protected:
  int overflow(int c) override { return c; }
};

}  // namespace

const std::vector<TableRow>& reference_table() {
  static const std::vector<TableRow> rows{{0.1, -0.5248, 0.1104},
                                          {0.3, -0.6568, 0.1333},
                                          {0.5, -0.7707, 0.1935},
                                          {0.7, -0.8671, 0.2876},
                                          {0.9, -0.9345, 0.5501}};
  return rows;
}

int execute(const RunConfig& cfg, std::ostream& log, bool quiet) {
  NullBuffer null_buf;
  std::ostream null_stream(&null_buf);
  std::ostream& out = quiet ? null_stream : log;
  require_blocks(cfg);
  switch (cfg.command) {
    case Command::Solve:
      return cmd_solve(cfg, out);
    case Command::SimulateDcp:
      return cmd_simulate_dcp(cfg, out);
    case Command::SimulateQueue:
      return cmd_simulate_queue(cfg, out);
    case Command::Convergence:
      return cmd_convergence(cfg, out);
    case Command::Check:
      return cmd_check(cfg, out);
  }
  return kInvalidConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-ended matching queue: free-boundary solver and simulators", "matchq"};
  std::string config_path, out_dir, command;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("command", command,
                 "solve | simulate-dcp | simulate-queue | convergence | check (overrides the config)");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_flag("--quiet", quiet, "Suppress the summary on standard output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (command.empty()) {
      throw ConfigError("--config: required unless a command is given");
    }
    if (!command.empty()) cfg.command = command_from_string(command);
    if (seed) cfg.seed = seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return execute(cfg, out, quiet);
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace matchq::cli
