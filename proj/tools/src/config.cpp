#include "matchq_cli/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace matchq::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json* member(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const std::string& section, const std::string& key) {
  const json* v = member(obj, key);
  if (!v) fail(section + "." + key, "missing");
  if (!v->is_number()) fail(section + "." + key, "expected a number");
  return v->get<double>();
}

double number_or(const json& obj, const std::string& section, const std::string& key, double def) {
  return member(obj, key) ? number(obj, section, key) : def;
}

template <typename Int>
Int integer_or(const json& obj, const std::string& section, const std::string& key, Int def) {
  const json* v = member(obj, key);
  if (!v) return def;
  if (!v->is_number_integer()) fail(section + "." + key, "expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (!v->is_number_unsigned()) fail(section + "." + key, "must be non-negative");
  }
  return v->get<Int>();
}

bool bool_or(const json& obj, const std::string& section, const std::string& key, bool def) {
  const json* v = member(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) fail(section + "." + key, "expected true or false");
  return v->get<bool>();
}

const json& section(const json& root, const std::string& name) {
  const json& s = root.at(name);
  if (!s.is_object()) fail(name, "expected an object");
  return s;
}

// Re-raises validation errors from the core library as configuration errors.
template <typename F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ModelParams parse_model(const json& m) {
  const std::string s = "model";
  const double sigma2 = number(m, s, "sigma2"), beta = number(m, s, "beta"),
               alpha = number(m, s, "alpha"), delta_b = number(m, s, "delta_b"),
               delta_s = number(m, s, "delta_s"), theta_b = number(m, s, "theta_b"),
               theta_s = number(m, s, "theta_s"), p_b = number(m, s, "p_b"), p_s = number(m, s, "p_s");
  return validated(
      [&] { return ModelParams(sigma2, beta, alpha, delta_b, delta_s, theta_b, theta_s, p_b, p_s); });
}

InterarrivalSpec parse_interarrival(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const json* fam = member(j, "family");
  if (!fam || !fam->is_string()) fail(path + ".family", "expected a family name");
  InterarrivalSpec spec;
  spec.family = validated([&] { return interarrival_family_from_string(fam->get<std::string>()); });
  spec.erlang_k = integer_or<int>(j, path, "k", 2);
  spec.scv = number_or(j, path, "scv", spec.family == InterarrivalFamily::Erlang
                                           ? 1.0 / spec.erlang_k
                                           : spec.squared_cv());
  if (spec.family == InterarrivalFamily::Erlang) spec.scv = 1.0 / spec.erlang_k;
  return spec;
}

PatienceSpec parse_patience(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const json* fam = member(j, "family");
  if (!fam || !fam->is_string()) fail(path + ".family", "expected a family name");
  PatienceSpec spec;
  spec.family = validated([&] { return patience_family_from_string(fam->get<std::string>()); });
  if (spec.family == PatienceFamily::Exponential || spec.family == PatienceFamily::Uniform) {
    spec.delta = number(j, path, "delta");
  }
  if (spec.family == PatienceFamily::Deterministic) spec.duration = number(j, path, "duration");
  return spec;
}

QueueBlock parse_queue(const json& q) {
  const std::string s = "queue";
  QueueBlock b;
  QueueConfig& c = b.queue;
  c.n = integer_or<int>(q, s, "n", 1);
  b.has_n = member(q, "n") != nullptr;
  c.lambda0 = number(q, s, "lambda0");
  c.beta_b = number_or(q, s, "beta_b", 0.0);
  c.beta_s = number_or(q, s, "beta_s", 0.0);
  const auto sub = [&](const char* key) -> const json& {
    const json* v = member(q, key);
    if (!v) fail(s + "." + key, "missing");
    return *v;
  };
  c.interarrival_b = parse_interarrival(sub("interarrival_b"), s + ".interarrival_b");
  c.interarrival_s = parse_interarrival(sub("interarrival_s"), s + ".interarrival_s");
  c.patience_b = parse_patience(sub("patience_b"), s + ".patience_b");
  c.patience_s = parse_patience(sub("patience_s"), s + ".patience_s");
  c.c_s = number(q, s, "c_s");
  c.c_b = number(q, s, "c_b");
  c.r_s = number(q, s, "r_s");
  c.r_b = number(q, s, "r_b");
  c.p_s = number(q, s, "p_s");
  c.p_b = number(q, s, "p_b");
  c.alpha = number(q, s, "alpha");
  c.x0_hat = number_or(q, s, "x0_hat", 0.0);
  // A convergence template carries no n; it is validated per scale later.
  if (member(q, "n")) {
    validated([&] {
      c.validate();
      return 0;
    });
  }

  b.T = number_or(q, s, "T", 12.0 / c.alpha);
  b.reps = integer_or<std::size_t>(q, s, "reps", 200);
  b.scaled_dt = number_or(q, s, "scaled_dt", 0.01);
  if (!(b.T > 0.0)) fail("queue.T", "must be > 0");
  if (b.reps < 2) fail("queue.reps", "must be >= 2");
  if (!(b.scaled_dt > 0.0)) fail("queue.scaled_dt", "must be > 0");

  if (const json* pol = member(q, "policy")) {
    if (pol->is_string()) {
      const std::string name = pol->get<std::string>();
      if (name == "none") {
        b.unbounded = true;
      } else if (name != "optimal") {
        fail("queue.policy", "expected \"optimal\", \"none\" or an object with m_b/m_s");
      }
    } else if (pol->is_object()) {
      BufferPolicy bp;
      if (member(*pol, "m_b")) bp.m_b = integer_or<long>(*pol, "queue.policy", "m_b", -1);
      if (member(*pol, "m_s")) bp.m_s = integer_or<long>(*pol, "queue.policy", "m_s", 1);
      validated([&] {
        bp.validate();
        return 0;
      });
      b.buffers = bp;
    } else {
      fail("queue.policy", "expected a string or an object");
    }
  }
  return b;
}

SolverOverrides parse_solver(const json& j) {
  const std::string s = "solver";
  SolverOverrides o;
  const auto opt = [&](const char* key, std::optional<double>& dst) {
    if (member(j, key)) dst = number(j, s, key);
  };
  opt("x_max", o.x_max);
  opt("x_min", o.x_min);
  opt("ode_tol", o.ode_tol);
  opt("W_big", o.W_big);
  opt("bisect_tol", o.bisect_tol);
  opt("grid_step", o.grid_step);
  if (member(j, "max_iter")) o.max_iter = integer_or<int>(j, s, "max_iter", 100);
  return o;
}

}  // namespace

Command command_from_string(const std::string& s) {
  if (s == "solve") return Command::Solve;
  if (s == "simulate-dcp") return Command::SimulateDcp;
  if (s == "simulate-queue") return Command::SimulateQueue;
  if (s == "convergence") return Command::Convergence;
  if (s == "check") return Command::Check;
  fail("command", "unknown command '" + s + "'");
}

SolverConfig RunConfig::solver_for(const ModelParams& p) const {
  SolverConfig base = SolverConfig::defaults_for(p);
  base.x_max = solver.x_max.value_or(base.x_max);
  base.x_min = solver.x_min.value_or(base.x_min);
  base.ode_tol = solver.ode_tol.value_or(base.ode_tol);
  base.W_big = solver.W_big.value_or(base.W_big);
  base.bisect_tol = solver.bisect_tol.value_or(base.bisect_tol);
  base.grid_step = solver.grid_step.value_or(base.grid_step);
  base.max_iter = solver.max_iter.value_or(base.max_iter);
  validated([&] {
    base.validate(p);
    return 0;
  });
  return base;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) fail("config", "top level must be an object");

  RunConfig cfg;
  if (const json* c = member(root, "command")) {
    if (!c->is_string()) fail("command", "expected a string");
    cfg.command = command_from_string(c->get<std::string>());
  }
  if (const json* o = member(root, "output_dir")) {
    if (!o->is_string()) fail("output_dir", "expected a string");
    cfg.output_dir = o->get<std::string>();
  }
  if (member(root, "model")) cfg.model = parse_model(section(root, "model"));
  if (member(root, "solver")) cfg.solver = parse_solver(section(root, "solver"));
  if (member(root, "mc")) {
    const json& m = section(root, "mc");
    McBlock b;
    b.mc.reps = integer_or<std::size_t>(m, "mc", "reps", b.mc.reps);
    b.mc.dt = number_or(m, "mc", "dt", b.mc.dt);
    b.mc.T_max = number_or(m, "mc", "T_max", cfg.model ? 12.0 / cfg.model->alpha() : b.mc.T_max);
    b.mc.threads = integer_or<unsigned>(m, "mc", "threads", 0u);
    if (member(m, "seed")) cfg.seed = integer_or<std::uint64_t>(m, "mc", "seed", 0);
    b.x0 = number_or(m, "mc", "x0", 0.0);
    b.write_path = bool_or(m, "mc", "write_path", false);
    validated([&] {
      b.mc.validate();
      return 0;
    });
    cfg.mc = b;
  }
  if (member(root, "queue")) {
    const json& q = section(root, "queue");
    cfg.queue = parse_queue(q);
    if (member(q, "seed") && !cfg.seed) cfg.seed = integer_or<std::uint64_t>(q, "queue", "seed", 0);
  }
  if (member(root, "convergence")) {
    const json& c = section(root, "convergence");
    ConvergenceConfig cc;
    if (const json* ns = member(c, "ns")) {
      if (!ns->is_array()) fail("convergence.ns", "expected an array of integers");
      cc.ns.clear();
      for (const auto& v : *ns) {
        if (!v.is_number_integer()) fail("convergence.ns", "expected an array of integers");
        cc.ns.push_back(v.get<int>());
      }
    }
    cc.reps = integer_or<std::size_t>(c, "convergence", "reps", cc.reps);
    cc.T_max = number_or(c, "convergence", "T_max", cc.T_max);
    cc.perturbation = number_or(c, "convergence", "perturbation", cc.perturbation);
    cc.diagnostics_dt = number_or(c, "convergence", "diagnostics_dt", cc.diagnostics_dt);
    cc.threads = integer_or<unsigned>(c, "convergence", "threads", 0u);
    if (member(c, "seed") && !cfg.seed) {
      cfg.seed = integer_or<std::uint64_t>(c, "convergence", "seed", 0);
    }
    validated([&] {
      cc.validate();
      return 0;
    });
    cfg.convergence = cc;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("--config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void require_blocks(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Solve:
      if (!cfg.model) fail("model", "required by command 'solve'");
      break;
    case Command::SimulateDcp:
      if (!cfg.model) fail("model", "required by command 'simulate-dcp'");
      if (!cfg.mc) fail("mc", "required by command 'simulate-dcp'");
      if (!cfg.seed) fail("mc.seed", "required for stochastic commands (or pass --seed)");
      break;
    case Command::SimulateQueue:
      if (!cfg.queue) fail("queue", "required by command 'simulate-queue'");
      if (!cfg.queue->has_n) fail("queue.n", "required by command 'simulate-queue'");
      if (!cfg.seed) fail("queue.seed", "required for stochastic commands (or pass --seed)");
      break;
    case Command::Convergence:
      if (!cfg.queue) fail("queue", "required by command 'convergence'");
      if (!cfg.seed) fail("convergence.seed", "required for stochastic commands (or pass --seed)");
      break;
    case Command::Check:
      break;
  }
}

}  // namespace matchq::cli
