#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "matchq/convergence.hpp"
#include "matchq/diffusion.hpp"
#include "matchq/hjb.hpp"
#include "matchq/queuesim.hpp"

namespace matchq::cli {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Solve, SimulateDcp, SimulateQueue, Convergence, Check };

Command command_from_string(const std::string& s);

/// Monte Carlo block of the configuration.
struct McBlock {
  McConfig mc;
  double x0 = 0.0;
  bool write_path = false;  // also write one sample path to path.csv
};

/// Queue block: the pre-limit system plus run settings.
struct QueueBlock {
  QueueConfig queue;
  bool has_n = false;  // convergence templates leave n to the study
  std::optional<BufferPolicy> buffers;  // explicit capacities; empty means "optimal"
  bool unbounded = false;               // policy "none": no admission control
  double T = 12.0;
  std::size_t reps = 200;
  double scaled_dt = 0.01;
};

/// Solver fields set explicitly in the configuration; the rest follow
/// SolverConfig::defaults_for(model).
struct SolverOverrides {
  std::optional<double> x_max, x_min, ode_tol, W_big, bisect_tol, grid_step;
  std::optional<int> max_iter;
};

struct RunConfig {
  Command command = Command::Solve;
  std::optional<ModelParams> model;
  SolverOverrides solver;
  std::optional<McBlock> mc;
  std::optional<QueueBlock> queue;
  std::optional<ConvergenceConfig> convergence;
  std::optional<std::uint64_t> seed;
  std::string output_dir = ".";

  /// Solver settings for `p`: defaults for p with the configured overrides.
  SolverConfig solver_for(const ModelParams& p) const;
};

/// Parses a JSON document with sections `model`, `solver`, `mc`, `queue` and
/// `convergence`. Missing required blocks and malformed fields raise ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Checks that the blocks needed by `cfg.command` are present and that a seed
/// is available for stochastic commands.
void require_blocks(const RunConfig& cfg);

}  // namespace matchq::cli
