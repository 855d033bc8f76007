#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "driftbandit/harness.hpp"

namespace driftbandit {

// A config problem located by 1-based line (0 when not tied to a line) and
// the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Flat `key = value` text; `#` starts a comment. Each `policy.name` line
// opens a new policy block that the following `policy.*` keys belong to.
//
//   env.model = exponential_clock      (alias: env)
//   env.arms = 2
//   env.means | env.theta | env.r_low | env.r_high | env.sigma2 = v1, v2, ...
//   horizon, replications, seed, threads, steps_every, export_trajectories
//   output_dir, common_random_numbers (true|false)
//   epsilon_grid = 0.1, 0.2, ...
//   sweep.<eta|lambda_fixed|W|C> = v1, v2, ...
//   policies = ts, aff_ts             (shorthand for parameterless blocks)
//   policy.name = aff_ots
//   policy.label = my_label
//   policy.<param> = value
//
// Per-arm lists shorter than env.arms are applied cyclically. Policies
// sharing a label get "_2", "_3", ... appended in order of appearance.
ExperimentConfig parse_config(std::string_view text);

// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

struct PresetOptions {
  std::size_t arms = 50;  // large-arms only
  int case_number = 1;    // large-arms only
};

const std::vector<std::string>& preset_names();

// Throws ConfigError for an unknown name or bad options.
ExperimentConfig preset(std::string_view name, const PresetOptions& options = {});

}  // namespace driftbandit
