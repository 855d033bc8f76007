#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "driftbandit/environment.hpp"
#include "driftbandit/policy.hpp"
#include "driftbandit/stats.hpp"

namespace driftbandit {

// One parameter varied over a list of values for every policy that takes it.
// Values are parameter strings; for `eta`, "B/s2" selects the
// inverse-variance schedule with base step B.
struct SweepSpec {
  std::string parameter;  // eta | lambda_fixed | W | C
  std::vector<std::string> values;

  bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
  EnvSpec env;
  std::vector<PolicySpec> policies;
  std::int64_t horizon = 10000;
  std::int64_t replications = 100;
  std::uint64_t seed = 1;
  std::vector<double> epsilon_grid;  // non-empty: eps_greedy is reported at its best grid value
  std::vector<SweepSpec> sweeps;
  bool common_random_numbers = false;
  std::size_t threads = 0;           // 0: DRIFTBANDIT_THREADS or hardware concurrency
  std::string output_dir = "out";
  std::int64_t steps_every = 100;    // 0 disables steps.csv
  std::int64_t export_trajectories = 0;  // first N replications get a mu-matrix CSV

  std::size_t num_arms() const { return env.num_arms; }
  bool operator==(const ExperimentConfig&) const = default;
};

// Throws std::invalid_argument (PolicyConfigError for policy fields).
void validate(const ExperimentConfig& config);

struct StepRecord {
  std::int64_t rep = 0;
  std::int64_t t = 0;
  std::size_t arm = 0;
  int reward = 0;
  double mu_chosen = 0.0;
  double mu_opt = 0.0;
  double regret_inst = 0.0;
  double regret_cum = 0.0;
  bool correct = false;

  bool operator==(const StepRecord&) const = default;
};

struct PolicyRun {
  std::string label;
  std::vector<StepRecord> steps;
  double total_regret() const { return steps.empty() ? 0.0 : steps.back().regret_cum; }
};

struct ReplicationResult {
  std::int64_t rep = 0;
  std::uint64_t seed = 0;
  std::uint64_t trajectory_hash = 0;
  std::int64_t switch_points = 0;
  std::vector<PolicyRun> runs;  // config policy order
};

struct SummaryStats {
  std::string policy;
  std::vector<double> totals;  // per replication, replication order
  FiveNumber total;
  std::vector<double> mean_cum_regret;  // index t-1
  std::vector<double> pct_correct;      // index t-1, in [0,100]
};

using ReplicationSink = std::function<void(const ReplicationResult&)>;

// The trajectory every policy in replication `rep` is run against.
TrajectoryLog replication_trajectory(const ExperimentConfig& config, std::int64_t rep);

// Builds one trajectory and runs every configured policy against it. A
// step is correct when the chosen arm attains the row maximum.
ReplicationResult run_replication(const ExperimentConfig& config, std::int64_t rep);

// Same, against a caller-supplied trajectory.
ReplicationResult run_replication(const ExperimentConfig& config, std::int64_t rep,
                                  const TrajectoryLog& trajectory);

// Runs all replications (in parallel batches) and reduces them in
// replication order. `sink`, when given, sees every replication in order.
std::vector<SummaryStats> run_experiment(const ExperimentConfig& config,
                                         const ReplicationSink& sink = {});

// Runs eps_greedy alone for each grid value on shared seeds; returns the
// value with the lowest mean total regret (first on ties) and its summary.
std::pair<double, SummaryStats> epsilon_grid_best(const ExperimentConfig& config,
                                                  const std::vector<double>& grid);

struct SweepPoint {
  std::string value;
  std::vector<SummaryStats> summaries;  // labelled "<label>[<param>=<value>]"
};

// One experiment per value over the policies accepting `parameter`.
std::vector<SweepPoint> sensitivity_sweep(const ExperimentConfig& config,
                                          const SweepSpec& sweep,
                                          const ReplicationSink& sink = {});

// Everything a config asks for: its plain policies, each sweep, and the
// eps_greedy grid. Policies consumed by a sweep or the grid are not rerun.
struct StudyResult {
  std::vector<SummaryStats> summaries;
  std::optional<double> best_epsilon;
};

StudyResult run_study(const ExperimentConfig& config, const ReplicationSink& sink = {});

// Thread count after applying DRIFTBANDIT_THREADS.
std::size_t resolve_threads(const ExperimentConfig& config);

}  // namespace driftbandit
