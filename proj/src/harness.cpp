#include "driftbandit/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "driftbandit/format.hpp"

namespace driftbandit {

namespace {

bool is_sweep_parameter(const std::string& p) {
  return p == "eta" || p == "lambda_fixed" || p == "W" || p == "C";
}

bool accepts(const PolicySpec& spec, const std::string& key) {
  const auto kind = policy_kind(spec.name);
  if (!kind) return false;
  for (auto k : policy_param_keys(*kind)) {
    if (k == key) return true;
  }
  return false;
}

struct Accumulator {
  std::string label;
  std::vector<double> totals;
  std::vector<double> cum_sum;
  std::vector<std::int64_t> correct;
};

}  // namespace

void validate(const ExperimentConfig& config) {
  validate(config.env);
  if (config.horizon < 1) throw std::invalid_argument("horizon: must be at least 1");
  if (config.replications < 1) throw std::invalid_argument("replications: must be at least 1");
  if (config.steps_every < 0) throw std::invalid_argument("steps_every: must be non-negative");
  if (config.export_trajectories < 0 || config.export_trajectories > config.replications) {
    throw std::invalid_argument("export_trajectories: must lie in [0, replications]");
  }
  if (config.policies.empty()) throw std::invalid_argument("policies: at least one is required");

  std::set<std::string> labels;
  for (const auto& spec : config.policies) {
    const PolicyOptions options = resolve_options(spec);
    if (!labels.insert(spec.label).second) {
      throw PolicyConfigError("label", "duplicate policy label '" + spec.label + "'");
    }
    const auto rounds = burn_in_rounds(options);
    if (rounds * static_cast<std::int64_t>(config.num_arms()) > config.horizon) {
      throw PolicyConfigError(spec.label, "horizon shorter than the burn-in of " +
                                              std::to_string(rounds) + " rounds per arm");
    }
    if (options.kind == PolicyKind::kFixedArm && options.arm >= config.num_arms()) {
      throw PolicyConfigError("arm", "index " + std::to_string(options.arm + 1) +
                                         " exceeds the number of arms");
    }
  }
  for (double eps : config.epsilon_grid) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw std::invalid_argument("epsilon_grid: values must lie in [0,1]");
    }
  }
  for (const auto& sweep : config.sweeps) {
    if (!is_sweep_parameter(sweep.parameter)) {
      throw std::invalid_argument("sweep." + sweep.parameter + ": not a sweepable parameter");
    }
    if (sweep.values.empty()) {
      throw std::invalid_argument("sweep." + sweep.parameter + ": no values");
    }
  }
}

TrajectoryLog replication_trajectory(const ExperimentConfig& config, std::int64_t rep) {
  const auto rep_seed = replication_seed(config.seed, static_cast<std::uint64_t>(rep));
  Rng traj_rng(stream_seed(rep_seed, Stream::kTrajectory));
  return generate_trajectory(config.env, config.horizon, traj_rng);
}

ReplicationResult run_replication(const ExperimentConfig& config, std::int64_t rep) {
  return run_replication(config, rep, replication_trajectory(config, rep));
}

ReplicationResult run_replication(const ExperimentConfig& config, std::int64_t rep,
                                  const TrajectoryLog& trajectory) {
  if (trajectory.num_arms != config.num_arms() || trajectory.horizon != config.horizon) {
    throw std::invalid_argument("trajectory shape does not match the configuration");
  }
  const auto rep_seed = replication_seed(config.seed, static_cast<std::uint64_t>(rep));
  const std::size_t K = config.num_arms();
  const std::int64_t T = config.horizon;

  ReplicationResult result;
  result.rep = rep;
  result.seed = rep_seed;
  result.trajectory_hash = trajectory_hash(trajectory);
  result.switch_points = trajectory.switch_points;

  std::vector<double> common;
  if (config.common_random_numbers) {
    Rng crn(stream_seed(rep_seed, Stream::kCommonRandom));
    common.resize(static_cast<std::size_t>(T) * K);
    for (auto& u : common) u = uniform01(crn);
  }

  PolicyContext context;
  context.num_arms = K;
  context.horizon = T;
  context.switch_points = trajectory.switch_points;
  context.trajectory = &trajectory;

  result.runs.reserve(config.policies.size());
  for (const auto& spec : config.policies) {
    auto policy =
        make_policy(spec, context, Rng(stream_seed(rep_seed, Stream::kDecision, spec.slot)));
    Rng reward_rng(stream_seed(rep_seed, Stream::kReward, spec.slot));

    PolicyRun run;
    run.label = spec.label;
    run.steps.reserve(static_cast<std::size_t>(T));
    double cum = 0.0;
    for (std::int64_t t = 1; t <= T; ++t) {
      const std::size_t arm = policy->choose(t);
      const double mu = trajectory.mean(t, arm);
      const double best = trajectory.best_mean(t);
      int reward;
      if (config.common_random_numbers) {
        reward = common[static_cast<std::size_t>(t - 1) * K + arm] < mu ? 1 : 0;
      } else {
        reward = sample_reward(mu, reward_rng);
      }
      policy->feed(arm, reward, t);

      StepRecord s;
      s.rep = rep;
      s.t = t;
      s.arm = arm;
      s.reward = reward;
      s.mu_chosen = mu;
      s.mu_opt = best;
      s.regret_inst = best - mu;
      cum += s.regret_inst;
      s.regret_cum = cum;
      s.correct = mu == best;
      run.steps.push_back(s);
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

std::size_t resolve_threads(const ExperimentConfig& config) {
  std::size_t n = config.threads;
  if (n == 0) n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DRIFTBANDIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, n);
}

std::vector<SummaryStats> run_experiment(const ExperimentConfig& config,
                                         const ReplicationSink& sink) {
  validate(config);
  const auto R = config.replications;
  const auto T = static_cast<std::size_t>(config.horizon);
  const std::size_t threads =
      std::min<std::size_t>(resolve_threads(config), static_cast<std::size_t>(R));

  std::vector<Accumulator> acc(config.policies.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i].label = config.policies[i].label;
    acc[i].cum_sum.assign(T, 0.0);
    acc[i].correct.assign(T, 0);
  }

  auto reduce = [&](const ReplicationResult& r) {
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      auto& a = acc[i];
      a.totals.push_back(r.runs[i].total_regret());
      for (std::size_t j = 0; j < T; ++j) {
        a.cum_sum[j] += r.runs[i].steps[j].regret_cum;
        a.correct[j] += r.runs[i].steps[j].correct ? 1 : 0;
      }
    }
    if (sink) sink(r);
  };

  for (std::int64_t start = 0; start < R; start += static_cast<std::int64_t>(threads)) {
    const auto count = static_cast<std::size_t>(
        std::min<std::int64_t>(static_cast<std::int64_t>(threads), R - start));
    std::vector<ReplicationResult> batch(count);
    if (count == 1) {
      batch[0] = run_replication(config, start);
    } else {
      std::vector<std::exception_ptr> errors(count);
      std::vector<std::thread> workers;
      workers.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        workers.emplace_back([&, i] {
          try {
            batch[i] = run_replication(config, start + static_cast<std::int64_t>(i));
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (const auto& r : batch) reduce(r);
  }

  std::vector<SummaryStats> out;
  out.reserve(acc.size());
  const double reps = static_cast<double>(R);
  for (auto& a : acc) {
    SummaryStats s;
    s.policy = a.label;
    s.total = five_number_summary(a.totals);
    s.totals = std::move(a.totals);
    s.mean_cum_regret.resize(T);
    s.pct_correct.resize(T);
    for (std::size_t j = 0; j < T; ++j) {
      s.mean_cum_regret[j] = a.cum_sum[j] / reps;
      s.pct_correct[j] = 100.0 * static_cast<double>(a.correct[j]) / reps;
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

PolicySpec eps_spec(const ExperimentConfig& config, double eps, std::string label) {
  PolicySpec spec;
  spec.name = "eps_greedy";
  spec.label = std::move(label);
  spec.params["epsilon"] = format_shortest(eps);
  spec.slot = config.policies.size();
  for (const auto& p : config.policies) {
    if (p.name == "eps_greedy") {
      spec.slot = p.slot;
      break;
    }
  }
  return spec;
}

ExperimentConfig single_policy(const ExperimentConfig& config, PolicySpec spec) {
  ExperimentConfig cfg = config;
  cfg.policies = {std::move(spec)};
  cfg.sweeps.clear();
  cfg.epsilon_grid.clear();
  return cfg;
}

std::string eps_label(double eps) { return "eps_greedy[epsilon=" + format_shortest(eps) + "]"; }

}  // namespace

std::pair<double, SummaryStats> epsilon_grid_best(const ExperimentConfig& config,
                                                  const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("epsilon_grid: empty");
  std::optional<std::pair<double, SummaryStats>> best;
  for (double eps : grid) {
    auto cfg = single_policy(config, eps_spec(config, eps, eps_label(eps)));
    auto summary = std::move(run_experiment(cfg).front());
    if (!best || summary.total.mean < best->second.total.mean) {
      best.emplace(eps, std::move(summary));
    }
  }
  return std::move(*best);
}

std::vector<SweepPoint> sensitivity_sweep(const ExperimentConfig& config,
                                          const SweepSpec& sweep,
                                          const ReplicationSink& sink) {
  if (!is_sweep_parameter(sweep.parameter)) {
    throw std::invalid_argument("sweep." + sweep.parameter + ": not a sweepable parameter");
  }
  if (sweep.values.empty()) {
    throw std::invalid_argument("sweep." + sweep.parameter + ": no values");
  }
  std::vector<PolicySpec> applicable;
  for (const auto& p : config.policies) {
    if (accepts(p, sweep.parameter)) applicable.push_back(p);
  }
  if (applicable.empty()) {
    throw std::invalid_argument("sweep." + sweep.parameter + ": no configured policy takes it");
  }

  std::vector<SweepPoint> points;
  for (const auto& value : sweep.values) {
    ExperimentConfig cfg = config;
    cfg.sweeps.clear();
    cfg.epsilon_grid.clear();
    cfg.policies.clear();
    for (auto p : applicable) {
      if (sweep.parameter == "eta") {
        constexpr std::string_view suffix = "/s2";
        if (value.size() > suffix.size() && value.ends_with(suffix)) {
          p.params["eta"] = value.substr(0, value.size() - suffix.size());
          p.params["eta_mode"] = "inverse_variance";
        } else {
          p.params["eta"] = value;
          p.params["eta_mode"] = "fixed";
        }
      } else {
        p.params[sweep.parameter] = value;
      }
      p.label += "[" + sweep.parameter + "=" + value + "]";
      cfg.policies.push_back(std::move(p));
    }
    points.push_back({value, run_experiment(cfg, sink)});
  }
  return points;
}

StudyResult run_study(const ExperimentConfig& config, const ReplicationSink& sink) {
  validate(config);
  StudyResult study;

  std::vector<PolicySpec> plain;
  for (const auto& p : config.policies) {
    bool consumed = !config.epsilon_grid.empty() && p.name == "eps_greedy";
    for (const auto& s : config.sweeps) consumed = consumed || accepts(p, s.parameter);
    if (!consumed) plain.push_back(p);
  }
  if (!plain.empty()) {
    ExperimentConfig cfg = config;
    cfg.policies = plain;
    cfg.sweeps.clear();
    cfg.epsilon_grid.clear();
    for (auto& s : run_experiment(cfg, sink)) study.summaries.push_back(std::move(s));
  }

  for (const auto& sweep : config.sweeps) {
    for (auto& point : sensitivity_sweep(config, sweep, sink)) {
      for (auto& s : point.summaries) study.summaries.push_back(std::move(s));
    }
  }

  if (!config.epsilon_grid.empty()) {
    auto [eps, summary] = epsilon_grid_best(config, config.epsilon_grid);
    std::string label = "eps_greedy";
    for (const auto& p : config.policies) {
      if (p.name == "eps_greedy") {
        label = p.label;
        break;
      }
    }
    label += "[best_epsilon=" + format_shortest(eps) + "]";
    if (sink) {
      auto cfg = single_policy(config, eps_spec(config, eps, label));
      summary = std::move(run_experiment(cfg, sink).front());
    }
    summary.policy = label;
    study.best_epsilon = eps;
    study.summaries.push_back(std::move(summary));
  }
  return study;
}

}  // namespace driftbandit
