#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "driftbandit/harness.hpp"
#include "driftbandit/stats.hpp"

using namespace driftbandit;

namespace {

PolicySpec policy(std::string name, std::size_t slot,
                  std::map<std::string, std::string> params = {}, std::string label = "") {
  PolicySpec s;
  s.label = label.empty() ? name : label;
  s.name = std::move(name);
  s.params = std::move(params);
  s.slot = slot;
  return s;
}

ExperimentConfig fixed_config(std::vector<double> means, std::int64_t horizon,
                              std::int64_t reps) {
  ExperimentConfig c;
  c.env.kind = EnvKind::kFixed;
  c.env.num_arms = means.size();
  c.env.means = std::move(means);
  c.horizon = horizon;
  c.replications = reps;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("type 7 quantiles") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.75) == doctest::Approx(3.25));
  CHECK(quantile_sorted(v, 0.0) == 1);
  CHECK(quantile_sorted(v, 1.0) == 4);
  const std::vector<double> one{7};
  CHECK(quantile_sorted(one, 0.3) == 7);
  CHECK_THROWS(quantile_sorted(std::vector<double>{}, 0.5));
  CHECK_THROWS(quantile_sorted(v, 1.5));
  const std::vector<double> raw{9, 1, 5, 3, 7};
  const auto f = five_number_summary(raw);
  CHECK(f.mean == 5);
  CHECK(f.min == 1);
  CHECK(f.q1 == 3);
  CHECK(f.median == 5);
  CHECK(f.q3 == 7);
  CHECK(f.max == 9);
}

TEST_CASE("oracle and fixed-arm regret on fixed means") {
  auto c = fixed_config({0.9, 0.1}, 500, 3);
  c.policies = {policy("oracle", 0), policy("fixed_arm", 1, {{"arm", "2"}})};
  const auto s = run_experiment(c);
  REQUIRE(s.size() == 2);
  CHECK(s[0].total.max == 0.0);
  CHECK(s[0].pct_correct.front() == 100.0);
  CHECK(std::all_of(s[0].pct_correct.begin(), s[0].pct_correct.end(),
                    [](double p) { return p == 100.0; }));
  for (double tot : s[1].totals) CHECK(tot == doctest::Approx(0.8 * 500).epsilon(1e-12));
  CHECK(s[1].pct_correct.back() == 0.0);
}

TEST_CASE("oracle tracks a changing optimum") {
  ExperimentConfig c;
  c.env = scenario_case(1, 3);
  c.horizon = 3000;
  c.replications = 4;
  c.policies = {policy("oracle", 0)};
  const auto s = run_experiment(c);
  CHECK(s[0].total.max == 0.0);
  CHECK(*std::min_element(s[0].pct_correct.begin(), s[0].pct_correct.end()) == 100.0);
}

TEST_CASE("small-change regret reference") {
  ExperimentConfig c;
  c.env = small_change_scenario();
  c.horizon = 6000;
  c.replications = 1;
  c.policies = {policy("ts", 0)};
  const auto r = run_replication(c, 0);
  for (const auto& s : r.runs[0].steps) {
    const double expected_opt = (s.t >= 3000 && s.t < 5000) ? 0.8 : 0.5;
    REQUIRE(s.mu_opt == expected_opt);
    REQUIRE(s.regret_inst == doctest::Approx(expected_opt - s.mu_chosen));
  }
}

TEST_CASE("step record invariants") {
  ExperimentConfig c;
  c.env = scenario_case(4, 3);
  c.horizon = 2000;
  c.replications = 2;
  c.policies = {policy("aff_ucb1", 0), policy("eps_greedy", 1), policy("d_ucb", 2)};
  for (std::int64_t rep = 0; rep < 2; ++rep) {
    const auto r = run_replication(c, rep);
    for (const auto& run : r.runs) {
      double prev = 0.0;
      for (const auto& s : run.steps) {
        REQUIRE(s.regret_inst >= 0.0);
        REQUIRE(s.regret_cum >= prev);
        if (s.correct) REQUIRE(s.regret_inst == 0.0);
        REQUIRE((s.reward == 0 || s.reward == 1));
        prev = s.regret_cum;
      }
      CHECK(run.total_regret() == run.steps.back().regret_cum);
    }
  }
}

TEST_CASE("single replication summary equals its totals") {
  ExperimentConfig c;
  c.env = scenario_case(2);
  c.horizon = 1000;
  c.replications = 1;
  c.policies = {policy("aff_ts", 0), policy("ucb", 1)};
  const auto s = run_experiment(c);
  const auto r = run_replication(c, 0);
  for (std::size_t i = 0; i < 2; ++i) {
    const double tot = r.runs[i].total_regret();
    CHECK(s[i].totals == std::vector<double>{tot});
    CHECK(s[i].total.mean == tot);
    CHECK(s[i].total.min == tot);
    CHECK(s[i].total.median == tot);
    CHECK(s[i].total.max == tot);
    CHECK(s[i].mean_cum_regret.back() == tot);
  }
}

TEST_CASE("summaries are ordered and curves nondecreasing") {
  ExperimentConfig c;
  c.env = scenario_case(1);
  c.horizon = 1500;
  c.replications = 9;
  c.policies = {policy("aff_ots", 0), policy("sw_ucb", 1)};
  for (const auto& s : run_experiment(c)) {
    CHECK(s.total.min <= s.total.q1);
    CHECK(s.total.q1 <= s.total.median);
    CHECK(s.total.median <= s.total.q3);
    CHECK(s.total.q3 <= s.total.max);
    CHECK(std::is_sorted(s.mean_cum_regret.begin(), s.mean_cum_regret.end()));
    for (double p : s.pct_correct) {
      CHECK(p >= 0.0);
      CHECK(p <= 100.0);
    }
  }
}

TEST_CASE("determinism regardless of thread count") {
  ExperimentConfig c;
  c.env = scenario_case(3);
  c.horizon = 800;
  c.replications = 7;
  c.policies = {policy("aff_d_greedy", 0), policy("ots", 1)};
  c.threads = 1;
  const auto a = run_experiment(c);
  c.threads = 3;
  const auto b = run_experiment(c);
  const auto again = run_experiment(c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].totals == b[i].totals);
    CHECK(a[i].mean_cum_regret == b[i].mean_cum_regret);
    CHECK(a[i].pct_correct == b[i].pct_correct);
    CHECK(b[i].totals == again[i].totals);
  }
}

TEST_CASE("sink sees replications in order") {
  ExperimentConfig c;
  c.env = scenario_case(1);
  c.horizon = 200;
  c.replications = 6;
  c.threads = 4;
  c.policies = {policy("ts", 0)};
  std::vector<std::int64_t> seen;
  run_experiment(c, [&](const ReplicationResult& r) { seen.push_back(r.rep); });
  CHECK(seen == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("policies in one replication share the trajectory") {
  ExperimentConfig c;
  c.env = scenario_case(1, 4);
  c.horizon = 1000;
  c.replications = 1;
  c.policies = {policy("ts", 0), policy("aff_ucb2", 1), policy("eps_greedy", 2)};
  const auto r = run_replication(c, 0);
  const auto traj = replication_trajectory(c, 0);
  CHECK(r.trajectory_hash == trajectory_hash(traj));
  for (const auto& run : r.runs) {
    for (const auto& s : run.steps) {
      REQUIRE(s.mu_opt == traj.best_mean(s.t));
      REQUIRE(s.mu_chosen == traj.mean(s.t, s.arm));
    }
  }
}

TEST_CASE("changing one policy leaves the others untouched") {
  ExperimentConfig c;
  c.env = scenario_case(2);
  c.horizon = 1000;
  c.replications = 1;
  c.policies = {policy("aff_ts", 0), policy("eps_greedy", 1, {{"epsilon", "0.1"}})};
  const auto a = run_replication(c, 0);
  c.policies[1].params["epsilon"] = "0.7";
  const auto b = run_replication(c, 0);
  CHECK(a.runs[0].steps == b.runs[0].steps);
  CHECK(a.runs[1].steps != b.runs[1].steps);
}

TEST_CASE("common random numbers") {
  auto c = fixed_config({0.4, 0.6}, 300, 1);
  c.common_random_numbers = true;
  c.policies = {policy("fixed_arm", 0, {{"arm", "1"}}), policy("fixed_arm", 1, {{"arm", "1"}}, "twin")};
  const auto r = run_replication(c, 0);
  CHECK(r.runs[0].steps == r.runs[1].steps);
  c.common_random_numbers = false;
  const auto q = run_replication(c, 0);
  CHECK(q.runs[0].steps != q.runs[1].steps);
}

TEST_CASE("validation") {
  auto c = fixed_config({0.5, 0.5}, 15, 1);
  c.policies = {policy("aff_ucb1", 0)};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.horizon = 20;
  CHECK_NOTHROW(validate(c));
  c.replications = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.replications = 1;
  c.policies = {policy("fixed_arm", 0, {{"arm", "3"}})};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.policies = {policy("ts", 0), policy("ts", 1)};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.policies = {policy("ts", 0)};
  c.sweeps = {{"epsilon", {"0.1"}}};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.sweeps = {{"eta", {}}};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("epsilon grid") {
  SUBCASE("large gap favours the least exploration") {
    auto c = fixed_config({0.9, 0.1}, 2000, 5);
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
    const auto [eps, summary] = epsilon_grid_best(c, grid);
    CHECK(eps == 0.1);
    CHECK(summary.totals.size() == 5);
  }
  SUBCASE("single arm ties at zero") {
    auto c = fixed_config({0.5}, 100, 2);
    const auto [eps, summary] = epsilon_grid_best(c, {0.3, 0.1, 0.9});
    CHECK(eps == 0.3);
    CHECK(summary.total.max == 0.0);
  }
  SUBCASE("grid of one") {
    auto c = fixed_config({0.2, 0.4}, 100, 2);
    CHECK(epsilon_grid_best(c, {0.42}).first == 0.42);
  }
  CHECK_THROWS(epsilon_grid_best(fixed_config({0.2, 0.4}, 100, 2), {}));
}

TEST_CASE("lambda sweep at one reproduces UCB") {
  auto c = fixed_config({0.3, 0.7, 0.5}, 1500, 3);
  c.common_random_numbers = true;
  c.policies = {policy("d_ucb", 0)};
  const auto points = sensitivity_sweep(c, {"lambda_fixed", {"1", "0.9"}});
  REQUIRE(points.size() == 2);
  CHECK(points[0].summaries[0].policy == "d_ucb[lambda_fixed=1]");
  auto u = c;
  u.policies = {policy("ucb", 0)};
  const auto ucb = run_experiment(u);
  CHECK(points[0].summaries[0].totals == ucb[0].totals);
  CHECK(points[1].summaries[0].totals != ucb[0].totals);
}

TEST_CASE("eta sweep at zero reproduces the static policies") {
  ExperimentConfig c;
  c.env = scenario_case(1);
  c.horizon = 1500;
  c.replications = 3;
  c.policies = {policy("aff_ts", 0), policy("aff_ots", 1), policy("ucb", 2)};
  const auto points = sensitivity_sweep(c, {"eta", {"0"}});
  REQUIRE(points[0].summaries.size() == 2);
  auto ref = c;
  ref.policies = {policy("ts", 0), policy("ots", 1)};
  const auto base = run_experiment(ref);
  CHECK(points[0].summaries[0].totals == base[0].totals);
  CHECK(points[0].summaries[1].totals == base[1].totals);
}

TEST_CASE("sweep argument checks") {
  auto c = fixed_config({0.3, 0.7}, 100, 1);
  c.policies = {policy("ts", 0)};
  CHECK_THROWS_AS(sensitivity_sweep(c, {"W", {"10"}}), std::invalid_argument);
  CHECK_THROWS_AS(sensitivity_sweep(c, {"epsilon", {"0.1"}}), std::invalid_argument);
  c.policies = {policy("sw_ucb", 0)};
  CHECK_THROWS_AS(sensitivity_sweep(c, {"W", {}}), std::invalid_argument);
}

TEST_CASE("inverse-variance eta sweep value") {
  ExperimentConfig c;
  c.env = scenario_case(3);
  c.horizon = 2000;
  c.replications = 2;
  c.policies = {policy("aff_ts", 0)};
  const auto points = sensitivity_sweep(c, {"eta", {"0.05", "0.05/s2"}});
  CHECK(points[1].summaries[0].policy == "aff_ts[eta=0.05/s2]");
  CHECK(points[0].summaries[0].totals != points[1].summaries[0].totals);
}

TEST_CASE("study combines plain runs, sweeps and the grid") {
  ExperimentConfig c;
  c.env = scenario_case(1);
  c.horizon = 500;
  c.replications = 2;
  c.policies = {policy("eps_greedy", 0), policy("ts", 1), policy("sw_ucb", 2)};
  c.epsilon_grid = {0.1, 0.5};
  c.sweeps = {{"W", {"10", "auto"}}};
  std::size_t sunk = 0;
  const auto study = run_study(c, [&](const ReplicationResult&) { ++sunk; });
  std::vector<std::string> labels;
  for (const auto& s : study.summaries) labels.push_back(s.policy);
  REQUIRE(study.best_epsilon.has_value());
  const std::string best = "eps_greedy[best_epsilon=" +
                           std::string(*study.best_epsilon == 0.1 ? "0.1" : "0.5") + "]";
  CHECK(labels == std::vector<std::string>{"ts", "sw_ucb[W=10]", "sw_ucb[W=auto]", best});
  CHECK(sunk == 2 * 4);
}

TEST_CASE("thread cap from the environment") {
  ExperimentConfig c;
  c.threads = 8;
  ::setenv("DRIFTBANDIT_THREADS", "2", 1);
  CHECK(resolve_threads(c) == 2);
  ::setenv("DRIFTBANDIT_THREADS", "junk", 1);
  CHECK(resolve_threads(c) == 8);
  ::unsetenv("DRIFTBANDIT_THREADS");
  CHECK(resolve_threads(c) == 8);
  c.threads = 0;
  CHECK(resolve_threads(c) >= 1);
}
