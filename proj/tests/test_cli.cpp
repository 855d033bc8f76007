#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "driftbandit/config.hpp"
#include "driftbandit/format.hpp"
#include "driftbandit/output.hpp"

using namespace driftbandit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("driftbandit_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("config was accepted: " << text);
  return ConfigError(0, "", "");
}

}  // namespace

TEST_CASE("minimal config picks up defaults") {
  const auto c = parse_config("env = small_change\npolicies = aff_ots\n");
  CHECK(c.env.kind == EnvKind::kSmallChange);
  CHECK(c.env.num_arms == 3);
  CHECK(c.horizon == 10000);
  CHECK(c.replications == 100);
  REQUIRE(c.policies.size() == 1);
  CHECK(c.policies[0].name == "aff_ots");
  CHECK(c.policies[0].label == "aff_ots");
  const auto o = resolve_options(c.policies[0]);
  CHECK(o.eta == 0.001);
  CHECK(o.threshold_d() == 0.001);
  CHECK(o.alpha0 == 2.0);
  CHECK(o.beta0 == 2.0);
  CHECK(o.burn_in_repeats == 10);
}

TEST_CASE("full config") {
  const auto c = parse_config(R"(# two-arm clock
env.model = exponential_clock
env.theta = 0.001, 0.01
env.r_low = 0.3, 0
env.r_high = 1, 0.7
horizon = 500
replications = 4
seed = 99
common_random_numbers = true
epsilon_grid = 0.1, 0.2

policy.name = eps_greedy
policy.name = aff_ts
policy.eta = 0.01   # faster forgetting
policy.label = quick
)");
  CHECK(c.env.num_arms == 2);
  CHECK(c.env.r_low == std::vector<double>{0.3, 0.0});
  CHECK(c.horizon == 500);
  CHECK(c.seed == 99);
  CHECK(c.common_random_numbers);
  CHECK(c.epsilon_grid == std::vector<double>{0.1, 0.2});
  REQUIRE(c.policies.size() == 2);
  CHECK(c.policies[1].label == "quick");
  CHECK(c.policies[1].params.at("eta") == "0.01");
  CHECK(c.policies[1].slot == 1);
}

TEST_CASE("config errors carry line and field") {
  const auto e = config_error("env = small_change\npolicy.name = eps_greedy\npolicy.epsilon = 1.5\n");
  CHECK(e.field() == "policy.epsilon");
  CHECK(e.line() == 3);
  CHECK(std::string(e.what()).find("line 3") != std::string::npos);

  CHECK(config_error("env = small_change\npolicy.name = nosuch\n").line() == 2);
  CHECK(config_error("policies = ts\n").field() == "env.model");
  CHECK(config_error("env = case9\npolicies = ts\n").line() == 1);
  CHECK(config_error("env = small_change\npolicies = ts\nhorizon = -4\n").line() == 3);
  CHECK(config_error("env = small_change\npolicies = ts\nhorizon = 10\nhorizon = 20\n").line() == 4);
  CHECK(config_error("env = small_change\npolicies = ts\nbogus = 1\n").line() == 3);
  CHECK(config_error("env = small_change\nnot a pair\n").line() == 2);
  CHECK(config_error("env = reflecting_walk\nenv.sigma2 = -1\npolicies = ts\n").line() == 2);
}

TEST_CASE("duplicate policies get suffixed labels") {
  const auto c = parse_config(R"(env = small_change
policy.name = eps_greedy
policy.epsilon = 0.1
policy.name = eps_greedy
policy.epsilon = 0.3
policy.name = eps_greedy
policy.epsilon = 0.5
)");
  REQUIRE(c.policies.size() == 3);
  CHECK(c.policies[0].label == "eps_greedy");
  CHECK(c.policies[1].label == "eps_greedy_2");
  CHECK(c.policies[2].label == "eps_greedy_3");
  CHECK(c.policies[2].params.at("epsilon") == "0.5");
}

TEST_CASE("config round trip") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto c = preset(name);
    CHECK(parse_config(emit_config(c)) == c);
  }
  auto c = parse_config(R"(env = reflecting_walk
env.arms = 5
env.sigma2 = 0.0001, 0.002
horizon = 77
threads = 3
steps_every = 0
export_trajectories = 2
output_dir = somewhere/else
sweep.eta = 0.1, 0.01/s2
policy.name = aff_ucb2
policy.label = a b
policy.name = aff_ucb1
policy.M = 3
)");
  CHECK(parse_config(emit_config(c)) == c);
  c.env = scenario_case(2, 3);
  c.env.theta = {0.1 / 3.0};
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("preset fidelity") {
  const auto sc = preset("small-change");
  CHECK(sc.env.kind == EnvKind::kSmallChange);
  CHECK(sc.horizon == 10000);
  CHECK(sc.replications == 100);
  CHECK(sc.policies.size() == 11);
  CHECK(sc.epsilon_grid.size() == 9);
  CHECK(sc.epsilon_grid.front() == 0.1);
  CHECK(sc.epsilon_grid.back() == 0.9);

  const auto c1 = preset("case1");
  CHECK(c1.env.kind == EnvKind::kExponentialClock);
  CHECK(c1.env.num_arms == 2);
  CHECK(c1.env.theta == std::vector<double>{0.001, 0.01});
  CHECK(c1.env.r_low == std::vector<double>{0.0, 0.0});
  CHECK(c1.env.r_high == std::vector<double>{1.0, 1.0});
  const auto c2 = preset("case2");
  CHECK(c2.env.r_low == std::vector<double>{0.3, 0.0});
  CHECK(c2.env.r_high == std::vector<double>{1.0, 0.7});
  const auto c3 = preset("case3");
  CHECK(c3.env.kind == EnvKind::kReflectingWalk);
  CHECK(c3.env.num_arms == 2);
  CHECK(c3.env.sigma2 == std::vector<double>{0.0001});
  const auto c4 = preset("case4");
  CHECK(c4.env.kind == EnvKind::kLogisticWalk);
  CHECK(c4.env.sigma2 == std::vector<double>{0.001});
  for (const auto* c : {&c1, &c2, &c3, &c4}) {
    CHECK(c->horizon == 10000);
    CHECK(c->replications == 100);
    CHECK(c->policies.size() == 11);
  }

  const auto la = preset("large-arms", {100, 3});
  CHECK(la.env.num_arms == 100);
  CHECK(la.env.kind == EnvKind::kReflectingWalk);
  CHECK(preset("large-arms").env.num_arms == 50);
  CHECK_THROWS_AS(preset("large-arms", {20, 1}), ConfigError);
  CHECK_THROWS_AS(preset("large-arms", {50, 5}), ConfigError);

  const auto dts = preset("dts-c");
  CHECK(dts.env.kind == EnvKind::kExponentialClock);
  CHECK(dts.env.theta == std::vector<double>{0.001, 0.01});
  std::vector<std::string> names;
  for (const auto& p : dts.policies) names.push_back(p.name);
  CHECK(names == std::vector<std::string>{"dts", "aff_dts1", "aff_dts2", "aff_ots"});
  REQUIRE(dts.sweeps.size() == 1);
  CHECK(dts.sweeps[0].parameter == "C");
  CHECK(dts.sweeps[0].values == std::vector<std::string>{"5", "10", "100", "1000"});

  const auto eta = preset("eta-sweep");
  REQUIRE(eta.sweeps.size() == 1);
  CHECK(eta.sweeps[0].parameter == "eta");
  for (const auto& p : eta.policies) CHECK(is_aff(*policy_kind(p.name)));

  const auto bs = preset("baseline-sweep");
  REQUIRE(bs.sweeps.size() == 2);
  CHECK(bs.sweeps[0].parameter == "lambda_fixed");
  CHECK(bs.sweeps[1].parameter == "W");

  CHECK_THROWS_AS(preset("case5"), ConfigError);
  CHECK_THROWS_AS(preset("fig99"), ConfigError);
}

TEST_CASE("steps csv schema") {
  const auto dir = scratch("steps");
  const auto empty = write_steps_csv((dir / "empty.csv").string(), "ts", {});
  CHECK(empty.rows == 0);
  CHECK(slurp(dir / "empty.csv") ==
        "rep,policy,t,arm,reward,mu_chosen,mu_opt,regret_inst,regret_cum,correct\n");
  CHECK(count_csv_rows((dir / "empty.csv").string()) == 0);

  StepRecord r{3, 5, 1, 1, 0.5, 0.75, 0.25, 1.25, false};
  const StepRecord one[] = {r};
  const auto f = write_steps_csv((dir / "one.csv").string(), "ts", one);
  CHECK(f.rows == 1);
  const auto lines = lines_of(slurp(dir / "one.csv"));
  REQUIRE(lines.size() == 2);
  CHECK(lines[1] == "3,ts,5,2,1,0.5,0.75,0.25,1.25,0");

  StepsCsvWriter every((dir / "thin.csv").string(), 10);
  for (std::int64_t t = 1; t <= 35; ++t) {
    r.t = t;
    every.write("ts", r);
  }
  CHECK(every.finish().rows == 3);
  CHECK_THROWS(write_steps_csv("/nonexistent_dir_xyz/a.csv", "ts", {}));
}

TEST_CASE("summary csv for three policies") {
  ExperimentConfig c;
  c.env = scenario_case(1);
  c.horizon = 300;
  c.replications = 5;
  c.policies = {{"ts", "ts", {}, 0}, {"ucb", "ucb", {}, 1}, {"aff_ots", "aff_ots", {}, 2}};
  const auto s = run_experiment(c);
  const auto dir = scratch("summary");
  CHECK(write_summary_csv((dir / "s.csv").string(), s).rows == 3);
  const auto lines = lines_of(slurp(dir / "s.csv"));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "policy,reps,mean_total_regret,min,q1,median,q3,max");
  for (std::size_t i = 1; i < 4; ++i) {
    std::vector<std::string> cells;
    std::istringstream in(lines[i]);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 8);
    CHECK(cells[1] == "5");
    std::vector<double> q;
    for (std::size_t j = 3; j < 8; ++j) q.push_back(std::stod(cells[j]));
    CHECK(std::is_sorted(q.begin(), q.end()));
  }
  CHECK(write_curves_csv((dir / "c.csv").string(), s).rows == 900);
}

TEST_CASE("seventeen digit round trip") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(gen) * std::ldexp(1.0, static_cast<int>(gen() % 60) - 30);
    REQUIRE(std::stod(format_exact(x)) == x);
    REQUIRE(std::stod(format_shortest(x)) == x);
  }
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_exact(0.5) == "0.5");
  CHECK(format_exact(0.1) == "0.10000000000000001");
}

TEST_CASE("run directory and manifest") {
  const auto dir = scratch("run");
  auto c = preset("case2");
  c.horizon = 400;
  c.replications = 3;
  c.steps_every = 7;
  c.export_trajectories = 2;
  c.output_dir = dir.string();
  const auto m = run_to_directory(c);
  CHECK(m.master_seed == c.seed);
  CHECK(m.replication_seeds.size() == 3);
  CHECK(m.version == artifact_version());
  CHECK(m.best_epsilon.has_value());
  std::vector<std::string> paths;
  for (const auto& f : m.files) {
    paths.push_back(f.path);
    CAPTURE(f.path);
    REQUIRE(fs::exists(dir / f.path));
    CHECK(count_csv_rows((dir / f.path).string()) == f.rows);
  }
  CHECK(paths == std::vector<std::string>{"steps.csv", "summary.csv", "curves.csv",
                                          "trajectories/rep_0.csv", "trajectories/rep_1.csv"});
  CHECK(m.files[1].rows == 11);
  CHECK(m.files[0].rows == 3 * 11 * (400 / 7));
  CHECK(m.files[3].rows == 800);

  const auto back = parse_manifest(slurp(dir / "manifest.json"));
  CHECK(back.files == m.files);
  CHECK(back.replication_seeds == m.replication_seeds);
  CHECK(back.best_epsilon == m.best_epsilon);
  CHECK(parse_config(back.config) == c);
}

TEST_CASE("command line binary") {
  const char* cli = std::getenv("DRIFTBANDIT_CLI");
  if (!cli) {
    MESSAGE("DRIFTBANDIT_CLI not set; skipping");
    return;
  }
  const auto dir = scratch("bin");
  const auto cfg = dir / "exp.cfg";
  std::ofstream(cfg) << "env = small_change\npolicies = ts, aff_ts\nhorizon = 200\nreplications = 2\n"
                        "output_dir = " << (dir / "out").string() << "\n";
  const std::string quiet = " > " + (dir / "log.txt").string() + " 2>&1";
  CHECK(std::system((std::string(cli) + " run " + cfg.string() + quiet).c_str()) == 0);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK(count_csv_rows((dir / "out" / "summary.csv").string()) == 2);

  CHECK(std::system((std::string(cli) + " preset case3 --reps 1 --seed 4 --steps-log 0 --out " +
                     (dir / "p").string() + quiet).c_str()) == 0);
  CHECK(fs::exists(dir / "p" / "summary.csv"));
  CHECK_FALSE(fs::exists(dir / "p" / "steps.csv"));

  std::ofstream(dir / "bad.cfg") << "env = small_change\npolicy.name = eps_greedy\npolicy.epsilon = 1.5\n";
  CHECK(std::system((std::string(cli) + " run " + (dir / "bad.cfg").string() + quiet).c_str()) != 0);
  CHECK(slurp(dir / "log.txt").find("policy.epsilon") != std::string::npos);
  CHECK(std::system((std::string(cli) + " preset nope" + quiet).c_str()) != 0);
}
