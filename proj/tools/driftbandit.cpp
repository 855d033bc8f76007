#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "driftbandit/config.hpp"
#include "driftbandit/output.hpp"

namespace {

int execute(const driftbandit::ExperimentConfig& config) {
  const auto manifest = driftbandit::run_to_directory(config);
  std::cout << "wrote " << config.output_dir << " in " << manifest.duration_seconds << " s\n";
  for (const auto& f : manifest.files) std::cout << "  " << f.path << " (" << f.rows << " rows)\n";
  if (manifest.best_epsilon) std::cout << "best epsilon: " << *manifest.best_epsilon << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic Bernoulli bandit benchmark"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  run->add_option("config-file", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* pre = app.add_subcommand("preset", "Run a canned experiment");
  std::string name;
  driftbandit::PresetOptions options;
  std::optional<std::int64_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::int64_t> steps_every;
  pre->add_option("name", name, "Preset name")
      ->required()
      ->check(CLI::IsMember(driftbandit::preset_names()));
  pre->add_option("--arms", options.arms, "Arm count for large-arms (50 or 100)");
  pre->add_option("--case", options.case_number, "Scenario case for large-arms (1-4)");
  pre->add_option("--reps", reps, "Replications");
  pre->add_option("--seed", seed, "Master seed");
  pre->add_option("--out", out_dir, "Output directory");
  pre->add_option("--steps-log", steps_every, "Write every k-th step to steps.csv (0 disables)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      std::ifstream in(config_path, std::ios::binary);
      std::ostringstream text;
      text << in.rdbuf();
      return execute(driftbandit::parse_config(text.str()));
    }
    auto config = driftbandit::preset(name, options);
    if (reps) config.replications = *reps;
    if (seed) config.seed = *seed;
    config.output_dir = out_dir.value_or("out/" + name);
    if (steps_every) config.steps_every = *steps_every;
    return execute(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
