#include "driftbandit/output.hpp"

#include <chrono>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "driftbandit/config.hpp"
#include "driftbandit/format.hpp"

#ifndef DRIFTBANDIT_VERSION
#define DRIFTBANDIT_VERSION "0.0.0"
#endif

namespace driftbandit {

namespace fs = std::filesystem;

std::string_view artifact_version() { return DRIFTBANDIT_VERSION; }

namespace {

std::ofstream open_csv(const std::string& path, const char* header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << header << '\n';
  return out;
}

void close_csv(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
  out.close();
}

constexpr const char* kStepsHeader =
    "rep,policy,t,arm,reward,mu_chosen,mu_opt,regret_inst,regret_cum,correct";

}  // namespace

StepsCsvWriter::StepsCsvWriter(std::string path, std::int64_t every)
    : path_(std::move(path)), every_(every) {
  if (every_ < 1) throw std::invalid_argument("steps csv: sampling interval must be positive");
  out_ = open_csv(path_, kStepsHeader);
}

void StepsCsvWriter::write(const std::string& policy, const StepRecord& r) {
  if (r.t % every_ != 0) return;
  out_ << r.rep << ',' << policy << ',' << r.t << ',' << (r.arm + 1) << ',' << r.reward << ','
       << format_exact(r.mu_chosen) << ',' << format_exact(r.mu_opt) << ','
       << format_exact(r.regret_inst) << ',' << format_exact(r.regret_cum) << ','
       << (r.correct ? 1 : 0) << '\n';
  ++rows_;
}

void StepsCsvWriter::write(const ReplicationResult& result) {
  for (const auto& run : result.runs) {
    for (const auto& s : run.steps) write(run.label, s);
  }
}

OutputFile StepsCsvWriter::finish() {
  close_csv(out_, path_);
  return {path_, rows_};
}

OutputFile write_steps_csv(const std::string& path, const std::string& policy,
                           std::span<const StepRecord> records) {
  StepsCsvWriter w(path);
  for (const auto& r : records) w.write(policy, r);
  return w.finish();
}

OutputFile write_summary_csv(const std::string& path, std::span<const SummaryStats> summaries) {
  auto out = open_csv(path, "policy,reps,mean_total_regret,min,q1,median,q3,max");
  for (const auto& s : summaries) {
    out << s.policy << ',' << s.totals.size() << ',' << format_exact(s.total.mean) << ','
        << format_exact(s.total.min) << ',' << format_exact(s.total.q1) << ','
        << format_exact(s.total.median) << ',' << format_exact(s.total.q3) << ','
        << format_exact(s.total.max) << '\n';
  }
  close_csv(out, path);
  return {path, static_cast<std::int64_t>(summaries.size())};
}

OutputFile write_curves_csv(const std::string& path, std::span<const SummaryStats> summaries) {
  auto out = open_csv(path, "policy,t,mean_cum_regret,pct_correct");
  std::int64_t rows = 0;
  for (const auto& s : summaries) {
    for (std::size_t j = 0; j < s.mean_cum_regret.size(); ++j) {
      out << s.policy << ',' << (j + 1) << ',' << format_exact(s.mean_cum_regret[j]) << ','
          << format_exact(s.pct_correct[j]) << '\n';
      ++rows;
    }
  }
  close_csv(out, path);
  return {path, rows};
}

OutputFile write_trajectory_csv(const std::string& path, const TrajectoryLog& log) {
  auto out = open_csv(path, "t,arm,mu");
  for (std::int64_t t = 1; t <= log.horizon; ++t) {
    for (std::size_t a = 0; a < log.num_arms; ++a) {
      out << t << ',' << (a + 1) << ',' << format_exact(log.mean(t, a)) << '\n';
    }
  }
  close_csv(out, path);
  return {path, log.horizon * static_cast<std::int64_t>(log.num_arms)};
}

std::int64_t count_csv_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::int64_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines > 0 ? lines - 1 : 0;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["master_seed"] = m.master_seed;
  j["replication_seeds"] = m.replication_seeds;
  j["duration_seconds"] = m.duration_seconds;
  j["best_epsilon"] = m.best_epsilon ? nlohmann::ordered_json(*m.best_epsilon) : nullptr;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : m.files) j["files"].push_back({{"path", f.path}, {"rows", f.rows}});
  j["config"] = m.config;
  return j.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.replication_seeds = j.at("replication_seeds").get<std::vector<std::uint64_t>>();
  m.duration_seconds = j.at("duration_seconds").get<double>();
  if (!j.at("best_epsilon").is_null()) m.best_epsilon = j.at("best_epsilon").get<double>();
  for (const auto& f : j.at("files")) {
    m.files.push_back({f.at("path").get<std::string>(), f.at("rows").get<std::int64_t>()});
  }
  m.config = j.at("config").get<std::string>();
  return m;
}

RunManifest run_to_directory(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  validate(config);
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  RunManifest manifest;
  manifest.config = emit_config(config);
  manifest.master_seed = config.seed;
  manifest.version = std::string(artifact_version());
  for (std::int64_t r = 0; r < config.replications; ++r) {
    manifest.replication_seeds.push_back(
        replication_seed(config.seed, static_cast<std::uint64_t>(r)));
  }

  std::optional<StepsCsvWriter> steps;
  if (config.steps_every > 0) steps.emplace((dir / "steps.csv").string(), config.steps_every);
  ReplicationSink sink;
  if (steps) sink = [&](const ReplicationResult& r) { steps->write(r); };

  const StudyResult study = run_study(config, sink);
  manifest.best_epsilon = study.best_epsilon;

  auto relative = [&](OutputFile f) {
    f.path = fs::path(f.path).lexically_relative(dir).generic_string();
    return f;
  };
  if (steps) manifest.files.push_back(relative(steps->finish()));
  manifest.files.push_back(
      relative(write_summary_csv((dir / "summary.csv").string(), study.summaries)));
  manifest.files.push_back(
      relative(write_curves_csv((dir / "curves.csv").string(), study.summaries)));
  if (config.export_trajectories > 0) {
    fs::create_directories(dir / "trajectories");
    for (std::int64_t r = 0; r < config.export_trajectories; ++r) {
      const auto path = dir / "trajectories" / ("rep_" + std::to_string(r) + ".csv");
      manifest.files.push_back(
          relative(write_trajectory_csv(path.string(), replication_trajectory(config, r))));
    }
  }

  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << manifest_json(manifest);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
  return manifest;
}

}  // namespace driftbandit
