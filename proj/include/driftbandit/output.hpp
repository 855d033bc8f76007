#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftbandit/harness.hpp"

namespace driftbandit {

std::string_view artifact_version();

// A written CSV: its path and number of data rows (header excluded).
struct OutputFile {
  std::string path;
  std::int64_t rows = 0;

  bool operator==(const OutputFile&) const = default;
};

// Streams steps.csv rows, keeping only steps with t % every == 0.
// Arms are written 1-based. I/O failures throw std::runtime_error naming
// the path.
class StepsCsvWriter {
 public:
  StepsCsvWriter(std::string path, std::int64_t every = 1);

  void write(const std::string& policy, const StepRecord& record);
  void write(const ReplicationResult& result);
  OutputFile finish();

 private:
  std::string path_;
  std::int64_t every_;
  std::ofstream out_;
  std::int64_t rows_ = 0;
};

OutputFile write_steps_csv(const std::string& path, const std::string& policy,
                           std::span<const StepRecord> records);
OutputFile write_summary_csv(const std::string& path, std::span<const SummaryStats> summaries);
OutputFile write_curves_csv(const std::string& path, std::span<const SummaryStats> summaries);
OutputFile write_trajectory_csv(const std::string& path, const TrajectoryLog& trajectory);

// Data rows in a CSV file with a header line.
std::int64_t count_csv_rows(const std::string& path);

struct RunManifest {
  std::string config;  // emit_config text
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> replication_seeds;
  std::string version;
  double duration_seconds = 0.0;
  std::optional<double> best_epsilon;
  std::vector<OutputFile> files;  // paths relative to the output directory
};

std::string manifest_json(const RunManifest& manifest);
RunManifest parse_manifest(const std::string& json);

// Runs the full study and writes steps.csv (when steps_every > 0),
// summary.csv, curves.csv, trajectory exports and manifest.json into
// config.output_dir.
RunManifest run_to_directory(const ExperimentConfig& config);

}  // namespace driftbandit
