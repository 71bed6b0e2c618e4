#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "attnsphere/ensemble.hpp"
#include "attnsphere/harness/config.hpp"
#include "attnsphere/harness/presets.hpp"
#include "attnsphere/metrics.hpp"
#include "attnsphere/spectral.hpp"

namespace attnsphere::harness {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::size_t workers = 1;
  bool quiet = true;
};

struct RunRecord {
  std::size_t case_index = 0;
  std::size_t beta_index = 0;
  std::size_t trial = 0;
  double beta = 0.0;
  std::filesystem::path csv;
  MetricSeries series;
};

struct RunSummary {
  nlohmann::json document;  ///< contents of summary.json
  std::vector<RunRecord> runs;
  std::filesystem::path summary_path;
  double wall_seconds = 0.0;

  const RunRecord& run(std::size_t case_index, std::size_t beta_index, std::size_t trial) const;
};

/// Runs every (case, beta, trial) combination, writing per-run CSVs, band
/// CSVs (trials >= 2), trial-0 snapshots, timing.json and finally
/// summary.json. Throws AssumptionViolation when an E-dependent metric is
/// requested for a model without a symmetric V B^T.
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options);
RunSummary run_preset(std::string_view name, const Overrides& overrides, const RunOptions& options);
RunSummary run_config(const std::filesystem::path& path, const RunOptions& options);

/// Initial tokens of a trial. The stream depends on (seed, trial) only, so
/// all cases and temperatures of one trial start from the same cloud.
Ensemble initial_ensemble(const ExperimentConfig& config, std::size_t trial);

nlohmann::json spectral_summary(const SpectralModel& model);
/// key=value lines embedded in every CSV header.
std::vector<std::string> spectral_header(const SpectralModel& model);

}  // namespace attnsphere::harness
