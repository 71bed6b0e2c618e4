#pragma once

// Experiment description shared by presets and config files. A config file is
// a JSON document; see README for the grammar.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "attnsphere/linalg.hpp"
#include "attnsphere/sphere.hpp"

namespace attnsphere::harness {

struct ModelCase {
  std::string label;
  Matrix B;
  Matrix V;
};

struct InitSpec {
  enum class Kind { Uniform, VmfMixture };
  Kind kind = Kind::Uniform;
  std::size_t n = 0;
  std::vector<VmfComponent> components;  ///< VmfMixture only
};

struct MetricToggles {
  bool align_E = true;
  bool align_F = true;
  bool align_Fabs = true;
  bool w2_to_target = true;
  bool v_p = true;
  bool energy = false;
};

struct EnvelopeSpec {
  bool enabled = false;
  double C0 = 1.0;
  double C1 = 2.0;
};

struct ExperimentConfig {
  std::string name;
  std::vector<ModelCase> cases;
  InitSpec init;
  std::vector<double> betas;  ///< kInfiniteBeta selects the zero-temperature flow
  double dt = 0.01;
  double t_final = 1.0;
  std::size_t record_stride = 1;
  std::size_t w2_stride = 10;  ///< in steps; must be a multiple of record_stride
  double p = 1.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double quantile_lo = 0.1;
  double quantile_hi = 0.9;
  MetricToggles metrics;
  EnvelopeSpec envelopes;
  std::vector<double> snapshot_times;

  std::size_t dim() const { return cases.empty() ? 0 : cases.front().B.rows(); }
  std::size_t step_count() const;
  /// Throws ValidationError naming every violated invariant.
  void validate() const;
};

/// Parses and validates. Syntax and type problems raise ParseError with the
/// offending line or field; semantic problems raise ValidationError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved config as JSON; parse_config(to_json(c).dump()) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

/// "inf" for the zero-temperature flow, otherwise the shortest round-trip form.
std::string format_beta(double beta);

}  // namespace attnsphere::harness
