#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attnsphere/harness/config.hpp"

namespace attnsphere::harness {

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& preset_catalog();

/// Fully resolved config for a named preset; throws UnknownPreset.
ExperimentConfig make_preset(std::string_view name);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::vector<double> betas;  ///< replaces the preset list when non-empty
};

/// Applies the overrides and revalidates.
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// Symmetric 3x3 product VB^T used by the sphere-snapshot presets:
/// R^T diag(5, 5, 1) R with R the rotation by pi/8 about the first axis.
Matrix rotated_product();

/// Draw k of the random diagonal family: B and V with independent standard
/// normal diagonals from a fixed stream.
ModelCase diagonal_draw(std::size_t dim, std::uint64_t k);

}  // namespace attnsphere::harness
