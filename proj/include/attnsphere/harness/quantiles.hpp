#pragma once

#include <optional>
#include <span>
#include <vector>

#include "attnsphere/metrics.hpp"

namespace attnsphere::harness {

/// Nearest-rank quantile: the ceil(q N)-th smallest value (1-based).
double nearest_rank(std::vector<double> values, double q);

struct BandStat {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct BandRow {
  double time = 0.0;
  std::optional<BandStat> align_E;
  std::optional<BandStat> align_F;
  std::optional<BandStat> align_Fabs;
  std::optional<BandStat> w2_to_target;
  std::optional<BandStat> v_p;
  std::optional<BandStat> energy;
};

/// Per-time mean and (lo, hi) nearest-rank quantiles across trials. A metric
/// is banded at a time only if every trial recorded it there. Requires at
/// least two trials on a common time grid; throws GridMismatch otherwise.
std::vector<BandRow> quantile_bands(std::span<const MetricSeries> trials, double lo, double hi);

}  // namespace attnsphere::harness
