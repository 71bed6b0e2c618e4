#include "attnsphere/harness/quantiles.hpp"

#include <algorithm>
#include <cmath>

#include "attnsphere/error.hpp"

namespace attnsphere::harness {

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  // q N is often a hair above an integer (0.1 * 20), so round that away first.
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

namespace {

using Field = std::optional<double> MetricRecord::*;
using BandField = std::optional<BandStat> BandRow::*;

constexpr std::pair<Field, BandField> kFields[] = {
    {&MetricRecord::align_E, &BandRow::align_E},           {&MetricRecord::align_F, &BandRow::align_F},
    {&MetricRecord::align_Fabs, &BandRow::align_Fabs},     {&MetricRecord::w2_to_target, &BandRow::w2_to_target},
    {&MetricRecord::v_p, &BandRow::v_p},                   {&MetricRecord::energy, &BandRow::energy},
};

}  // namespace

std::vector<BandRow> quantile_bands(std::span<const MetricSeries> trials, double lo, double hi) {
  if (trials.size() < 2) throw Error(ErrorCode::InvalidArgument, "bands need at least two trials");
  if (!(lo > 0.0 && lo < hi && hi < 1.0)) throw Error(ErrorCode::InvalidArgument, "need 0 < lo < hi < 1");
  const std::size_t rows = trials.front().size();
  for (const auto& t : trials)
    if (t.size() != rows) throw Error(ErrorCode::GridMismatch, "trials have different numbers of records");

  std::vector<BandRow> out(rows);
  std::vector<double> sample;
  for (std::size_t r = 0; r < rows; ++r) {
    const double time = trials.front()[r].time;
    for (const auto& t : trials)
      if (std::abs(t[r].time - time) > 1e-12 * std::max(1.0, std::abs(time)))
        throw Error(ErrorCode::GridMismatch, "trials are recorded on different time grids");
    out[r].time = time;
    for (const auto& [field, band] : kFields) {
      sample.clear();
      for (const auto& t : trials)
        if ((t[r].*field).has_value()) sample.push_back(*(t[r].*field));
      if (sample.size() != trials.size()) continue;
      double mean = 0.0;
      for (double v : sample) mean += v;
      mean /= static_cast<double>(sample.size());
      out[r].*band = BandStat{mean, nearest_rank(sample, lo), nearest_rank(sample, hi)};
    }
  }
  return out;
}

}  // namespace attnsphere::harness
