#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "attnsphere/linalg.hpp"

namespace attnsphere {

/// n unit vectors in R^d (row-major, one token per row) plus the clock t.
/// This is the empirical measure (1/n) sum_i delta_{x_i(t)}.
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::size_t n, std::size_t dim, double time = 0.0)
      : n_(n), dim_(dim), time_(time), coords_(n * dim, 0.0) {}
  Ensemble(std::size_t dim, std::vector<double> coords, double time = 0.0);
  static Ensemble from_tokens(const std::vector<Vector>& tokens, double time = 0.0);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  std::span<const double> token(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> token(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// max_i | ||x_i|| - 1 |
  double max_norm_defect() const;

  /// Tokens permuted so that result.token(k) == token(perm[k]).
  Ensemble permuted(std::span<const std::size_t> perm) const;

  bool operator==(const Ensemble&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  double time_ = 0.0;
  std::vector<double> coords_;
};

}  // namespace attnsphere
