#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace attnsphere {

/// Dense square linear assignment, min sum_i cost(i, col_for_row[i]).
///
/// Successive shortest augmenting paths with dual potentials (the
/// Jonker-Volgenant / Crouse scheme), O(n^3) worst case. Column potentials
/// from a previous, similar problem can be supplied to warm-start: rows whose
/// reduced-cost minimum lands on a free column are matched immediately and
/// only the remainder is augmented. The result is exact either way.
class AssignmentSolver {
 public:
  struct Result {
    std::vector<std::size_t> col_for_row;
    double total_cost = 0.0;
  };

  /// `cost` is row-major n x n with finite entries.
  Result solve(std::span<const double> cost, std::size_t n);

  /// Reuse the column potentials of the previous solve as the starting duals.
  void set_warm_start(bool on) noexcept { warm_start_ = on; }
  void reset() noexcept { v_.clear(); }

 private:
  bool warm_start_ = false;
  std::vector<double> v_;
};

}  // namespace attnsphere
