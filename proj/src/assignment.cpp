#include "attnsphere/assignment.hpp"

#include <limits>

#include "attnsphere/error.hpp"

namespace attnsphere {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

AssignmentSolver::Result AssignmentSolver::solve(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw Error(ErrorCode::SizeMismatch, "cost matrix is not n x n");
  Result result;
  if (n == 0) return result;

  std::vector<double> u(n, 0.0);
  std::vector<double> v(n, 0.0);
  std::vector<std::size_t> col4row(n, kNone);
  std::vector<std::size_t> row4col(n, kNone);

  auto c = [&](std::size_t i, std::size_t j) { return cost[i * n + j]; };

  if (warm_start_ && v_.size() == n) {
    v = v_;
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      double lo = kInf;
      for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, c(i, j));
      v[j] = lo;
    }
  }

  // Feasible row duals and a greedy matching on tight edges.
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = kInf;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = c(i, j) - v[j];
      if (r < lo) {
        lo = r;
        arg = j;
      }
    }
    u[i] = lo;
    if (row4col[arg] == kNone) {
      row4col[arg] = i;
      col4row[i] = arg;
    } else {
      free_rows.push_back(i);
    }
  }

  std::vector<double> path_cost(n);
  std::vector<std::size_t> path(n);
  std::vector<std::size_t> remaining(n);
  std::vector<char> row_seen(n);
  std::vector<char> col_seen(n);

  for (const std::size_t start : free_rows) {
    std::fill(path_cost.begin(), path_cost.end(), kInf);
    std::fill(row_seen.begin(), row_seen.end(), 0);
    std::fill(col_seen.begin(), col_seen.end(), 0);
    std::size_t num_remaining = n;
    for (std::size_t k = 0; k < n; ++k) remaining[k] = n - k - 1;

    double min_val = 0.0;
    std::size_t sink = kNone;
    std::size_t i = start;
    while (sink == kNone) {
      row_seen[i] = 1;
      std::size_t index = kNone;
      double lowest = kInf;
      for (std::size_t it = 0; it < num_remaining; ++it) {
        const std::size_t j = remaining[it];
        const double r = min_val + c(i, j) - u[i] - v[j];
        if (r < path_cost[j]) {
          path[j] = i;
          path_cost[j] = r;
        }
        if (path_cost[j] < lowest || (path_cost[j] == lowest && row4col[j] == kNone)) {
          lowest = path_cost[j];
          index = it;
        }
      }
      min_val = lowest;
      if (index == kNone || min_val == kInf) throw Error(ErrorCode::InvalidArgument, "assignment is infeasible");
      const std::size_t j = remaining[index];
      if (row4col[j] == kNone) {
        sink = j;
      } else {
        i = row4col[j];
      }
      col_seen[j] = 1;
      remaining[index] = remaining[--num_remaining];
    }

    u[start] += min_val;
    for (std::size_t r = 0; r < n; ++r)
      if (row_seen[r] && r != start) u[r] += min_val - path_cost[col4row[r]];
    for (std::size_t j = 0; j < n; ++j)
      if (col_seen[j]) v[j] -= min_val - path_cost[j];

    std::size_t j = sink;
    for (;;) {
      const std::size_t r = path[j];
      row4col[j] = r;
      std::swap(col4row[r], j);
      if (r == start) break;
    }
  }

  result.col_for_row = std::move(col4row);
  for (std::size_t r = 0; r < n; ++r) result.total_cost += c(r, result.col_for_row[r]);
  v_ = std::move(v);
  return result;
}

}  // namespace attnsphere
