#include "attnsphere/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "attnsphere/dynamics.hpp"
#include "attnsphere/error.hpp"

namespace attnsphere {

std::vector<double> cost_matrix(const Ensemble& a, const Ensemble& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> cost(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = a.token(i);
    for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = squared_distance(x, b.token(j));
  }
  return cost;
}

namespace {

void check_pair(const Ensemble& a, const Ensemble& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "W2 requires equal token counts");
  if (a.dim() != b.dim()) throw Error(ErrorCode::SizeMismatch, "W2 requires equal dimensions");
}

// Points of b that coincide up to rounding share an atom. Returns the atom of
// each point, or nothing when b has more than two atoms.
std::optional<std::vector<int>> two_atoms(const Ensemble& b) {
  constexpr double kSameAtom = 1e-12;
  std::vector<int> atom(b.size());
  std::size_t reps[2] = {0, 0};
  int count = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    int found = -1;
    for (int g = 0; g < count && found < 0; ++g) {
      const auto r = b.token(reps[g]);
      const auto y = b.token(j);
      double gap = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) gap = std::max(gap, std::abs(y[k] - r[k]));
      if (gap <= kSameAtom) found = g;
    }
    if (found < 0) {
      if (count == 2) return std::nullopt;
      reps[count] = j;
      found = count++;
    }
    atom[j] = found;
  }
  return atom;
}

// With two target atoms the transport problem is a knapsack with one
// capacity: send the sources with the smallest cost difference to atom 0.
double two_atom_cost(const Ensemble& a, const Ensemble& b, const std::vector<int>& atom) {
  std::vector<std::size_t> members[2];
  for (std::size_t j = 0; j < b.size(); ++j) members[atom[j]].push_back(j);
  if (members[1].empty()) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += squared_distance(a.token(i), b.token(members[0][i]));
    return total;
  }
  const auto y0 = b.token(members[0].front());
  const auto y1 = b.token(members[1].front());
  std::vector<std::pair<double, std::size_t>> order(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    order[i] = {squared_distance(a.token(i), y0) - squared_distance(a.token(i), y1), i};
  std::sort(order.begin(), order.end());
  double total = 0.0;
  const std::size_t cap = members[0].size();
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t j = r < cap ? members[0][r] : members[1][r - cap];
    total += squared_distance(a.token(order[r].second), b.token(j));
  }
  return total;
}

double w2_from_solver(AssignmentSolver& solver, const Ensemble& a, const Ensemble& b) {
  check_pair(a, b);
  if (a.size() == 0) return 0.0;
  if (const auto atom = two_atoms(b))
    return std::sqrt(std::max(0.0, two_atom_cost(a, b, *atom)) / static_cast<double>(a.size()));
  const auto cost = cost_matrix(a, b);
  const auto result = solver.solve(cost, a.size());
  return std::sqrt(std::max(0.0, result.total_cost) / static_cast<double>(a.size()));
}

}  // namespace

double w2_empirical(const Ensemble& a, const Ensemble& b) {
  AssignmentSolver solver;
  return w2_from_solver(solver, a, b);
}

W2Tracker::W2Tracker(Ensemble target) : target_(std::move(target)) { solver_.set_warm_start(true); }

double W2Tracker::distance(const Ensemble& current) { return w2_from_solver(solver_, current, target_); }

// ---------------------------------------------------------------- Lyapunov

namespace {

struct Split {
  Vector u;  // P x
  Vector v;  // (Id - P) x
  double u2 = 0.0;
  double v2 = 0.0;
};

Split split(const Subspace& s, std::span<const double> x) {
  Split out{s.project(x), Vector(x), 0.0, 0.0};
  out.v -= out.u;
  out.u2 = dot(out.u, out.u);
  out.v2 = dot(out.v, out.v);
  return out;
}

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in (0, 1]");
}

}  // namespace

double r_p(const Subspace& s, std::span<const double> x, double p, double eps_perp) {
  check_p(p);
  const auto parts = split(s, x);
  if (!(std::sqrt(parts.u2) > eps_perp)) throw Error(ErrorCode::InPerp, "R_p undefined on the orthogonal complement");
  return std::pow(parts.v2 / parts.u2, p);
}

Vector grad_r_p(const Subspace& s, std::span<const double> x, double p, double eps_perp) {
  check_p(p);
  const auto parts = split(s, x);
  if (!(std::sqrt(parts.u2) > eps_perp)) throw Error(ErrorCode::InPerp, "grad R_p undefined on the orthogonal complement");
  const bool on_subspace = !(std::sqrt(parts.v2) > eps_perp);
  if (on_subspace && p < 1.0) throw Error(ErrorCode::InSubspace, "grad R_p degenerates on the subspace for p < 1");

  // grad R_1 = (2 v ||u||^2 - 2 u ||v||^2) / ||u||^4
  const double inv_u4 = 1.0 / (parts.u2 * parts.u2);
  Vector g(x.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = 2.0 * (parts.v[k] * parts.u2 - parts.u[k] * parts.v2) * inv_u4;
  if (p == 1.0) return g;
  const double r1 = parts.v2 / parts.u2;
  g *= p * std::pow(r1, p - 1.0);
  return g;
}

double v_p(const Ensemble& ensemble, const Subspace& s, double p, double eps_perp) {
  check_p(p);
  if (ensemble.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto parts = split(s, ensemble.token(i));
    if (!(std::sqrt(parts.u2) > eps_perp)) return std::numeric_limits<double>::infinity();
    total += std::pow(parts.v2 / parts.u2, p);
  }
  return total / static_cast<double>(ensemble.size());
}

double alignment(const Ensemble& ensemble, const Subspace& s) {
  if (ensemble.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) total += s.projected_squared_norm(ensemble.token(i));
  return total / static_cast<double>(ensemble.size());
}

double interaction_energy(const Ensemble& ensemble, const Matrix& B) {
  const std::size_t n = ensemble.size();
  const std::size_t d = ensemble.dim();
  if (n == 0) return 0.0;
  std::vector<double> b_tokens(n * d);
  for (std::size_t j = 0; j < n; ++j) B.apply_into(ensemble.token(j), {b_tokens.data() + j * d, d});
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = ensemble.token(i);
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double* by = b_tokens.data() + j * d;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += x[k] * by[k];
      row += std::exp(s);
    }
    total += row;
  }
  const double energy = total / (static_cast<double>(n) * static_cast<double>(n));
  if (!std::isfinite(energy)) throw Error(ErrorCode::AssumptionViolation, "interaction energy overflowed");
  return energy;
}

Vector laplace_maximizer(const Matrix& B, std::span<const double> x) {
  Vector y = B.transpose().apply(x);
  y *= 1.0 / norm(y);
  return y;
}

double laplace_residual(const Ensemble& ensemble, const Matrix& B, double beta, std::span<const double> x) {
  const Vector m = consensus_at(ensemble, B, beta, x);
  const Vector y_star = laplace_maximizer(B, x);
  return std::sqrt(squared_distance(m, y_star));
}

}  // namespace attnsphere
