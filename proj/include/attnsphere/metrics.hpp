#pragma once

// Diagnostic functionals on empirical measures: exact W2, the Lyapunov ratio
// R_p / V_p and its gradient, subspace alignment, interaction energy, and the
// Laplace residual of the softmax consensus.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "attnsphere/assignment.hpp"
#include "attnsphere/ensemble.hpp"
#include "attnsphere/linalg.hpp"
#include "attnsphere/spectral.hpp"

namespace attnsphere {

/// Squared chordal distances ||a_i - b_j||^2, row-major n x n.
std::vector<double> cost_matrix(const Ensemble& a, const Ensemble& b);

/// Exact W2 between two equal-size, equal-weight empirical measures.
/// Throws SizeMismatch when the sizes or dimensions differ.
double w2_empirical(const Ensemble& a, const Ensemble& b);

/// W2 against a fixed target, warm-starting each solve from the previous
/// duals. Intended for a slowly moving ensemble sampled along a trajectory.
class W2Tracker {
 public:
  explicit W2Tracker(Ensemble target);
  double distance(const Ensemble& current);
  const Ensemble& target() const noexcept { return target_; }

 private:
  Ensemble target_;
  AssignmentSolver solver_;
};

/// R_p(x) = ||(Id - P)x||^{2p} / ||P x||^{2p}. Works for any nonzero x (the
/// ratio is 0-homogeneous). Throws InPerp when ||P x|| <= eps_perp.
double r_p(const Subspace& s, std::span<const double> x, double p, double eps_perp = kDefaultEpsPerp);

/// Ambient gradient of R_p. Throws InPerp near S^perp and, for p < 1,
/// InSubspace when ||(Id - P)x|| <= eps_perp.
Vector grad_r_p(const Subspace& s, std::span<const double> x, double p, double eps_perp = kDefaultEpsPerp);

/// Mean of R_p over tokens; +inf if any token is within eps_perp of S^perp.
double v_p(const Ensemble& ensemble, const Subspace& s, double p, double eps_perp = kDefaultEpsPerp);

/// Mean squared projection norm (1/n) sum ||P_S x_i||^2, in [0, 1].
double alignment(const Ensemble& ensemble, const Subspace& s);

/// (1/n^2) sum_ij exp(<x_i, B x_j>). Throws AssumptionViolation on overflow.
double interaction_energy(const Ensemble& ensemble, const Matrix& B);

/// ||m_{beta,rho}(x) - y*(x)|| with y*(x) = B^T x / ||B^T x||.
double laplace_residual(const Ensemble& ensemble, const Matrix& B, double beta, std::span<const double> x);

/// y*(x) = B^T x / ||B^T x||.
Vector laplace_maximizer(const Matrix& B, std::span<const double> x);

struct MetricRecord {
  double time = 0.0;
  std::optional<double> align_E;
  std::optional<double> align_F;
  std::optional<double> align_Fabs;
  std::optional<double> w2_to_target;
  std::optional<double> v_p;
  std::optional<double> energy;
};

using MetricSeries = std::vector<MetricRecord>;

}  // namespace attnsphere
