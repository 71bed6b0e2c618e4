#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "attnsphere/ensemble.hpp"
#include "attnsphere/linalg.hpp"

namespace attnsphere {

inline constexpr double kDefaultClusterTol = 1e-8;
inline constexpr double kDefaultEpsPerp = 1e-10;

/// Linear subspace of R^d stored as an orthonormal column basis (d x k).
class Subspace {
 public:
  Subspace() = default;
  /// Columns must already be orthonormal (checked to 1e-10).
  explicit Subspace(Matrix basis);
  /// Gram-Schmidt over the given spanning vectors; dependent vectors are dropped.
  static Subspace span(const std::vector<Vector>& vectors);
  static Subspace whole(std::size_t dim);

  std::size_t dim() const noexcept { return basis_.cols(); }
  std::size_t ambient_dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }

  /// P_S x = basis (basis^T x).
  Vector project(std::span<const double> x) const;
  /// Squared norm of P_S x without forming it.
  double projected_squared_norm(std::span<const double> x) const;
  /// The d x d orthogonal projector.
  Matrix projector() const;

  /// Same subspace up to `tol` in projector max-norm.
  bool same_as(const Subspace& other, double tol = 1e-8) const;

 private:
  Matrix basis_;
};

Vector subspace_project(const Subspace& s, std::span<const double> x);

/// Everything derived from the weight pair (B, V).
struct SpectralModel {
  Matrix B;
  Matrix V;
  Matrix VBt;
  double sigma_min_B = 0.0;
  double sigma_max_B = 0.0;

  bool vbt_symmetric = false;
  /// Eigenvalues of VB^T (descending), only when VB^T is symmetric.
  std::optional<Vector> vbt_eigenvalues;
  /// Dominant eigenspace of VB^T. For non-symmetric VB^T this is the
  /// eigenvector of a real, simple leading eigenvalue when one exists.
  std::optional<Subspace> E;
  double mu1 = std::numeric_limits<double>::quiet_NaN();
  double mu2 = std::numeric_limits<double>::quiet_NaN();
  /// mu1 - mu2; +inf when dim E == d; NaN when VB^T is not symmetric.
  double gamma = std::numeric_limits<double>::quiet_NaN();

  std::optional<Vector> v_eigenvalues;
  std::optional<Subspace> F;      ///< eigenspace of the largest eigenvalue of V
  std::optional<Subspace> F_abs;  ///< eigenspace of the largest |eigenvalue| of V
  double gamma_V = std::numeric_limits<double>::quiet_NaN();

  bool has_E() const noexcept { return E.has_value(); }
  bool symmetric_theory_applies() const noexcept { return vbt_symmetric && E.has_value(); }
};

/// Throws Singular if sigma_min(B) <= 1e-12, SizeMismatch on bad shapes.
/// A non-symmetric VB^T does not throw; see SpectralModel::vbt_symmetric.
SpectralModel build_model(const Matrix& B, const Matrix& V, double cluster_tol = kDefaultClusterTol);

/// Pi(x) = P_S x / ||P_S x||; throws InPerp when ||P_S x|| <= eps_perp.
Vector pi_map(const Subspace& s, std::span<const double> x, double eps_perp = kDefaultEpsPerp);

/// D Pi(x) = (P_S - u u^T / ||u||^2) / ||u|| with u = P_S x.
Matrix pi_jacobian(const Subspace& s, std::span<const double> x, double eps_perp = kDefaultEpsPerp);

/// Token-wise Pi, preserving order: the empirical push-forward Pi_# rho.
Ensemble pushforward_pi(const Ensemble& ensemble, const Subspace& s, double eps_perp = kDefaultEpsPerp);

}  // namespace attnsphere
