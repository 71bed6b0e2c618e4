#include "attnsphere/spectral.hpp"

#include <cmath>
#include <string>

#include "attnsphere/error.hpp"

namespace attnsphere {

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  const std::size_t k = basis_.cols();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < basis_.rows(); ++r) s += basis_(r, a) * basis_(r, b);
      if (std::abs(s - (a == b ? 1.0 : 0.0)) > 1e-10)
        throw Error(ErrorCode::InvalidArgument, "subspace basis is not orthonormal");
    }
}

Subspace Subspace::span(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidArgument, "span of no vectors");
  const std::size_t d = vectors.front().size();
  std::vector<Vector> kept;
  for (const auto& v : vectors) {
    if (v.size() != d) throw Error(ErrorCode::SizeMismatch, "spanning vectors of differing dimension");
    Vector w = v;
    // Two passes of modified Gram-Schmidt for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) {
        const double c = dot(q, w);
        for (std::size_t i = 0; i < d; ++i) w[i] -= c * q[i];
      }
    const double len = norm(w);
    if (len > 1e-10 * std::max(1.0, norm(v))) {
      w *= 1.0 / len;
      kept.push_back(std::move(w));
    }
  }
  Matrix basis(d, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c)
    for (std::size_t r = 0; r < d; ++r) basis(r, c) = kept[c][r];
  return Subspace(std::move(basis));
}

Subspace Subspace::whole(std::size_t dim) { return Subspace(Matrix::identity(dim)); }

Vector Subspace::project(std::span<const double> x) const {
  const std::size_t d = basis_.rows();
  const std::size_t k = basis_.cols();
  Vector out(d);
  for (std::size_t c = 0; c < k; ++c) {
    double coeff = 0.0;
    for (std::size_t r = 0; r < d; ++r) coeff += basis_(r, c) * x[r];
    for (std::size_t r = 0; r < d; ++r) out[r] += coeff * basis_(r, c);
  }
  return out;
}

double Subspace::projected_squared_norm(std::span<const double> x) const {
  const std::size_t d = basis_.rows();
  double s = 0.0;
  for (std::size_t c = 0; c < basis_.cols(); ++c) {
    double coeff = 0.0;
    for (std::size_t r = 0; r < d; ++r) coeff += basis_(r, c) * x[r];
    s += coeff * coeff;
  }
  return s;
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

bool Subspace::same_as(const Subspace& other, double tol) const {
  if (ambient_dim() != other.ambient_dim() || dim() != other.dim()) return false;
  return (projector() - other.projector()).max_abs() <= tol;
}

Vector subspace_project(const Subspace& s, std::span<const double> x) { return s.project(x); }

// ---------------------------------------------------------------- model

namespace {

/// Columns of `eig` whose eigenvalue satisfies `in_cluster`.
template <class Pred>
Subspace eigen_cluster(const EigenDecomposition& eig, Pred in_cluster) {
  const std::size_t d = eig.eigenvalues.size();
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < d; ++c)
    if (in_cluster(eig.eigenvalues[c])) cols.push_back(c);
  Matrix basis(d, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t r = 0; r < d; ++r) basis(r, k) = eig.eigenvectors(r, cols[k]);
  return Subspace(std::move(basis));
}

struct DominantSpace {
  Subspace space;
  double top = 0.0;
  double gap = 0.0;
};

DominantSpace dominant_cluster(const EigenDecomposition& eig, double cluster_tol) {
  const double top = eig.eigenvalues[0];
  const double tol = cluster_tol * std::max(1.0, std::abs(top));
  Subspace s = eigen_cluster(eig, [&](double lambda) { return top - lambda <= tol; });
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < eig.eigenvalues.size(); ++c)
    if (top - eig.eigenvalues[c] > tol) {
      gap = top - eig.eigenvalues[c];
      break;
    }
  return {std::move(s), top, gap};
}

}  // namespace

SpectralModel build_model(const Matrix& B, const Matrix& V, double cluster_tol) {
  if (!B.is_square() || !V.is_square() || B.rows() != V.rows())
    throw Error(ErrorCode::SizeMismatch, "B and V must be square with equal dimension");
  if (!B.all_finite() || !V.all_finite()) throw Error(ErrorCode::InvalidArgument, "non-finite weight entries");

  SpectralModel m;
  m.B = B;
  m.V = V;
  m.VBt = V * B.transpose();
  const auto sv = singular_extremes(B);
  m.sigma_min_B = sv.min;
  m.sigma_max_B = sv.max;
  if (!(sv.min > 1e-12)) throw Error(ErrorCode::Singular, "B is not invertible (sigma_min <= 1e-12)");

  m.vbt_symmetric = m.VBt.relative_asymmetry() <= kSymmetryTolerance;
  if (m.vbt_symmetric) {
    const auto eig = symmetric_eigendecomposition(m.VBt);
    auto dom = dominant_cluster(eig, cluster_tol);
    m.vbt_eigenvalues = eig.eigenvalues;
    m.mu1 = dom.top;
    m.gamma = dom.gap;
    m.mu2 = std::isinf(dom.gap) ? -std::numeric_limits<double>::infinity() : dom.top - dom.gap;
    m.E = std::move(dom.space);
  } else if (auto pair = dominant_real_eigenpair(m.VBt)) {
    m.mu1 = pair->value;
    m.E = Subspace::span({pair->vector});
  }

  const bool v_symmetric = V.relative_asymmetry() <= kSymmetryTolerance || V.is_diagonal();
  if (v_symmetric) {
    const auto eig = symmetric_eigendecomposition(V);
    auto dom = dominant_cluster(eig, cluster_tol);
    m.v_eigenvalues = eig.eigenvalues;
    m.gamma_V = dom.gap;
    m.F = std::move(dom.space);

    double top_abs = 0.0;
    for (double lambda : eig.eigenvalues) top_abs = std::max(top_abs, std::abs(lambda));
    const double tol = cluster_tol * std::max(1.0, top_abs);
    m.F_abs = eigen_cluster(eig, [&](double lambda) { return top_abs - std::abs(lambda) <= tol; });
  }
  return m;
}

// ---------------------------------------------------------------- Pi

Vector pi_map(const Subspace& s, std::span<const double> x, double eps_perp) {
  Vector u = s.project(x);
  const double len = norm(u);
  if (!(len > eps_perp)) throw Error(ErrorCode::InPerp, "point lies in the orthogonal complement (||P x|| <= eps_perp)");
  u *= 1.0 / len;
  return u;
}

Matrix pi_jacobian(const Subspace& s, std::span<const double> x, double eps_perp) {
  const Vector u = s.project(x);
  const double len = norm(u);
  if (!(len > eps_perp)) throw Error(ErrorCode::InPerp, "point lies in the orthogonal complement (||P x|| <= eps_perp)");
  Matrix j = s.projector();
  const double inv_len2 = 1.0 / (len * len);
  const std::size_t d = u.size();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) j(r, c) = (j(r, c) - u[r] * u[c] * inv_len2) / len;
  return j;
}

Ensemble pushforward_pi(const Ensemble& ensemble, const Subspace& s, double eps_perp) {
  Ensemble out(ensemble.size(), ensemble.dim(), ensemble.time());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    Vector image;
    try {
      image = pi_map(s, ensemble.token(i), eps_perp);
    } catch (const Error& e) {
      throw Error(ErrorCode::InPerp, "token " + std::to_string(i) + " has ||P x|| <= eps_perp");
    }
    std::copy(image.begin(), image.end(), out.token(i).begin());
  }
  return out;
}

}  // namespace attnsphere
