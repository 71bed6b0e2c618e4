#include "attnsphere/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attnsphere/error.hpp"

namespace attnsphere {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NearZero: return "NearZero";
    case ErrorCode::InPerp: return "InPerp";
    case ErrorCode::InSubspace: return "InSubspace";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::EmptyCap: return "EmptyCap";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::AssumptionViolation: return "AssumptionViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Vector

Vector& Vector::operator+=(std::span<const double> other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other[i];
  return *this;
}

Vector& Vector::operator-=(std::span<const double> other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Vector Vector::unit(std::size_t n, std::size_t axis) {
  Vector e(n);
  e[axis] = 1.0;
  return e;
}

Vector operator+(Vector a, std::span<const double> b) { return a += b; }
Vector operator-(Vector a, std::span<const double> b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector Matrix::apply(std::span<const double> x) const {
  Vector out(rows_);
  apply_into(x, out.span());
  return out;
}

void Matrix::apply_into(std::span<const double> x, std::span<double> out) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row_ptr = data_.data() + r * cols_;
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += row_ptr[c] * x[c];
    out[r] = s;
  }
}

double Matrix::frobenius_norm() const { return norm(data_); }

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::relative_asymmetry() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c) {
      const double d = (*this)(r, c) - (*this)(c, r);
      diff += 2.0 * d * d;
    }
  const double scale = frobenius_norm();
  if (diff == 0.0) return 0.0;
  return std::sqrt(diff) / std::max(scale, std::numeric_limits<double>::min());
}

bool Matrix::is_diagonal(double tol) const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (r != c && std::abs((*this)(r, c)) > tol) return false;
  return true;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::all_finite() const { return attnsphere::all_finite(data_); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::SizeMismatch, "matrix product dimensions");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::SizeMismatch, "matrix sum dimensions");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  return out;
}

// ---------------------------------------------------------------- eigen

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += a(r, c) * a(r, c);
  return std::sqrt(s);
}

constexpr int kMaxSweeps = 100;

}  // namespace

EigenDecomposition symmetric_eigendecomposition(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSymmetric, "matrix is not square");
  if (m.relative_asymmetry() > kSymmetryTolerance)
    throw Error(ErrorCode::NonSymmetric, "relative asymmetry exceeds 1e-10");

  const std::size_t n = m.rows();
  // Work on the exactly symmetrized copy so tiny asymmetries do not bias rotations.
  Matrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + m(c, r));
  Matrix q = Matrix::identity(n);

  const double threshold = 1e-12 * a.frobenius_norm();
  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep++ >= kMaxSweeps) throw Error(ErrorCode::NonConvergent, "Jacobi sweep budget exhausted");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t k = p + 1; k < n; ++k) {
        const double apk = a(p, k);
        if (apk == 0.0) continue;
        const double theta = (a(k, k) - a(p, p)) / (2.0 * apk);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double ark = a(r, k);
          a(r, p) = c * arp - s * ark;
          a(r, k) = s * arp + c * ark;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double akr = a(k, r);
          a(p, r) = c * apr - s * akr;
          a(k, r) = s * apr + c * akr;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double qrp = q(r, p);
          const double qrk = q(r, k);
          q(r, p) = c * qrp - s * qrk;
          q(r, k) = s * qrp + c * qrk;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = a(src, src);
    // Sign convention: the largest-magnitude entry of each eigenvector is positive.
    std::size_t pivot = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(q(r, src)) > std::abs(q(pivot, src))) pivot = r;
    const double sign = q(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = sign * q(r, src);
  }
  return out;
}

SingularExtremes singular_extremes(const Matrix& m) {
  const Matrix gram = m.transpose() * m;
  const auto eig = symmetric_eigendecomposition(gram);
  const std::size_t n = eig.eigenvalues.size();
  if (n == 0) return {};
  return {std::sqrt(std::max(0.0, eig.eigenvalues[n - 1])), std::sqrt(std::max(0.0, eig.eigenvalues[0]))};
}

Matrix invert(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::Singular, "matrix is not square");
  if (singular_extremes(m).min <= 1e-12) throw Error(ErrorCode::Singular, "sigma_min <= 1e-12");

  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(col, c), a(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    }
    const double diag = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= diag;
      inv(col, c) /= diag;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

std::optional<RealEigenpair> dominant_real_eigenpair(const Matrix& m) {
  if (!m.is_square() || m.rows() == 0) return std::nullopt;
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.frobenius_norm());
  // Shifting by sigma_max moves the whole spectrum into the closed right half
  // plane, so the largest real eigenvalue becomes the largest in modulus.
  const double shift = singular_extremes(m).max;

  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i) + 0.01 * static_cast<double>(i * i);
  v *= 1.0 / norm(v);

  Vector w(n);
  constexpr int kMaxIterations = 20000;
  for (int it = 0; it < kMaxIterations; ++it) {
    m.apply_into(v, w.span());
    const double rayleigh = dot(v, w);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - rayleigh * v[i];
      residual += r * r;
    }
    if (std::sqrt(residual) <= 1e-11 * scale) return RealEigenpair{rayleigh, v};
    for (std::size_t i = 0; i < n; ++i) w[i] += shift * v[i];
    const double len = norm(w);
    if (len == 0.0) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / len;
  }
  return std::nullopt;
}

}  // namespace attnsphere
