#pragma once

// Dense small-dimension linear algebra. Dimensions in this project stay
// below ~64, so everything is row-major std::vector storage and O(d^3)
// algorithms.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace attnsphere {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::span<const double> values) : data_(values.begin(), values.end()) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  operator std::span<const double>() const noexcept { return data_; }

  Vector& operator+=(std::span<const double> other);
  Vector& operator-=(std::span<const double> other);
  Vector& operator*=(double s);

  bool operator==(const Vector&) const = default;

  static Vector unit(std::size_t n, std::size_t axis);

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, std::span<const double> b);
Vector operator-(Vector a, std::span<const double> b);
Vector operator*(double s, Vector a);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Row-wise literal, e.g. Matrix{{1, 2}, {3, 4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> entries);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;

  std::span<const double> values() const noexcept { return data_; }

  Matrix transpose() const;
  Vector apply(std::span<const double> x) const;
  /// out = M x, out must have rows() entries.
  void apply_into(std::span<const double> x, std::span<double> out) const;

  double frobenius_norm() const;
  double max_abs() const;
  /// ||M - M^T||_F / max(||M||_F, tiny); zero for exactly symmetric input.
  double relative_asymmetry() const;
  bool is_diagonal(double tol = 0.0) const;
  double trace() const;
  bool all_finite() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// Columns of `vectors` are orthonormal eigenvectors; eigenvalues descend.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

inline constexpr double kSymmetryTolerance = 1e-10;

/// Cyclic Jacobi. Throws NonSymmetric / NonConvergent.
EigenDecomposition symmetric_eigendecomposition(const Matrix& m);

struct SingularExtremes {
  double min = 0.0;
  double max = 0.0;
};

SingularExtremes singular_extremes(const Matrix& m);

/// Throws Singular when sigma_min(m) <= 1e-12.
Matrix invert(const Matrix& m);

/// Real eigenpair with the largest real part of a general square matrix,
/// found by shifted power iteration. Empty when the iteration does not settle
/// (complex leading pair, or a defective/degenerate top eigenvalue).
struct RealEigenpair {
  double value = 0.0;
  Vector vector;
};
std::optional<RealEigenpair> dominant_real_eigenpair(const Matrix& m);

}  // namespace attnsphere
