// Quick self-check of core invariants, runnable on any machine in a few
// seconds. Each check prints one line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "attnsphere/dynamics.hpp"
#include "attnsphere/metrics.hpp"
#include "attnsphere/rng.hpp"
#include "attnsphere/spectral.hpp"
#include "attnsphere/sphere.hpp"

using namespace attnsphere;

namespace {

Matrix random_matrix(std::size_t d, Rng& rng) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) m(i, k) = rng.normal();
  return m;
}

Matrix random_symmetric(std::size_t d, Rng& rng) {
  const Matrix a = random_matrix(d, rng);
  return 0.5 * (a + a.transpose());
}

double brute_force_w2(const Ensemble& a, const Ensemble& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += squared_distance(a.token(i), b.token(perm[i]));
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(a.size()));
}

double check_eigen(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix m = random_symmetric(2 + rep % 6, rng);
    const auto eig = symmetric_eigendecomposition(m);
    const std::size_t d = m.rows();
    Matrix lambda(d, d);
    for (std::size_t i = 0; i < d; ++i) lambda(i, i) = eig.eigenvalues[i];
    const Matrix rebuilt = eig.eigenvectors * lambda * eig.eigenvectors.transpose();
    worst = std::max(worst, (rebuilt - m).max_abs());
  }
  return worst;
}

double check_w2(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rep % 5;
    const auto a = sample_uniform_ensemble(n, 3, rng);
    const auto b = sample_uniform_ensemble(n, 3, rng);
    worst = std::max(worst, std::abs(w2_empirical(a, b) - brute_force_w2(a, b)));
  }
  return worst;
}

double check_cbo(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t d = 2 + rep % 4;
    const Matrix B = random_symmetric(d, rng);
    const auto ens = sample_uniform_ensemble(10, d, rng);
    const double beta = 1.0 + 10.0 * rng.uniform();
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const auto a = attention_consensus(ens, B, beta, i);
      const auto c = cbo_consensus(ens, B, beta, ens.token(i));
      worst = std::max(worst, std::sqrt(squared_distance(a, c)));
    }
  }
  return worst;
}

double check_tangent(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = 3 + rep % 3;
    const auto model = build_model(random_matrix(d, rng) + 3.0 * Matrix::identity(d), random_matrix(d, rng));
    const auto ens = sample_uniform_ensemble(20, d, rng);
    for (double beta : {2.0, kInfiniteBeta}) {
      const auto drift = drift_field(ens, model, beta);
      for (std::size_t i = 0; i < ens.size(); ++i)
        worst = std::max(worst, std::abs(dot(ens.token(i), std::span<const double>(drift.data() + i * d, d))));
    }
  }
  return worst;
}

double check_grad_r(Rng& rng) {
  double worst = 0.0;
  const Subspace s = Subspace::span({Vector{1.0, 0.0, 0.0}, Vector{0.0, 1.0, 1.0}});
  for (int rep = 0; rep < 50; ++rep) {
    const Vector x = sample_uniform(3, rng);
    const double p = 0.25 + 0.75 * rng.uniform();
    const Vector g = grad_r_p(s, x, p);
    const double h = 1e-6;
    for (std::size_t k = 0; k < 3; ++k) {
      Vector xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (r_p(s, xp, p) - r_p(s, xm, p)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[k]) / std::max(1.0, std::abs(g[k])));
    }
  }
  return worst;
}

double check_stationary(Rng&) {
  const auto model = build_model(Matrix::identity(2), Matrix::diagonal(std::vector<double>{1.0, 2.0}));
  Ensemble collapsed(5, 2);
  for (std::size_t i = 0; i < 5; ++i) collapsed.token(i)[1] = 1.0;
  double worst = 0.0;
  for (double beta : {1.0, 50.0, kInfiniteBeta})
    for (double v : drift_field(collapsed, model, beta)) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace

int run_verify(bool quiet) {
  struct Check {
    const char* name;
    std::function<double(Rng&)> run;
    double tol;
  };
  const std::vector<Check> checks = {
      {"symmetric eigendecomposition reconstructs the matrix", check_eigen, 1e-10},
      {"exact W2 matches permutation enumeration", check_w2, 1e-9},
      {"kernelized consensus equals attention consensus", check_cbo, 1e-12},
      {"drift is tangent to the sphere", check_tangent, 1e-12},
      {"gradient of R_p matches central differences", check_grad_r, 1e-5},
      {"collapsed eigenvector ensemble is stationary", check_stationary, 1e-12},
  };
  Rng rng(20260101);
  int failures = 0;
  for (const auto& c : checks) {
    const double err = c.run(rng);
    const bool ok = err <= c.tol;
    failures += ok ? 0 : 1;
    if (!quiet || !ok) std::printf("%s  %-55s err=%.3e tol=%.0e\n", ok ? "PASS" : "FAIL", c.name, err, c.tol);
  }
  std::printf("%s: %d of %zu checks failed\n", failures ? "FAILED" : "OK", failures, checks.size());
  return failures ? 2 : 0;
}
