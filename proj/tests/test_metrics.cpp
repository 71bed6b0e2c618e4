#include <doctest.h>

#include <cmath>

#include "attnsphere/dynamics.hpp"
#include "attnsphere/error.hpp"
#include "attnsphere/harness/presets.hpp"
#include "attnsphere/metrics.hpp"
#include "attnsphere/rng.hpp"
#include "attnsphere/spectral.hpp"
#include "attnsphere/sphere.hpp"
#include "oracles.hpp"

using namespace attnsphere;

TEST_SUITE("metrics") {

TEST_CASE("W2 basics") {
  Rng rng(1);
  const auto a = sample_uniform_ensemble(30, 4, rng);
  CHECK(w2_empirical(a, a) == 0.0);
  const auto x = Ensemble::from_tokens({Vector{1.0, 0.0}});
  const auto y = Ensemble::from_tokens({Vector{0.0, 1.0}});
  CHECK(w2_empirical(x, y) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(w2_empirical(a, sample_uniform_ensemble(29, 4, rng)), Error);
  CHECK_THROWS_AS(w2_empirical(x, Ensemble::from_tokens({Vector{0.0, 1.0, 0.0}})), Error);
}

TEST_CASE("W2 matches permutation enumeration") {
  Rng rng(2);
  for (std::size_t n = 2; n <= 7; ++n)
    for (std::size_t d : {2u, 3u, 10u}) {
      const auto a = sample_uniform_ensemble(n, d, rng);
      const auto b = sample_uniform_ensemble(n, d, rng);
      CHECK(std::abs(w2_empirical(a, b) - oracle::brute_force_w2(a, b)) <= 1e-9);
    }
}

TEST_CASE("W2 against two-atom targets") {
  Rng rng(3);
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto a = sample_uniform_ensemble(n, 3, rng);
    Ensemble b(n, 3);
    for (std::size_t j = 0; j < n; ++j) b.token(j)[0] = (j % 3 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(w2_empirical(a, b) - oracle::brute_force_w2(a, b)) <= 1e-12);
    Ensemble one(n, 3);
    for (std::size_t j = 0; j < n; ++j) one.token(j)[2] = 1.0;
    CHECK(std::abs(w2_empirical(a, one) - oracle::brute_force_w2(a, one)) <= 1e-12);
  }
}

TEST_CASE("warm-started tracker agrees with cold solves") {
  Rng rng(4);
  const auto m = build_model(oracle::random_matrix(3, 3, rng) + 2.0 * Matrix::identity(3), Matrix::identity(3));
  const auto target = sample_uniform_ensemble(40, 3, rng);
  W2Tracker tracker(target);
  auto ens = sample_uniform_ensemble(40, 3, rng);
  SimConfig cfg;
  cfg.beta = 5.0;
  cfg.dt = 0.05;
  for (int k = 0; k < 20; ++k) {
    CHECK(tracker.distance(ens) == doctest::Approx(w2_empirical(ens, target)).epsilon(1e-12));
    ens = euler_step(ens, m, cfg);
  }
}

TEST_CASE("R_p values") {
  const Subspace s = Subspace::span({Vector{1.0, 0.0, 0.0}});
  CHECK(r_p(s, Vector{1.0, 0.0, 0.0}, 1.0) == 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  const Vector x{h, h, 0.0};
  for (double p : {1.0, 0.5, 0.25}) CHECK(r_p(s, x, p) == doctest::Approx(1.0));
  CHECK_THROWS_AS(r_p(s, Vector{0.0, 1.0, 0.0}, 1.0), Error);
  CHECK_THROWS_AS(r_p(s, x, 1.5), Error);
}

TEST_CASE("gradient of R_p") {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 3 + rep % 5;
    const Subspace s = Subspace::span({sample_uniform(d, rng), sample_uniform(d, rng)});
    const auto x = oracle::random_unit(d, rng);
    const double p = 0.2 + 0.8 * rng.uniform();
    const Vector g = grad_r_p(s, x, p);
    CHECK(std::abs(dot(g, x)) <= 1e-12 * std::max(1.0, norm(g)));
    auto fd = oracle::fd_gradient([&](const std::vector<double>& y) { return r_p(s, y, p); }, x, 1e-5);
    const Vector fdv = tangent_project(x, Vector(std::span<const double>(fd)));
    CHECK(std::sqrt(squared_distance(fdv, g)) <= 1e-5 * std::max(1.0, norm(g)));
  }
  const Subspace line = Subspace::span({Vector{1.0, 0.0}});
  CHECK_THROWS_AS(grad_r_p(line, Vector{1.0, 0.0}, 0.5), Error);
  CHECK(norm(grad_r_p(line, Vector{1.0, 0.0}, 1.0)) == 0.0);
}

TEST_CASE("Lyapunov drift inequality") {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = 3 + rep % 3;
    const Matrix B = oracle::random_matrix(d, d, rng) + 2.0 * Matrix::identity(d);
    const Matrix V = oracle::random_symmetric(d, rng) * invert(B.transpose());
    const auto m = build_model(B, V);
    REQUIRE(m.symmetric_theory_applies());
    for (int k = 0; k < 100; ++k) {
      const Vector x = sample_uniform(d, rng);
      const double p = rep % 2 ? 1.0 : 0.5;
      const double lhs = dot(grad_r_p(*m.E, x, p), zero_temp_drift(x, m));
      const double weak = -(2.0 * p * m.gamma / m.sigma_max_B) * r_p(*m.E, x, p) * norm(B.transpose().apply(x)) / m.sigma_max_B;
      CHECK(lhs <= weak + 1e-12);
      CHECK(weak <= 0.0);
    }
  }
}

TEST_CASE("V_p") {
  const Subspace s = Subspace::span({Vector{1.0, 0.0, 0.0}});
  const auto in_s = Ensemble::from_tokens({Vector{1.0, 0.0, 0.0}, Vector{-1.0, 0.0, 0.0}});
  CHECK(v_p(in_s, s, 1.0) == 0.0);
  // R_1 = tan^2: 1 at 45 degrees, 3 at 60 degrees
  const auto two = Ensemble::from_tokens({Vector{std::sqrt(0.5), std::sqrt(0.5), 0.0}, Vector{0.5, 0.0, std::sqrt(0.75)}});
  CHECK(v_p(two, s, 1.0) == doctest::Approx(2.0));
  const auto perp = Ensemble::from_tokens({Vector{0.0, 1.0, 0.0}});
  CHECK(std::isinf(v_p(perp, s, 1.0)));
}

TEST_CASE("alignment") {
  const Subspace s = Subspace::span({Vector{1.0, 0.0, 0.0}, Vector{0.0, 1.0, 0.0}});
  CHECK(alignment(Ensemble::from_tokens({Vector{0.6, 0.8, 0.0}}), s) == doctest::Approx(1.0));
  CHECK(alignment(Ensemble::from_tokens({Vector{0.0, 0.0, 1.0}}), s) == 0.0);
  Rng rng(7);
  const auto ens = sample_uniform_ensemble(10000, 10, rng);
  std::vector<Vector> basis;
  for (std::size_t k = 0; k < 3; ++k) basis.push_back(sample_uniform(10, rng));
  CHECK(std::abs(alignment(ens, Subspace::span(basis)) - 0.3) <= 0.03);
}

TEST_CASE("interaction energy") {
  Rng rng(8);
  const Matrix B = oracle::random_symmetric(3, rng);
  const Vector x = sample_uniform(3, rng);
  Ensemble collapsed(5, 3);
  for (std::size_t i = 0; i < 5; ++i) std::copy(x.begin(), x.end(), collapsed.token(i).begin());
  CHECK(interaction_energy(collapsed, B) == doctest::Approx(std::exp(dot(x, B.apply(x)))).epsilon(1e-14));
  CHECK(interaction_energy(sample_uniform_ensemble(9, 3, rng), Matrix(3, 3)) == doctest::Approx(1.0));

  const auto eig = symmetric_eigendecomposition(B);
  const Vector v = eig.eigenvectors.column(1);
  const double lambda = eig.eigenvalues[1];
  const auto bip = Ensemble::from_tokens({v, -1.0 * v});
  CHECK(std::abs(interaction_energy(bip, B) - 0.5 * (std::exp(lambda) + std::exp(-lambda))) <= 1e-12);
}

TEST_CASE("Laplace residual") {
  const Matrix B = Matrix::diagonal(std::vector<double>{1.0, 2.0, 3.0});
  const Vector x = retract(Vector{0.3, -0.2, 0.9});
  const Vector y = laplace_maximizer(B, x);
  CHECK(laplace_residual(Ensemble::from_tokens({y}), B, 50.0, x) < 1e-15);
  CHECK(laplace_residual(Ensemble::from_tokens({y, -1.0 * y}), B, 0.0, x) == doctest::Approx(1.0));
}

}
