#pragma once

#include <cstdint>

namespace attnsphere {

/// Counter-based generator: the k-th draw is splitmix64(seed + k * golden).
/// The stream depends only on (seed, counter), never on the standard library,
/// so sample sequences and therefore CSV outputs are identical across builds.
/// Normals use the Box-Muller transform on two uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1]; safe for log().
  double uniform_positive();
  double normal();
  /// Marsaglia-Tsang, with the U^{1/a} boost for shape < 1.
  double gamma(double shape);
  double beta(double a, double b);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Derives an independent stream seed from a parent seed and a stream id.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace attnsphere
