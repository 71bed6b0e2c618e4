#pragma once

// Geometry of the unit sphere S^{d-1} and sampling of initial token clouds.

#include <cstddef>
#include <span>
#include <vector>

#include "attnsphere/ensemble.hpp"
#include "attnsphere/linalg.hpp"
#include "attnsphere/rng.hpp"

namespace attnsphere {

/// P_x(y) = y - <x, y> x.
Vector tangent_project(std::span<const double> x, std::span<const double> y);

/// v / ||v||; throws NearZero when ||v|| <= 1e-12.
Vector retract(std::span<const double> v);
void retract_in_place(std::span<double> v);

Vector sample_uniform(std::size_t dim, Rng& rng);

struct VmfComponent {
  Vector mean_direction;  ///< normalized on construction of the mixture
  double concentration = 0.0;
  double weight = 0.0;
};

/// Mixture of von Mises-Fisher laws, p(x) ~ sum_i w_i exp(kappa_i mu_i^T x).
class VmfMixture {
 public:
  /// Means may be unnormalized; weights must be nonnegative and sum to 1
  /// within 1e-12. Throws InvalidArgument otherwise.
  explicit VmfMixture(std::vector<VmfComponent> components);

  const std::vector<VmfComponent>& components() const noexcept { return components_; }
  std::size_t dim() const noexcept { return components_.front().mean_direction.size(); }

 private:
  std::vector<VmfComponent> components_;
};

/// One vMF draw around a unit mean (Wood's tangent-normal rejection scheme).
Vector sample_vmf(std::span<const double> mean_direction, double concentration, Rng& rng);
Vector sample_vmf_mixture(const VmfMixture& mixture, Rng& rng);

Ensemble sample_uniform_ensemble(std::size_t n, std::size_t dim, Rng& rng);
Ensemble sample_vmf_ensemble(std::size_t n, const VmfMixture& mixture, Rng& rng);

/// Fraction of tokens y with chordal distance ||y - center|| <= radius.
double cap_mass(const Ensemble& ensemble, std::span<const double> center, double radius);

}  // namespace attnsphere
