#pragma once

// Self-attention token dynamics on the sphere.
//
//   finite beta:  x_i' = P_{x_i}( V m_i ),  m_i = sum_j softmax_j(beta <x_i, B x_j>) x_j
//   beta = inf:   x_i' = P_{x_i}( V B^T x_i / ||B^T x_i|| )
//
// Both are integrated by synchronous explicit Euler followed by retraction
// onto the sphere. beta = +inf selects the decoupled zero-temperature flow;
// it is not the hardmax limit of the finite-beta scheme.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "attnsphere/ensemble.hpp"
#include "attnsphere/linalg.hpp"
#include "attnsphere/spectral.hpp"

namespace attnsphere {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct SimConfig {
  double beta = 1.0;  ///< > 0, or kInfiniteBeta
  double dt = 0.01;
  double t_final = 1.0;
  std::size_t record_stride = 1;
  std::uint64_t seed = 0;
  bool keep_snapshots = true;

  bool zero_temperature() const noexcept { return beta == kInfiniteBeta; }
  /// Throws ValidationError on violated invariants.
  void validate() const;
  /// ceil(t_final / dt), robust to representation error in the ratio.
  std::size_t step_count() const;
};

struct Trajectory {
  std::vector<Ensemble> snapshots;
  SimConfig config;
};

/// Called at t = 0, every record_stride steps, and at the final step.
using Observer = std::function<void(std::size_t step, double time, const Ensemble& ensemble)>;

std::vector<double> softmax_weights(const Ensemble& ensemble, const Matrix& B, double beta, std::size_t i);

Vector attention_consensus(const Ensemble& ensemble, const Matrix& B, double beta, std::size_t i);

/// Softmax consensus m_{beta,rho}(x) = sum_j w_j(x) y_j with w_j ~ exp(beta <x, B y_j>)
/// at an arbitrary probe x (not necessarily a token).
Vector consensus_at(const Ensemble& ensemble, const Matrix& B, double beta, std::span<const double> x);

/// Kernelized consensus point with J(y) = -1/2 <y, By> and
/// kappa(x, y) = exp(-beta/2 <x - y, B (x - y)>), evaluated at any probe x.
Vector cbo_consensus(const Ensemble& ensemble, const Matrix& B, double beta, std::span<const double> x);

Vector finite_beta_drift(const Ensemble& ensemble, const SpectralModel& model, double beta, std::size_t i);

Vector zero_temp_drift(std::span<const double> x, const SpectralModel& model);

/// All drifts for one ensemble, row-major n x d (synchronous evaluation).
std::vector<double> drift_field(const Ensemble& ensemble, const SpectralModel& model, double beta);

Ensemble euler_step(const Ensemble& ensemble, const SpectralModel& model, const SimConfig& config);

Trajectory simulate(const Ensemble& init, const SpectralModel& model, const SimConfig& config,
                    std::span<const Observer> observers = {});

}  // namespace attnsphere
