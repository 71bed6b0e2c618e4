#pragma once

// Closed-form concentration envelopes for overlay against simulated metrics.
// C0 and C1 are existence constants with no closed form; callers supply them.

#include <cstddef>

namespace attnsphere {

struct BoundParams {
  double C0 = 1.0;
  double C1 = 2.0;
  double p = 1.0;
  double gamma = 1.0;
  double sigma_max_B = 1.0;
  double sigma_min_B = 1.0;
  double v_p0 = 1.0;  ///< V_p(rho_0)
  double beta = 1.0;  ///< may be +inf

  /// Throws InvalidArgument unless C1 > C0 > 0, p in (0,1] and the
  /// remaining positivity constraints hold.
  void validate() const;
};

/// sqrt(log(beta + 1) / beta); 0 for beta = inf.
double temperature_scale(double beta);

/// 2 sqrt(log(beta+1)/beta) (e^{C1 t} - e^{C0 t}) + V_p(rho0) exp(-p gamma t / sigma_max(B))
double theorem_envelope(double t, const BoundParams& bp);

enum class EnvelopeForm { W2, Lyapunov };

struct ZeroTempEnvelope {
  /// W2 form: V_p(rho0) exp(-p gamma t / sigma_max), as stated.
  /// Lyapunov form: V_p(rho0) exp(-2 p gamma t / sigma_max).
  double value = 0.0;
  /// W2 form only: sqrt(2 V_p(rho0)) exp(-p gamma t / sigma_max), the
  /// prefactor produced by the W2 <= sqrt(2 V_p) step. Equal to `value` for
  /// the Lyapunov form.
  double proof_value = 0.0;
};

ZeroTempEnvelope zero_temp_envelope(double t, const BoundParams& bp, EnvelopeForm form);

struct CorollaryWindow {
  double t1 = 0.0;
  double t2 = 0.0;
  bool valid = false;  ///< t1 < t2
};

/// t1 = sigma_max/(p gamma) log(2 V_p(rho0)/eps),
/// t2 = (1/C1) log(1 + (eps/4) sqrt(beta / log(beta+1))).
CorollaryWindow corollary_window(double eps, const BoundParams& bp);

/// sqrt(r^2 + 2q/sigma_min(B)) + 2 e^{-beta q} / cap_mass. Throws EmptyCap
/// when cap_mass == 0.
double laplace_rhs(double r, double q, double beta, double sigma_min_B, double cap_mass);

/// Radius/threshold pair used by the stability argument:
/// q = d log(beta+1) / (2 beta), r = sqrt(q).
struct LaplaceScales {
  double r = 0.0;
  double q = 0.0;
};
LaplaceScales proof_laplace_scales(double beta, std::size_t dim);

/// argmin over [0, t_max] of theorem_envelope (convex in t), by golden section.
double envelope_argmin(const BoundParams& bp, double t_max);

}  // namespace attnsphere
