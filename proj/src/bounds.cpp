#include "attnsphere/bounds.hpp"

#include <cmath>
#include <limits>

#include "attnsphere/error.hpp"

namespace attnsphere {

void BoundParams::validate() const {
  if (!(C0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "C0 must be > 0");
  if (!(C1 > C0)) throw Error(ErrorCode::InvalidArgument, "C1 must exceed C0");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in (0, 1]");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  if (!(sigma_max_B > 0.0) || !(sigma_min_B > 0.0))
    throw Error(ErrorCode::InvalidArgument, "singular values of B must be > 0");
  if (!(v_p0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "V_p(rho0) must be >= 0");
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be > 0");
}

double temperature_scale(double beta) {
  if (std::isinf(beta)) return 0.0;
  return std::sqrt(std::log1p(beta) / beta);
}

double theorem_envelope(double t, const BoundParams& bp) {
  bp.validate();
  const double stability = 2.0 * temperature_scale(bp.beta) * (std::exp(bp.C1 * t) - std::exp(bp.C0 * t));
  const double contraction = bp.v_p0 * std::exp(-bp.p * bp.gamma / bp.sigma_max_B * t);
  return stability + contraction;
}

ZeroTempEnvelope zero_temp_envelope(double t, const BoundParams& bp, EnvelopeForm form) {
  bp.validate();
  const double rate = bp.p * bp.gamma / bp.sigma_max_B;
  if (form == EnvelopeForm::Lyapunov) {
    const double v = bp.v_p0 * std::exp(-2.0 * rate * t);
    return {v, v};
  }
  return {bp.v_p0 * std::exp(-rate * t), std::sqrt(2.0 * bp.v_p0) * std::exp(-rate * t)};
}

CorollaryWindow corollary_window(double eps, const BoundParams& bp) {
  bp.validate();
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be > 0");
  if (std::isinf(bp.beta)) throw Error(ErrorCode::InvalidArgument, "corollary window needs a finite beta");
  CorollaryWindow w;
  w.t1 = bp.sigma_max_B / (bp.p * bp.gamma) * std::log(2.0 * bp.v_p0 / eps);
  w.t2 = std::log1p(0.25 * eps * std::sqrt(bp.beta / std::log1p(bp.beta))) / bp.C1;
  w.valid = w.t1 < w.t2;
  return w;
}

double laplace_rhs(double r, double q, double beta, double sigma_min_B, double cap_mass) {
  if (!(cap_mass > 0.0)) throw Error(ErrorCode::EmptyCap, "cap carries no mass; the bound is vacuous");
  if (!(r > 0.0) || !(q > 0.0) || !(sigma_min_B > 0.0))
    throw Error(ErrorCode::InvalidArgument, "r, q and sigma_min(B) must be > 0");
  const double tail = std::isinf(beta) ? 0.0 : 2.0 * std::exp(-beta * q) / cap_mass;
  return std::sqrt(r * r + 2.0 * q / sigma_min_B) + tail;
}

LaplaceScales proof_laplace_scales(double beta, std::size_t dim) {
  const double q = static_cast<double>(dim) * std::log1p(beta) / (2.0 * beta);
  return {std::sqrt(q), q};
}

double envelope_argmin(const BoundParams& bp, double t_max) {
  bp.validate();
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = t_max;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = theorem_envelope(a, bp);
  double fb = theorem_envelope(b, bp);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, t_max); ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = theorem_envelope(a, bp);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = theorem_envelope(b, bp);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace attnsphere
