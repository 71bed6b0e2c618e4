#include "attnsphere/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attnsphere/error.hpp"
#include "attnsphere/sphere.hpp"
#include "attention_kernel.hpp"

namespace attnsphere {

void SimConfig::validate() const {
  std::vector<std::string> problems;
  if (!(beta > 0.0) || std::isnan(beta)) problems.emplace_back("beta must be > 0 or inf");
  if (!(dt > 0.0) || !std::isfinite(dt)) problems.emplace_back("dt must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) problems.emplace_back("t_final must be > 0");
  if (dt > t_final) problems.emplace_back("dt must not exceed t_final");
  if (record_stride == 0) problems.emplace_back("record_stride must be positive");
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::ValidationError, msg);
  }
}

std::size_t SimConfig::step_count() const {
  const double ratio = t_final / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

namespace {

/// Rows of B x_j for every token j.
std::vector<double> apply_to_tokens(const Matrix& m, const Ensemble& ensemble) {
  const std::size_t n = ensemble.size();
  const std::size_t d = ensemble.dim();
  std::vector<double> out(n * d);
  for (std::size_t j = 0; j < n; ++j) m.apply_into(ensemble.token(j), {out.data() + j * d, d});
  return out;
}

/// Softmax of beta <x, By_j> over j, from precomputed By_j rows.
void softmax_row(std::span<const double> x, std::span<const double> b_tokens, std::size_t n, std::size_t d,
                 double beta, std::span<double> weights) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double* by = b_tokens.data() + j * d;
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += x[k] * by[k];
    weights[j] = beta * s;
    top = std::max(top, weights[j]);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    weights[j] = std::exp(weights[j] - top);
    total += weights[j];
  }
  const double inv = 1.0 / total;
  for (std::size_t j = 0; j < n; ++j) weights[j] *= inv;
}

void weighted_mean(const Ensemble& ensemble, std::span<const double> weights, std::span<double> out) {
  const std::size_t d = ensemble.dim();
  std::fill(out.begin(), out.end(), 0.0);
  const double* coords = ensemble.coords().data();
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    const double w = weights[j];
    const double* y = coords + j * d;
    for (std::size_t k = 0; k < d; ++k) out[k] += w * y[k];
  }
}

void project_tangent_into(std::span<const double> x, std::span<double> v) {
  const double c = dot(x, v);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * x[k];
}

void check_finite_beta(double beta) {
  if (!std::isfinite(beta) || beta < 0.0)
    throw Error(ErrorCode::InvalidArgument, "finite, nonnegative beta required");
}

}  // namespace

std::vector<double> softmax_weights(const Ensemble& ensemble, const Matrix& B, double beta, std::size_t i) {
  check_finite_beta(beta);
  const auto b_tokens = apply_to_tokens(B, ensemble);
  std::vector<double> w(ensemble.size());
  softmax_row(ensemble.token(i), b_tokens, ensemble.size(), ensemble.dim(), beta, w);
  return w;
}

Vector attention_consensus(const Ensemble& ensemble, const Matrix& B, double beta, std::size_t i) {
  const auto w = softmax_weights(ensemble, B, beta, i);
  Vector m(ensemble.dim());
  weighted_mean(ensemble, w, m.span());
  return m;
}

Vector consensus_at(const Ensemble& ensemble, const Matrix& B, double beta, std::span<const double> x) {
  check_finite_beta(beta);
  const auto b_tokens = apply_to_tokens(B, ensemble);
  std::vector<double> w(ensemble.size());
  softmax_row(x, b_tokens, ensemble.size(), ensemble.dim(), beta, w);
  Vector m(ensemble.dim());
  weighted_mean(ensemble, w, m.span());
  return m;
}

Vector cbo_consensus(const Ensemble& ensemble, const Matrix& B, double beta, std::span<const double> x) {
  check_finite_beta(beta);
  const std::size_t n = ensemble.size();
  const std::size_t d = ensemble.dim();
  std::vector<double> logits(n);
  Vector diff(d);
  Vector b_diff(d);
  Vector b_y(d);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const auto y = ensemble.token(j);
    for (std::size_t k = 0; k < d; ++k) diff[k] = x[k] - y[k];
    B.apply_into(diff, b_diff.span());
    B.apply_into(y, b_y.span());
    const double kernel_exponent = -0.5 * beta * dot(diff, b_diff);
    const double objective = -0.5 * dot(y, b_y);  // J(y) = -1/2 ||y||_B^2
    logits[j] = kernel_exponent - beta * objective;
    top = std::max(top, logits[j]);
  }
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logits) l /= total;
  Vector m(d);
  weighted_mean(ensemble, logits, m.span());
  return m;
}

Vector finite_beta_drift(const Ensemble& ensemble, const SpectralModel& model, double beta, std::size_t i) {
  const Vector m = attention_consensus(ensemble, model.B, beta, i);
  Vector v = model.V.apply(m);
  project_tangent_into(ensemble.token(i), v.span());
  return v;
}

Vector zero_temp_drift(std::span<const double> x, const SpectralModel& model) {
  Vector bt_x = model.B.transpose().apply(x);
  const double len = norm(bt_x);
  bt_x *= 1.0 / len;
  Vector v = model.V.apply(bt_x);
  project_tangent_into(x, v.span());
  return v;
}

std::vector<double> drift_field(const Ensemble& ensemble, const SpectralModel& model, double beta) {
  const std::size_t n = ensemble.size();
  const std::size_t d = ensemble.dim();
  std::vector<double> drift(n * d);
  Vector m(d);

  if (beta == kInfiniteBeta) {
    const Matrix bt = model.B.transpose();
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = ensemble.token(i);
      bt.apply_into(x, m.span());
      m *= 1.0 / norm(m);
      std::span<double> out{drift.data() + i * d, d};
      model.V.apply_into(m, out);
      project_tangent_into(x, out);
    }
    return drift;
  }

  check_finite_beta(beta);
  const auto b_tokens = apply_to_tokens(model.B, ensemble);
  std::vector<double> bx_major(n * d);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < d; ++k) bx_major[k * n + j] = b_tokens[j * d + k];
  std::vector<double> means(n * d);
  detail::attention_means(ensemble.coords().data(), bx_major.data(), n, d, beta, means.data());
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> out{drift.data() + i * d, d};
    model.V.apply_into(std::span<const double>(means.data() + i * d, d), out);
    project_tangent_into(ensemble.token(i), out);
  }
  return drift;
}

Ensemble euler_step(const Ensemble& ensemble, const SpectralModel& model, const SimConfig& config) {
  const auto drift = drift_field(ensemble, model, config.beta);
  const std::size_t d = ensemble.dim();
  Ensemble next(ensemble.size(), d, ensemble.time() + config.dt);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto x = ensemble.token(i);
    auto y = next.token(i);
    for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + config.dt * drift[i * d + k];
    retract_in_place(y);
  }
  return next;
}

Trajectory simulate(const Ensemble& init, const SpectralModel& model, const SimConfig& config,
                    std::span<const Observer> observers) {
  config.validate();
  if (init.dim() != model.B.rows()) throw Error(ErrorCode::SizeMismatch, "ensemble and model dimensions differ");
  if (init.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty ensemble");

  Trajectory traj;
  traj.config = config;
  const std::size_t steps = config.step_count();

  Ensemble current = init;
  current.set_time(0.0);
  auto record = [&](std::size_t step) {
    for (const auto& obs : observers) obs(step, current.time(), current);
    if (config.keep_snapshots) traj.snapshots.push_back(current);
  };

  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    current = euler_step(current, model, config);
    current.set_time(static_cast<double>(step) * config.dt);
    if (step % config.record_stride == 0 || step == steps) record(step);
  }
  return traj;
}

}  // namespace attnsphere
