#include "attnsphere/sphere.hpp"

#include <cmath>

#include "attnsphere/error.hpp"

namespace attnsphere {

// ---------------------------------------------------------------- Ensemble

Ensemble::Ensemble(std::size_t dim, std::vector<double> coords, double time)
    : n_(dim == 0 ? 0 : coords.size() / dim), dim_(dim), time_(time), coords_(std::move(coords)) {
  if (dim == 0 || coords_.size() % dim != 0)
    throw Error(ErrorCode::InvalidArgument, "coordinate count is not a multiple of the dimension");
}

Ensemble Ensemble::from_tokens(const std::vector<Vector>& tokens, double time) {
  if (tokens.empty()) throw Error(ErrorCode::InvalidArgument, "empty token list");
  const std::size_t dim = tokens.front().size();
  std::vector<double> coords;
  coords.reserve(tokens.size() * dim);
  for (const auto& t : tokens) {
    if (t.size() != dim) throw Error(ErrorCode::SizeMismatch, "tokens of differing dimension");
    coords.insert(coords.end(), t.begin(), t.end());
  }
  return Ensemble(dim, std::move(coords), time);
}

double Ensemble::max_norm_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) worst = std::max(worst, std::abs(norm(token(i)) - 1.0));
  return worst;
}

Ensemble Ensemble::permuted(std::span<const std::size_t> perm) const {
  Ensemble out(n_, dim_, time_);
  for (std::size_t k = 0; k < n_; ++k) {
    const auto src = token(perm[k]);
    std::copy(src.begin(), src.end(), out.token(k).begin());
  }
  return out;
}

// ---------------------------------------------------------------- geometry

Vector tangent_project(std::span<const double> x, std::span<const double> y) {
  const double c = dot(x, y);
  Vector out(y);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * x[i];
  return out;
}

void retract_in_place(std::span<double> v) {
  const double len = norm(v);
  if (!(len > 1e-12)) throw Error(ErrorCode::NearZero, "cannot retract a vector of norm <= 1e-12");
  for (double& c : v) c /= len;
}

Vector retract(std::span<const double> v) {
  Vector out(v);
  retract_in_place(out.span());
  return out;
}

Vector sample_uniform(std::size_t dim, Rng& rng) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "sphere dimension d must be >= 2");
  Vector g(dim);
  double len = 0.0;
  do {
    for (std::size_t i = 0; i < dim; ++i) g[i] = rng.normal();
    len = norm(g);
  } while (len < 1e-300);
  g *= 1.0 / len;
  return g;
}

// ---------------------------------------------------------------- vMF

VmfMixture::VmfMixture(std::vector<VmfComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "vMF mixture needs a component");
  const std::size_t dim = components_.front().mean_direction.size();
  double total = 0.0;
  for (auto& c : components_) {
    if (c.mean_direction.size() != dim) throw Error(ErrorCode::SizeMismatch, "vMF means of differing dimension");
    if (c.weight < 0.0) throw Error(ErrorCode::InvalidArgument, "negative vMF weight");
    if (c.concentration < 0.0) throw Error(ErrorCode::InvalidArgument, "negative vMF concentration");
    c.mean_direction = retract(c.mean_direction);
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "vMF weights must sum to 1");
}

Vector sample_vmf(std::span<const double> mean_direction, double concentration, Rng& rng) {
  const std::size_t dim = mean_direction.size();
  if (concentration == 0.0) return sample_uniform(dim, rng);

  // Wood (1994): draw w = <x, mu> by rejection, then a uniform tangent direction.
  const double m1 = static_cast<double>(dim - 1);
  const double kappa = concentration;
  const double b = m1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m1 * m1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + m1 * std::log(1.0 - x0 * x0);
  double w = 0.0;
  for (;;) {
    const double z = rng.beta(0.5 * m1, 0.5 * m1);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform_positive();
    if (kappa * w + m1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  Vector tangent;
  double len = 0.0;
  do {
    Vector g(dim);
    for (std::size_t i = 0; i < dim; ++i) g[i] = rng.normal();
    tangent = tangent_project(mean_direction, g);
    len = norm(tangent);
  } while (len < 1e-12);
  tangent *= 1.0 / len;

  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  Vector x(dim);
  for (std::size_t i = 0; i < dim; ++i) x[i] = w * mean_direction[i] + s * tangent[i];
  retract_in_place(x.span());
  return x;
}

Vector sample_vmf_mixture(const VmfMixture& mixture, Rng& rng) {
  const auto& comps = mixture.components();
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t chosen = comps.size() - 1;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    acc += comps[k].weight;
    if (u < acc) {
      chosen = k;
      break;
    }
  }
  return sample_vmf(comps[chosen].mean_direction, comps[chosen].concentration, rng);
}

Ensemble sample_uniform_ensemble(std::size_t n, std::size_t dim, Rng& rng) {
  Ensemble e(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = sample_uniform(dim, rng);
    std::copy(x.begin(), x.end(), e.token(i).begin());
  }
  return e;
}

Ensemble sample_vmf_ensemble(std::size_t n, const VmfMixture& mixture, Rng& rng) {
  Ensemble e(n, mixture.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = sample_vmf_mixture(mixture, rng);
    std::copy(x.begin(), x.end(), e.token(i).begin());
  }
  return e;
}

double cap_mass(const Ensemble& ensemble, std::span<const double> center, double radius) {
  if (ensemble.size() == 0) return 0.0;
  if (radius >= 2.0) return 1.0;  // chordal diameter of the sphere
  const double r2 = radius * radius;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    if (squared_distance(ensemble.token(i), center) <= r2) ++inside;
  return static_cast<double>(inside) / static_cast<double>(ensemble.size());
}

}  // namespace attnsphere
