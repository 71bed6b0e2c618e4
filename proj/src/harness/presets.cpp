#include "attnsphere/harness/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "attnsphere/dynamics.hpp"
#include "attnsphere/error.hpp"
#include "attnsphere/rng.hpp"
#include "attnsphere/spectral.hpp"

namespace attnsphere::harness {

namespace {

// Fixed stream for the random diagonal families, independent of the run seed,
// so that --seed changes the token draws but not the model.
constexpr std::uint64_t kModelStream = 0x6d6f64656c73ULL;
constexpr std::uint64_t kDefaultSeed = 2026;

ExperimentConfig base(std::string name) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.seed = kDefaultSeed;
  return c;
}

std::vector<VmfComponent> three_cap_mixture() {
  const double w = 1.0 / 3.0;
  return {{Vector{1.0, -0.3, -0.2}, 2.0, w}, {Vector{0.0, 1.0, -0.3}, 10.0, w}, {Vector{-1.0, 1.0, 1.0}, 5.0, w}};
}

// Draws whose B is comfortably invertible and whose eigenspaces are not near
// ties, so E, F and F_abs are one-dimensional and stable under rounding.
bool well_separated(const SpectralModel& m) {
  if (m.sigma_min_B < 0.2 || !m.E || !m.F || !m.F_abs) return false;
  if (m.E->dim() != 1 || m.F->dim() != 1 || m.F_abs->dim() != 1) return false;
  if (!(m.gamma >= 0.2) || !(m.gamma_V >= 0.2)) return false;
  std::vector<double> mags;
  for (std::size_t i = 0; i < m.v_eigenvalues->size(); ++i) mags.push_back(std::abs((*m.v_eigenvalues)[i]));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags[0] - mags[1] >= 0.2;
}

// With tag_draw the draw index is appended to the label so output files name
// the instance they came from.
template <class Pred>
ModelCase first_draw(std::size_t dim, std::string label, Pred pred, bool tag_draw = false) {
  for (std::uint64_t k = 0; k < 100000; ++k) {
    auto mc = diagonal_draw(dim, k);
    const auto model = build_model(mc.B, mc.V);
    if (well_separated(model) && pred(model)) {
      mc.label = tag_draw ? label + "-draw" + std::to_string(k) : std::move(label);
      return mc;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no qualifying diagonal draw found");
}

bool same(const std::optional<Subspace>& a, const std::optional<Subspace>& b) { return a && b && a->same_as(*b); }

ExperimentConfig fig1() {
  auto c = base("fig1");
  c.cases.push_back({"main", rotated_product().transpose(), Matrix::identity(3)});
  c.init = {InitSpec::Kind::VmfMixture, 2000, three_cap_mixture()};
  c.betas = {30.0, kInfiniteBeta};
  c.t_final = 5.0;
  c.w2_stride = 10;
  c.metrics.align_F = false;
  c.metrics.align_Fabs = false;
  c.snapshot_times = {0.0, 2.5, 5.0};
  return c;
}

ExperimentConfig fig2() {
  auto c = base("fig2");
  const Matrix V = Matrix::diagonal(std::vector<double>{1.0, 1.0, 2.0});
  // V B^T equals the fig1 product, so B^T = V^{-1} (V B^T).
  const Matrix B = (invert(V) * rotated_product()).transpose();
  c.cases.push_back({"main", B, V});
  c.init = {InitSpec::Kind::VmfMixture, 2000, three_cap_mixture()};
  c.betas = {30.0};
  c.t_final = 10.0;
  c.metrics.w2_to_target = false;
  c.snapshot_times = {0.0, 2.5, 4.0, 10.0};
  return c;
}

ExperimentConfig fig3() {
  auto c = base("fig3");
  c.cases.push_back({"main", Matrix::diagonal(std::vector<double>{-1.0, -1.0, 1.0}),
                     Matrix::diagonal(std::vector<double>{-1.0, 1.0, -2.0})});
  c.init = {InitSpec::Kind::Uniform, 200, {}};
  c.betas = {100.0};
  c.t_final = 20.0;
  c.trials = 5;
  c.metrics.energy = true;
  c.snapshot_times = {0.0, 4.0, 9.0, 20.0};
  return c;
}

ExperimentConfig fig4() {
  auto c = base("fig4");
  c.cases.push_back(first_draw(10, "main", [](const SpectralModel& m) {
    return !same(m.E, m.F) && !same(m.E, m.F_abs);
  }));
  c.init = {InitSpec::Kind::Uniform, 500, {}};
  c.betas = {10.0, 1000.0, kInfiniteBeta};
  c.t_final = 20.0;
  c.trials = 20;
  c.envelopes.enabled = true;
  return c;
}

ExperimentConfig gradflow(std::string name, std::vector<double> b_diag, double v_sign) {
  auto c = base(std::move(name));
  const Matrix B = Matrix::diagonal(b_diag);
  c.cases.push_back({"main", B, v_sign * B});
  c.init = {InitSpec::Kind::Uniform, 100, {}};
  c.betas = {1.0, 100.0, kInfiniteBeta};
  c.t_final = 10.0;
  c.trials = 10;
  c.w2_stride = 1;
  c.metrics.energy = true;
  return c;
}

ExperimentConfig nonsym() {
  auto c = base("nonsym");
  const Matrix V1{{-1.0, 1.0, 0.0}, {-2.0, 1.0, 0.0}, {0.0, 0.0, -2.0}};
  const Matrix B1 = Matrix::diagonal(std::vector<double>{-1.0, -1.0, 1.0});
  const Matrix V2 = Matrix::diagonal(std::vector<double>{-1.0, 1.0, -2.0});
  const Matrix B2{{-1.0, 1.0, 0.0}, {-2.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  c.cases.push_back({"complex", B1, V1});
  c.cases.push_back({"real", B2, V2});
  c.init = {InitSpec::Kind::Uniform, 200, {}};
  c.betas = {100.0};
  c.t_final = 20.0;
  c.metrics.w2_to_target = false;
  c.metrics.v_p = false;
  c.snapshot_times = {0.0, 4.0, 9.0, 20.0};
  return c;
}

ExperimentConfig conj_support() {
  auto c = base("conj-support");
  c.cases.push_back(first_draw(10, "f-limit", [](const SpectralModel& m) {
    return !same(m.E, m.F) && !same(m.F, m.F_abs) && !same(m.E, m.F_abs);
  }, true));
  c.cases.push_back(first_draw(10, "f-equals-fabs", [](const SpectralModel& m) {
    return same(m.F, m.F_abs) && !same(m.E, m.F);
  }, true));
  c.cases.push_back(first_draw(10, "e-equals-fabs", [](const SpectralModel& m) { return same(m.E, m.F_abs); }, true));
  c.init = {InitSpec::Kind::Uniform, 500, {}};
  c.betas = {10.0, 1000.0};
  c.t_final = 20.0;
  c.metrics.w2_to_target = false;
  return c;
}

}  // namespace

Matrix rotated_product() {
  const double a = std::numbers::pi / 8.0;
  const Matrix R{{1.0, 0.0, 0.0}, {0.0, std::cos(a), -std::sin(a)}, {0.0, std::sin(a), std::cos(a)}};
  return R.transpose() * Matrix::diagonal(std::vector<double>{5.0, 5.0, 1.0}) * R;
}

ModelCase diagonal_draw(std::size_t dim, std::uint64_t k) {
  Rng rng(Rng::derive(kModelStream, k));
  std::vector<double> b(dim);
  std::vector<double> v(dim);
  for (auto& x : b) x = rng.normal();
  for (auto& x : v) x = rng.normal();
  return {"draw" + std::to_string(k), Matrix::diagonal(b), Matrix::diagonal(v)};
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"fig1", "3D rotated product, V = Id, vMF mixture, n = 2000, beta in {30, inf}"},
      {"fig2", "same product as fig1 with V = diag(1, 1, 2), beta = 30"},
      {"fig3", "two time scales: d = 3, n = 200, beta = 100, V = diag(-1, 1, -2), B = diag(-1, -1, 1)"},
      {"fig4", "random diagonal d = 10, n = 500, beta in {10, 1000, inf}, 20 trials"},
      {"gradflow-max", "B = V positive definite, n = 100, beta in {1, 100, inf}"},
      {"gradflow-max-nd", "B = V negative definite"},
      {"gradflow-min", "B = -V with B negative definite"},
      {"gradflow-min-pd", "B = -V with B positive definite"},
      {"nonsym", "non-symmetric V B^T: complex and real leading spectra"},
      {"conj-support", "three random diagonal d = 10 instances: F limit, F = F_abs, E = F_abs"},
  };
  return catalog;
}

ExperimentConfig make_preset(std::string_view name) {
  const std::vector<double> spectrum{2.0, 1.0, 0.5};
  const std::vector<double> negative{-2.0, -1.0, -0.5};
  ExperimentConfig c;
  if (name == "fig1") c = fig1();
  else if (name == "fig2") c = fig2();
  else if (name == "fig3") c = fig3();
  else if (name == "fig4") c = fig4();
  else if (name == "gradflow-max") c = gradflow("gradflow-max", spectrum, 1.0);
  else if (name == "gradflow-max-nd") c = gradflow("gradflow-max-nd", negative, 1.0);
  else if (name == "gradflow-min") c = gradflow("gradflow-min", negative, -1.0);
  else if (name == "gradflow-min-pd") c = gradflow("gradflow-min-pd", spectrum, -1.0);
  else if (name == "nonsym") c = nonsym();
  else if (name == "conj-support") c = conj_support();
  else throw Error(ErrorCode::UnknownPreset, "no preset named '" + std::string(name) + "'");
  c.validate();
  return c;
}

void apply_overrides(ExperimentConfig& config, const Overrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.dt) config.dt = *overrides.dt;
  if (!overrides.betas.empty()) config.betas = overrides.betas;
  config.validate();
}

}  // namespace attnsphere::harness
