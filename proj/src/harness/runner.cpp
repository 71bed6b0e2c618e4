#include "attnsphere/harness/runner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "attnsphere/bounds.hpp"
#include "attnsphere/dynamics.hpp"
#include "attnsphere/error.hpp"
#include "attnsphere/harness/csv.hpp"
#include "attnsphere/harness/quantiles.hpp"
#include "attnsphere/rng.hpp"
#include "attnsphere/sphere.hpp"

namespace attnsphere::harness {

using nlohmann::json;
namespace fs = std::filesystem;

const RunRecord& RunSummary::run(std::size_t case_index, std::size_t beta_index, std::size_t trial) const {
  for (const auto& r : runs)
    if (r.case_index == case_index && r.beta_index == beta_index && r.trial == trial) return r;
  throw Error(ErrorCode::InvalidArgument, "no such run");
}

Ensemble initial_ensemble(const ExperimentConfig& config, std::size_t trial) {
  Rng rng(Rng::derive(config.seed, trial));
  const std::size_t d = config.dim();
  if (config.init.kind == InitSpec::Kind::Uniform) return sample_uniform_ensemble(config.init.n, d, rng);
  return sample_vmf_ensemble(config.init.n, VmfMixture(config.init.components), rng);
}

namespace {

std::string join_numbers(std::span<const double> xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : " ") + format_number(x);
  return out;
}

std::string basis_string(const std::optional<Subspace>& s) {
  return s ? join_numbers(s->basis().values()) : std::string("none");
}

json optional_vector_json(const std::optional<Vector>& v) {
  if (!v) return nullptr;
  json arr = json::array();
  for (std::size_t i = 0; i < v->size(); ++i) arr.push_back((*v)[i]);
  return arr;
}

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return nullptr;
}

}  // namespace

json spectral_summary(const SpectralModel& m) {
  json s;
  s["dim"] = m.B.rows();
  s["vbt_symmetric"] = m.vbt_symmetric;
  s["vbt_eigenvalues"] = optional_vector_json(m.vbt_eigenvalues);
  s["mu1"] = finite_or_null(m.mu1);
  s["mu2"] = finite_or_null(m.mu2);
  s["gamma"] = finite_or_null(m.gamma);
  s["dim_E"] = m.E ? json(m.E->dim()) : json(nullptr);
  s["sigma_min_B"] = m.sigma_min_B;
  s["sigma_max_B"] = m.sigma_max_B;
  s["v_eigenvalues"] = optional_vector_json(m.v_eigenvalues);
  s["dim_F"] = m.F ? json(m.F->dim()) : json(nullptr);
  s["dim_Fabs"] = m.F_abs ? json(m.F_abs->dim()) : json(nullptr);
  s["gamma_V"] = finite_or_null(m.gamma_V);
  return s;
}

std::vector<std::string> spectral_header(const SpectralModel& m) {
  auto opt_vec = [](const std::optional<Vector>& v) { return v ? join_numbers(v->span()) : std::string("none"); };
  auto dim_of = [](const std::optional<Subspace>& s) { return s ? std::to_string(s->dim()) : std::string("none"); };
  return {
      "dim=" + std::to_string(m.B.rows()),
      std::string("vbt_symmetric=") + (m.vbt_symmetric ? "true" : "false"),
      "vbt_eigenvalues=" + opt_vec(m.vbt_eigenvalues),
      "mu1=" + format_number(m.mu1),
      "mu2=" + format_number(m.mu2),
      "gamma=" + format_number(m.gamma),
      "sigma_min_B=" + format_number(m.sigma_min_B),
      "sigma_max_B=" + format_number(m.sigma_max_B),
      "dim_E=" + dim_of(m.E),
      "E_basis=" + basis_string(m.E),
      "v_eigenvalues=" + opt_vec(m.v_eigenvalues),
      "gamma_V=" + format_number(m.gamma_V),
      "dim_F=" + dim_of(m.F),
      "F_basis=" + basis_string(m.F),
      "dim_Fabs=" + dim_of(m.F_abs),
      "Fabs_basis=" + basis_string(m.F_abs),
  };
}

namespace {

struct Job {
  std::size_t case_index;
  std::size_t beta_index;
  std::size_t trial;
};

struct JobOutput {
  MetricSeries series;
  std::vector<std::array<std::optional<double>, 4>> envelopes;
  std::map<std::size_t, Ensemble> snapshots;  // keyed by step
};

std::string run_stem(const ExperimentConfig& c, std::size_t case_index, double beta) {
  return c.name + "_" + c.cases[case_index].label + "_beta" + format_beta(beta);
}

void check_assumptions(const ExperimentConfig& c, const std::vector<SpectralModel>& models) {
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    if ((c.metrics.w2_to_target || c.metrics.v_p) && !m.symmetric_theory_applies())
      throw Error(ErrorCode::AssumptionViolation,
                  "case '" + c.cases[i].label +
                      "': w2_to_target and v_p need a symmetric V B^T; disable them for this model");
  }
}

std::map<std::size_t, double> snapshot_steps(const ExperimentConfig& c) {
  std::map<std::size_t, double> out;
  const std::size_t steps = c.step_count();
  for (double t : c.snapshot_times) out[t == c.t_final ? steps : static_cast<std::size_t>(std::llround(t / c.dt))] = t;
  return out;
}

JobOutput run_job(const ExperimentConfig& c, const SpectralModel& model, const Job& job) {
  const double beta = c.betas[job.beta_index];
  const Ensemble init = initial_ensemble(c, job.trial);

  std::optional<W2Tracker> w2;
  if (c.metrics.w2_to_target) {
    try {
      w2.emplace(pushforward_pi(init, *model.E));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InPerp) throw;
      throw Error(ErrorCode::AssumptionViolation, std::string("initial token orthogonal to E: ") + e.what());
    }
  }

  std::optional<BoundParams> bounds;
  if (c.envelopes.enabled && model.symmetric_theory_applies() && std::isfinite(model.gamma)) {
    BoundParams bp;
    bp.C0 = c.envelopes.C0;
    bp.C1 = c.envelopes.C1;
    bp.p = c.p;
    bp.gamma = model.gamma;
    bp.sigma_max_B = model.sigma_max_B;
    bp.sigma_min_B = model.sigma_min_B;
    bp.v_p0 = v_p(init, *model.E, c.p);
    bp.beta = beta;
    if (std::isfinite(bp.v_p0)) bounds = bp;
  }

  const std::size_t steps = c.step_count();
  const auto snaps = job.trial == 0 ? snapshot_steps(c) : std::map<std::size_t, double>{};
  JobOutput out;

  Observer observe = [&](std::size_t step, double time, const Ensemble& ens) {
    if (snaps.count(step)) out.snapshots.emplace(step, ens);
    if (step % c.record_stride != 0 && step != steps) return;
    MetricRecord r;
    r.time = time;
    if (c.metrics.align_E && model.E) r.align_E = alignment(ens, *model.E);
    if (c.metrics.align_F && model.F) r.align_F = alignment(ens, *model.F);
    if (c.metrics.align_Fabs && model.F_abs) r.align_Fabs = alignment(ens, *model.F_abs);
    if (w2 && (step % c.w2_stride == 0 || step == steps)) r.w2_to_target = w2->distance(ens);
    if (c.metrics.v_p) r.v_p = v_p(ens, *model.E, c.p);
    if (c.metrics.energy) r.energy = interaction_energy(ens, model.B);
    out.series.push_back(r);
    if (c.envelopes.enabled) {
      std::array<std::optional<double>, 4> env;
      if (bounds) {
        env[0] = theorem_envelope(time, *bounds);
        const auto w = zero_temp_envelope(time, *bounds, EnvelopeForm::W2);
        env[1] = w.value;
        env[2] = w.proof_value;
        env[3] = zero_temp_envelope(time, *bounds, EnvelopeForm::Lyapunov).value;
      }
      out.envelopes.push_back(env);
    }
  };

  SimConfig sim;
  sim.beta = beta;
  sim.dt = c.dt;
  sim.t_final = c.t_final;
  sim.record_stride = 1;
  sim.seed = c.seed;
  sim.keep_snapshots = false;
  simulate(init, model, sim, std::span<const Observer>(&observe, 1));
  return out;
}

std::vector<std::string> common_header(const ExperimentConfig& c, const json& resolved, std::size_t case_index,
                                       double beta, const SpectralModel& model) {
  std::vector<std::string> lines = {
      "name=" + c.name,
      "case=" + c.cases[case_index].label,
      "beta=" + format_beta(beta),
      "config=" + resolved.dump(),
  };
  for (auto& l : spectral_header(model)) lines.push_back(std::move(l));
  return lines;
}

std::string render_comments(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += "# " + l + "\n";
  return s;
}

std::string render_run_csv(const std::vector<std::string>& header, const ExperimentConfig& c, const JobOutput& o) {
  std::string s = render_comments(header);
  for (std::size_t i = 0; i < kMetricColumns.size(); ++i) s += (i ? "," : "") + std::string(kMetricColumns[i]);
  if (c.envelopes.enabled)
    for (const char* col : kEnvelopeColumns) s += std::string(",") + col;
  s += "\n";
  for (std::size_t r = 0; r < o.series.size(); ++r) {
    const auto& m = o.series[r];
    s += format_number(m.time) + "," + format_cell(m.align_E) + "," + format_cell(m.align_F) + "," +
         format_cell(m.align_Fabs) + "," + format_cell(m.w2_to_target) + "," + format_cell(m.v_p) + "," +
         format_cell(m.energy);
    if (c.envelopes.enabled)
      for (const auto& e : o.envelopes[r]) s += "," + format_cell(e);
    s += "\n";
  }
  return s;
}

std::string render_bands_csv(const std::vector<std::string>& header, const std::vector<BandRow>& bands) {
  std::string s = render_comments(header);
  s += "time";
  for (std::size_t i = 1; i < kMetricColumns.size(); ++i) {
    const std::string m = kMetricColumns[i];
    s += "," + m + "_mean," + m + "_lo," + m + "_hi";
  }
  s += "\n";
  auto cells = [](const std::optional<BandStat>& b) {
    if (!b) return std::string(",,");
    return format_number(b->mean) + "," + format_number(b->lo) + "," + format_number(b->hi);
  };
  for (const auto& row : bands) {
    s += format_number(row.time) + "," + cells(row.align_E) + "," + cells(row.align_F) + "," + cells(row.align_Fabs) +
         "," + cells(row.w2_to_target) + "," + cells(row.v_p) + "," + cells(row.energy) + "\n";
  }
  return s;
}

std::string render_snapshot_csv(std::vector<std::string> header, double time, const Ensemble& ens) {
  header.push_back("trial=0");
  header.push_back("time=" + format_number(time));
  std::string s = render_comments(header);
  for (std::size_t k = 0; k < ens.dim(); ++k) s += (k ? ",x" : "x") + std::to_string(k);
  s += "\n";
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto x = ens.token(i);
    for (std::size_t k = 0; k < x.size(); ++k) s += (k ? "," : "") + format_number(x[k]);
    s += "\n";
  }
  return s;
}

json final_stats(const std::vector<const MetricSeries*>& trials) {
  json out = json::object();
  for (std::size_t col = 1; col < kMetricColumns.size(); ++col) {
    std::vector<double> finals;
    for (const auto* series : trials) {
      const auto& r = series->back();
      const std::optional<double> vals[] = {r.align_E, r.align_F, r.align_Fabs, r.w2_to_target, r.v_p, r.energy};
      if (vals[col - 1]) finals.push_back(*vals[col - 1]);
    }
    if (finals.size() != trials.size() || finals.empty()) continue;
    double mean = 0.0;
    for (double v : finals) mean += v;
    mean /= static_cast<double>(finals.size());
    out[kMetricColumns[col]] = {{"mean", finite_or_null(mean)},
                                {"min", finite_or_null(*std::min_element(finals.begin(), finals.end()))},
                                {"max", finite_or_null(*std::max_element(finals.begin(), finals.end()))}};
  }
  return out;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();

  std::vector<SpectralModel> models;
  for (const auto& mc : config.cases) models.push_back(build_model(mc.B, mc.V));
  check_assumptions(config, models);

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec || !fs::is_directory(options.out_dir))
    throw Error(ErrorCode::IoFailure, "cannot create output directory " + options.out_dir.string());

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < config.cases.size(); ++c)
    for (std::size_t b = 0; b < config.betas.size(); ++b)
      for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({c, b, t});

  const json resolved = to_json(config);
  std::vector<JobOutput> outputs(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::vector<fs::path> csv_paths(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      try {
        const double beta = config.betas[job.beta_index];
        outputs[j] = run_job(config, models[job.case_index], job);
        auto header = common_header(config, resolved, job.case_index, beta, models[job.case_index]);
        header.insert(header.begin() + 3, "trial=" + std::to_string(job.trial));
        csv_paths[j] = options.out_dir / (run_stem(config, job.case_index, beta) + "_trial" +
                                          std::to_string(job.trial) + ".csv");
        write_file(csv_paths[j], render_run_csv(header, config, outputs[j]));
        if (!options.quiet) {
          std::lock_guard lock(log_mutex);
          std::fprintf(stderr, "[%zu/%zu] %s trial %zu done\n", ++done, jobs.size(),
                       run_stem(config, job.case_index, beta).c_str(), job.trial);
        }
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(options.workers, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  RunSummary summary;
  std::vector<std::string> files;
  json cases = json::array();
  for (std::size_t c = 0; c < config.cases.size(); ++c) {
    json runs = json::array();
    for (std::size_t b = 0; b < config.betas.size(); ++b) {
      const double beta = config.betas[b];
      std::vector<const MetricSeries*> trial_series;
      std::vector<MetricSeries> band_input;
      json run_files = json::array();
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].case_index != c || jobs[j].beta_index != b) continue;
        trial_series.push_back(&outputs[j].series);
        band_input.push_back(outputs[j].series);
        run_files.push_back(csv_paths[j].filename().string());
      }
      const auto header = common_header(config, resolved, c, beta, models[c]);
      if (config.trials >= 2) {
        auto band_header = header;
        band_header.push_back("trials=" + std::to_string(config.trials));
        band_header.push_back("quantiles=" + format_number(config.quantile_lo) + " " + format_number(config.quantile_hi));
        const auto bands = quantile_bands(band_input, config.quantile_lo, config.quantile_hi);
        const auto path = options.out_dir / (run_stem(config, c, beta) + "_bands.csv");
        write_file(path, render_bands_csv(band_header, bands));
        run_files.push_back(path.filename().string());
      }
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].case_index != c || jobs[j].beta_index != b || jobs[j].trial != 0) continue;
        for (const auto& [step, ens] : outputs[j].snapshots) {
          const double t = snapshot_steps(config).at(step);
          const auto path = options.out_dir / (run_stem(config, c, beta) + "_snapshot_t" + format_number(t) + ".csv");
          write_file(path, render_snapshot_csv(header, ens.time(), ens));
          run_files.push_back(path.filename().string());
        }
      }
      for (const auto& f : run_files) files.push_back(f.get<std::string>());
      runs.push_back({{"beta", beta == kInfiniteBeta ? json("inf") : json(beta)},
                      {"trials", config.trials},
                      {"final", final_stats(trial_series)},
                      {"files", std::move(run_files)}});
    }
    cases.push_back({{"label", config.cases[c].label}, {"spectral", spectral_summary(models[c])}, {"runs", std::move(runs)}});
  }

  summary.document = {{"name", config.name}, {"seed", config.seed}, {"config", resolved}, {"cases", std::move(cases)},
                      {"files", files}};
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    RunRecord r;
    r.case_index = jobs[j].case_index;
    r.beta_index = jobs[j].beta_index;
    r.trial = jobs[j].trial;
    r.beta = config.betas[r.beta_index];
    r.csv = csv_paths[j];
    r.series = std::move(outputs[j].series);
    summary.runs.push_back(std::move(r));
  }

  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file(options.out_dir / "timing.json",
             json{{"name", config.name}, {"wall_seconds", summary.wall_seconds}, {"workers", n_workers}}.dump(2) + "\n");
  summary.summary_path = options.out_dir / "summary.json";
  write_file_atomic(summary.summary_path, summary.document.dump(2) + "\n");
  return summary;
}

RunSummary run_preset(std::string_view name, const Overrides& overrides, const RunOptions& options) {
  auto config = make_preset(name);
  apply_overrides(config, overrides);
  return run_experiment(config, options);
}

RunSummary run_config(const fs::path& path, const RunOptions& options) {
  return run_experiment(load_config(path), options);
}

}  // namespace attnsphere::harness
