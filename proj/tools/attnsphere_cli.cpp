#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "attnsphere/dynamics.hpp"
#include "attnsphere/error.hpp"
#include "attnsphere/harness/runner.hpp"

int run_verify(bool quiet);

namespace {

using namespace attnsphere;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::UnknownPreset:
    case ErrorCode::InvalidArgument:
      return 1;
    case ErrorCode::AssumptionViolation:
      return 3;
    default:
      return 2;
  }
}

double parse_beta(const std::string& s) {
  if (s == "inf") return kInfiniteBeta;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error(ErrorCode::ValidationError, "--beta: expected a number or inf, got '" + s + "'");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-attention token dynamics on the sphere: simulations and diagnostics"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::vector<std::string> betas;
  bool quiet = false;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", seed, "Override the seed");
    cmd->add_option("--workers", workers, "Parallel runs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--dt", dt, "Override the time step");
    cmd->add_option("--beta", betas, "Inverse temperature (repeatable; 'inf' for zero temperature)");
    cmd->add_flag("--quiet", quiet, "Suppress progress output");
  };

  std::string preset;
  auto* run_preset = app.add_subcommand("run-preset", "Run a named preset");
  run_preset->add_option("name", preset, "Preset name (see list-presets)")->required();
  add_run_flags(run_preset);

  std::string config_path;
  auto* run_config = app.add_subcommand("run-config", "Run an experiment described by a JSON config file");
  run_config->add_option("path", config_path, "Config file")->required()->check(CLI::ExistingFile);
  add_run_flags(run_config);

  auto* list = app.add_subcommand("list-presets", "List available presets");
  auto* verify = app.add_subcommand("verify", "Run the built-in invariant checks");
  verify->add_flag("--quiet", quiet, "Only print failures and the verdict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) {
      for (const auto& p : harness::preset_catalog()) std::printf("%-16s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
    if (verify->parsed()) return run_verify(quiet);

    harness::Overrides overrides;
    if (run_preset->count("--seed") || run_config->count("--seed")) overrides.seed = seed;
    if (run_preset->count("--dt") || run_config->count("--dt")) overrides.dt = dt;
    for (const auto& b : betas) overrides.betas.push_back(parse_beta(b));

    harness::RunOptions options;
    options.out_dir = out_dir;
    options.workers = workers;
    options.quiet = quiet;

    harness::ExperimentConfig config =
        run_preset->parsed() ? harness::make_preset(preset) : harness::load_config(config_path);
    harness::apply_overrides(config, overrides);
    const auto summary = harness::run_experiment(config, options);
    if (!quiet)
      std::fprintf(stderr, "wrote %s (%.1f s)\n", summary.summary_path.string().c_str(), summary.wall_seconds);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
