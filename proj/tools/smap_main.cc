// smap: command-line driver for Schrodinger map experiments.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smap/harness.h"
#include "smap/lowreg.h"
#include "smap/presets.h"

namespace {

struct Flags {
  std::string config;
  std::string preset;
  std::string input;
  std::string scheme;
  std::size_t n_modes = 0;
  std::vector<double> steps;
  int levels = 0;
  double t_end = 0.0;
  std::string out;
  std::string format;
  double ref_step = 0.0;
  std::string ref_scheme;
  std::size_t ref_n_modes = 0;
  double fp_tol = 0.0;
  int fp_max_iters = 0;
  std::size_t stride = 0;
};

void add_options(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file (keys as the long flag names)")
      ->check(CLI::ExistingFile);
  app->add_option("--preset", f.preset, "initial tangent: smooth, rough or circle");
  app->add_option("--input", f.input, "CSV file of tangent samples T1,T2,T3 per node")
      ->check(CLI::ExistingFile);
  app->add_option("--scheme", f.scheme, "scheme_a_2, scheme_a_4 or scheme_b");
  app->add_option("--n-modes", f.n_modes, "number of grid points / Fourier modes");
  app->add_option("--step", f.steps, "time step (converge: list, or largest step)")
      ->expected(1, 64);
  app->add_option("--levels", f.levels, "converge: halvings of a single --step");
  app->add_option("--t-end", f.t_end, "final time");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--format", f.format, "csv or json");
  app->add_option("--ref-step", f.ref_step, "converge: reference step (default smallest/16)");
  app->add_option("--ref-scheme", f.ref_scheme, "converge: reference scheme");
  app->add_option("--ref-n-modes", f.ref_n_modes, "converge: reference resolution");
  app->add_option("--fp-tol", f.fp_tol, "fixed-point tolerance of the low-regularity step");
  app->add_option("--fp-max-iters", f.fp_max_iters, "fixed-point iteration cap");
  app->add_option("--stride", f.stride, "filament: keep every stride-th step");
}

smap::RunConfig build_config(const CLI::App* app, const Flags& f, smap::RunMode mode) {
  smap::RunConfig c;
  if (mode == smap::RunMode::kConverge) {
    c.steps = {1.0 / 16};
    c.n_modes = 256;
  }
  if (!f.config.empty()) c = smap::load_config(f.config, c);
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--preset")) c.preset = f.preset;
  if (given("--input")) {
    c.input_file = f.input;
    if (!given("--n-modes")) c.n_modes = smap::load_tangent_file(f.input).size();
  }
  if (given("--scheme")) c.scheme = smap::parse_scheme(f.scheme);
  if (given("--n-modes")) c.n_modes = f.n_modes;
  if (given("--step")) c.steps = f.steps;
  if (given("--levels")) c.levels = f.levels;
  if (given("--t-end")) c.t_end = f.t_end;
  if (given("--out")) c.out_dir = f.out;
  if (given("--format")) c.format = smap::parse_format(f.format);
  if (given("--ref-step")) c.ref_step = f.ref_step;
  if (given("--ref-scheme")) c.ref_scheme = smap::parse_scheme(f.ref_scheme);
  if (given("--ref-n-modes")) c.ref_n_modes = f.ref_n_modes;
  if (given("--fp-tol")) c.lowreg.fp_tolerance = f.fp_tol;
  if (given("--fp-max-iters")) c.lowreg.fp_max_iters = f.fp_max_iters;
  if (given("--stride")) c.stride = f.stride;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrodinger map integrators on the torus"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> modes = {
      {"simulate", "run one trajectory; write conserved quantities and the final state"},
      {"converge", "final-time error against a reference for a sequence of steps"},
      {"conserve", "track E, I and the NLS mass; report relative drifts"},
      {"filament", "reconstruct the vortex filament X with X_x = T"}};
  for (const auto& [name, help] : modes) add_options(app.add_subcommand(name, help), flags);
  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const smap::RunMode mode = smap::parse_mode(sub->get_name());
    const smap::RunConfig config = build_config(sub, flags, mode);
    const smap::RunResult result = smap::run_experiment(mode, config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& path : smap::write_artifacts(result, mode, config)) {
      std::cout << path.string() << '\n';
    }
  } catch (const smap::NonContractiveError& e) {
    std::cerr << "error: " << e.what() << " (reduce --step or relax --fp-tol)\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
