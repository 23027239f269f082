#include "smap/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "smap/diagnostics.h"
#include "smap/flowrh.h"
#include "smap/presets.h"
#include "smap/splitting.h"

namespace smap {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<Eigen::Vector3d> plane_normal(const RunConfig& config) {
  if (!config.input_file.empty()) return std::nullopt;
  return preset_plane_normal(config.preset);
}

SchemeKind default_ref_scheme(const RunConfig& config) {
  if (config.ref_scheme) return *config.ref_scheme;
  return config.input_file.empty() && config.preset == "rough" ? SchemeKind::kSchemeB
                                                               : SchemeKind::kSchemeA4;
}

// Runs tasks[i]() on a small pool; the first exception is rethrown after join.
void run_parallel(std::vector<std::function<void()>>& tasks, unsigned threads) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Eigen::Vector3d column(const VectorField3& f, std::size_t n) {
  return {f.comp[0][n], f.comp[1][n], f.comp[2][n]};
}

Table conserved_table(const ConservedReport& report, const RVector& orth, const RVector& norm) {
  Table t{"conserved", {"t", "E", "I", "mass", "orth_defect", "norm_defect"}, {}};
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    t.add_row({report.times[i], report.energy_E[i], report.action_I[i], report.nls_mass[i],
               orth[i], norm[i]});
  }
  return t;
}

struct TrackedRun {
  ConservedReport report;
  RVector orth, norm;
  Frame final_frame;
  SpectralField final_u;
  InitialState init;
};

TrackedRun tracked_run(const RunConfig& config) {
  InitialState init = initial_state(config, config.n_modes);
  TrackedRun run{{}, {}, {}, init.frame, init.u0, init};
  TrajectoryOptions options;
  options.stride = 0;
  options.observer = [&](std::size_t, double t, const Frame& frame, const SpectralField& u) {
    run.report.record(t, frame, u);
    run.orth.push_back(orthonormality_defect(frame));
    run.norm.push_back(tangent_norm_defect(frame));
    run.final_frame = frame;
    run.final_u = u;
  };
  run_scheme(config.scheme, init, config.steps.front(), config.t_end, config.lowreg, options);
  return run;
}

}  // namespace

SchemeKind parse_scheme(std::string_view name) {
  if (name == "scheme_a_2") return SchemeKind::kSchemeA2;
  if (name == "scheme_a_4") return SchemeKind::kSchemeA4;
  if (name == "scheme_b") return SchemeKind::kSchemeB;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected scheme_a_2, scheme_a_4 or scheme_b)");
}

std::string scheme_name(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::kSchemeA2: return "scheme_a_2";
    case SchemeKind::kSchemeA4: return "scheme_a_4";
    case SchemeKind::kSchemeB: return "scheme_b";
  }
  return "?";
}

RunMode parse_mode(std::string_view name) {
  if (name == "simulate") return RunMode::kSimulate;
  if (name == "converge") return RunMode::kConverge;
  if (name == "conserve") return RunMode::kConserve;
  if (name == "filament") return RunMode::kFilament;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kSimulate: return "simulate";
    case RunMode::kConverge: return "converge";
    case RunMode::kConserve: return "conserve";
    case RunMode::kFilament: return "filament";
  }
  return "?";
}

void RunConfig::validate(RunMode mode) const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (input_file.empty() && preset != "smooth" && preset != "rough" && preset != "circle") {
    fail("unknown preset '" + preset + "' (expected smooth, rough or circle)");
  }
  if (n_modes < 4 || n_modes % 2 != 0) fail("n-modes must be even and at least 4");
  if (input_file.empty() && preset == "rough" && n_modes % 4 != 0) {
    fail("the rough preset needs n-modes divisible by 4");
  }
  if (steps.empty()) fail("no step size given");
  for (double h : steps) {
    if (!(h > 0.0)) fail("step sizes must be positive");
    if (t_end > 0.0 && h > t_end) fail("step size exceeds t-end");
  }
  if (!(t_end >= 0.0)) fail("t-end must be non-negative");
  if (mode == RunMode::kConverge) {
    if (!(t_end > 0.0)) fail("converge mode needs t-end > 0");
    if (steps.size() == 1 && levels < 2) fail("converge mode needs at least two step sizes");
    if (ref_step < 0.0) fail("ref-step must be non-negative");
  }
  lowreg.validate();
}

std::vector<double> RunConfig::step_sizes() const {
  if (steps.size() > 1) return steps;
  std::vector<double> out;
  double h = steps.front();
  for (int l = 0; l < std::max(levels, 1); ++l, h *= 0.5) out.push_back(h);
  return out;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file '" + path.string() + "': " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  RunConfig c = std::move(base);
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "preset") c.preset = value.get<std::string>();
      else if (key == "input") c.input_file = value.get<std::string>();
      else if (key == "scheme") c.scheme = parse_scheme(value.get<std::string>());
      else if (key == "n-modes") c.n_modes = value.get<std::size_t>();
      else if (key == "step") {
        c.steps = value.is_array() ? value.get<std::vector<double>>()
                                   : std::vector<double>{value.get<double>()};
      } else if (key == "levels") c.levels = value.get<int>();
      else if (key == "t-end") c.t_end = value.get<double>();
      else if (key == "fp-tol") c.lowreg.fp_tolerance = value.get<double>();
      else if (key == "fp-max-iters") c.lowreg.fp_max_iters = value.get<int>();
      else if (key == "s-norm") c.lowreg.s_norm = value.get<double>();
      else if (key == "ref-scheme") {
        if (value.is_null()) c.ref_scheme.reset();
        else c.ref_scheme = parse_scheme(value.get<std::string>());
      } else if (key == "ref-step") c.ref_step = value.get<double>();
      else if (key == "ref-n-modes") c.ref_n_modes = value.get<std::size_t>();
      else if (key == "stride") c.stride = value.get<std::size_t>();
      else if (key == "out") c.out_dir = value.get<std::string>();
      else if (key == "format") c.format = parse_format(value.get<std::string>());
      else throw std::invalid_argument("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file '" + path.string() + "': " + e.what());
  }
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["input"] = c.input_file;
  j["scheme"] = scheme_name(c.scheme);
  j["n-modes"] = c.n_modes;
  j["step"] = c.steps;
  j["levels"] = c.levels;
  j["t-end"] = c.t_end;
  j["fp-tol"] = c.lowreg.fp_tolerance;
  j["fp-max-iters"] = c.lowreg.fp_max_iters;
  j["s-norm"] = c.lowreg.s_norm;
  j["ref-scheme"] = c.ref_scheme ? json(scheme_name(*c.ref_scheme)) : json(nullptr);
  j["ref-step"] = c.ref_step;
  j["ref-n-modes"] = c.ref_n_modes;
  j["stride"] = c.stride;
  j["out"] = c.out_dir.string();
  j["format"] = format_name(c.format);
  return j.dump(2);
}

double sample_offset(const RunConfig& config, const TorusGrid& grid) {
  return config.input_file.empty() ? preset_sample_offset(config.preset, grid) : 0.0;
}

VectorField3 initial_tangent(const RunConfig& config, const TorusGrid& grid) {
  if (config.input_file.empty()) return preset_by_name(config.preset, grid);
  VectorField3 t = load_tangent_file(config.input_file);
  if (t.size() != grid.size()) {
    throw std::invalid_argument("tangent file has " + std::to_string(t.size()) +
                                " samples but " + std::to_string(grid.size()) +
                                " modes were requested");
  }
  return t;
}

InitialState initial_state(const RunConfig& config, std::size_t n_modes) {
  const TorusGrid grid(n_modes);
  return prepare_initial_state(initial_tangent(config, grid), plane_normal(config));
}

Trajectory run_scheme(SchemeKind scheme, const InitialState& init, double h, double t_end,
                      const LowRegConfig& lowreg, const TrajectoryOptions& options) {
  switch (scheme) {
    case SchemeKind::kSchemeA2:
      return scheme_a_run(init, h, t_end, 2, splitting_preset("strang"), options);
    case SchemeKind::kSchemeA4:
      return scheme_a_run(init, h, t_end, 4, splitting_preset("yoshida4"), options);
    case SchemeKind::kSchemeB:
      return scheme_b_run(init, h, t_end, lowreg, options);
  }
  throw std::invalid_argument("run_scheme: bad scheme");
}

VectorField3 restrict_field(const VectorField3& fine, double fine_offset, const TorusGrid& coarse,
                            double coarse_offset) {
  const double shift = coarse_offset - fine_offset;
  VectorField3 out(coarse);
  for (int c = 0; c < 3; ++c) {
    SpectralField f = to_coeffs(fine.comp[c], fine.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.coeffs()[i] *= std::polar(1.0, fine.grid.wavenumber(i) * shift);
    }
    out.comp[c] = to_real_values(resample(f, coarse));
  }
  return out;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("SMAP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ConvergenceResult convergence_study(const RunConfig& config) {
  config.validate(RunMode::kConverge);
  const std::vector<double> hs = config.step_sizes();
  ConvergenceResult result;
  result.ref_scheme = default_ref_scheme(config);
  result.ref_step =
      config.ref_step > 0.0 ? config.ref_step : *std::min_element(hs.begin(), hs.end()) / 16.0;
  result.ref_n_modes = config.ref_n_modes > 0 ? config.ref_n_modes : config.n_modes;

  const TorusGrid grid(config.n_modes);
  const TorusGrid ref_grid(result.ref_n_modes);
  std::vector<VectorField3> finals(hs.size(), VectorField3(grid));
  VectorField3 reference(ref_grid);

  TrajectoryOptions final_only;
  final_only.stride = 0;
  std::vector<std::function<void()>> tasks;
  tasks.emplace_back([&] {
    const InitialState init = initial_state(config, result.ref_n_modes);
    reference = run_scheme(result.ref_scheme, init, result.ref_step, config.t_end, config.lowreg,
                           final_only)
                    .frames.back()
                    .tangent();
  });
  for (std::size_t i = 0; i < hs.size(); ++i) {
    tasks.emplace_back([&, i] {
      const InitialState init = initial_state(config, config.n_modes);
      finals[i] = run_scheme(config.scheme, init, hs[i], config.t_end, config.lowreg, final_only)
                      .frames.back()
                      .tangent();
    });
  }
  run_parallel(tasks, worker_threads());

  const VectorField3 ref_on_grid = restrict_field(reference, sample_offset(config, ref_grid), grid,
                                                  sample_offset(config, grid));
  RVector errs;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    ConvergenceRow row{hs[i], l2_frame_error(finals[i], ref_on_grid), kNaN};
    if (i > 0) {
      const ConvergenceRow& prev = result.rows.back();
      row.slope = std::log(prev.error / row.error) / std::log(prev.h / row.h);
    }
    result.rows.push_back(row);
    errs.push_back(row.error);
  }
  result.fitted_slope = order_estimate(hs, errs);
  return result;
}

std::vector<FilamentCurve> reconstruct_filament(const Trajectory& trajectory,
                                                std::vector<std::string>* warnings) {
  std::vector<FilamentCurve> curves;
  Eigen::Vector3d base = Eigen::Vector3d::Zero();
  Eigen::Vector3d prev_velocity = Eigen::Vector3d::Zero();
  for (std::size_t s = 0; s < trajectory.frames.size(); ++s) {
    const VectorField3 t = trajectory.frames[s].tangent();
    const TorusGrid& g = t.grid;
    const VectorField3 tx = spectral_derivative(t);
    const Eigen::Vector3d velocity = column(t, 0).cross(column(tx, 0));
    if (s > 0) {
      base += 0.5 * (trajectory.times[s] - trajectory.times[s - 1]) * (prev_velocity + velocity);
    }
    prev_velocity = velocity;

    FilamentCurve curve;
    curve.t = trajectory.times[s];
    curve.base_point = base;
    curve.points.assign(g.size(), base);
    Eigen::Vector3d mean;
    for (int c = 0; c < 3; ++c) {
      mean[c] = torus_integral(t.comp[c]) / kTwoPi;
      const RVector a = to_real_values(antiderivative(to_coeffs(t.comp[c], g)));
      for (std::size_t n = 0; n < g.size(); ++n) {
        curve.points[n][c] += a[n] - a[0] + mean[c] * (g.node(n) - g.node(0));
      }
    }
    if (warnings && s == 0 && mean.norm() > 1e-6) {
      warnings->push_back("mean tangent " + format_double(mean.norm()) + " at t = " +
                          format_double(curve.t) +
                          ": curve is not closed, reconstruction drifts secularly");
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

RunResult run_experiment(RunMode mode, const RunConfig& config) {
  config.validate(mode);
  RunResult result;
  switch (mode) {
    case RunMode::kSimulate:
    case RunMode::kConserve: {
      const TrackedRun run = tracked_run(config);
      if (run.init.gauge_corrected) {
        result.warnings.push_back("torsion holonomy is not a multiple of 2 pi; u0 uses the "
                                  "periodic phase correction");
      }
      result.tables.push_back(conserved_table(run.report, run.orth, run.norm));
      if (mode == RunMode::kSimulate) {
        const TorusGrid& g = run.final_frame.grid;
        const double offset = sample_offset(config, g);
        const VectorField3 t = run.final_frame.tangent();
        const VectorField3 e1 = run.final_frame.e1();
        const VectorField3 e2 = run.final_frame.e2();
        const CVector u = to_values(run.final_u);
        Table state{"final_state",
                    {"x", "T1", "T2", "T3", "e1_1", "e1_2", "e1_3", "e2_1", "e2_2", "e2_3",
                     "u_re", "u_im"},
                    {}};
        for (std::size_t n = 0; n < g.size(); ++n) {
          state.add_row({g.node(n) + offset, t.comp[0][n], t.comp[1][n], t.comp[2][n],
                         e1.comp[0][n], e1.comp[1][n], e1.comp[2][n], e2.comp[0][n],
                         e2.comp[1][n], e2.comp[2][n], u[n].real(), u[n].imag()});
        }
        result.tables.push_back(std::move(state));
      } else {
        Table drift{"drift",
                    {"steps", "E_drift", "I_drift", "mass_drift", "max_orth_defect",
                     "max_norm_defect"},
                    {}};
        drift.add_row({static_cast<double>(run.report.times.size() - 1),
                       ConservedReport::relative_drift(run.report.energy_E),
                       ConservedReport::relative_drift(run.report.action_I),
                       ConservedReport::relative_drift(run.report.nls_mass),
                       *std::max_element(run.orth.begin(), run.orth.end()),
                       *std::max_element(run.norm.begin(), run.norm.end())});
        result.tables.push_back(std::move(drift));
      }
      break;
    }
    case RunMode::kConverge: {
      const ConvergenceResult conv = convergence_study(config);
      Table table{"convergence", {"h", "error", "slope"}, {}};
      for (const auto& row : conv.rows) table.add_row({row.h, row.error, row.slope});
      result.tables.push_back(std::move(table));
      Table summary{"summary", {"fitted_slope", "ref_step", "ref_n_modes", "n_modes", "t_end"},
                    {}};
      summary.add_row({conv.fitted_slope, conv.ref_step, static_cast<double>(conv.ref_n_modes),
                       static_cast<double>(config.n_modes), config.t_end});
      result.tables.push_back(std::move(summary));
      break;
    }
    case RunMode::kFilament: {
      const InitialState init = initial_state(config, config.n_modes);
      TrajectoryOptions options;
      options.stride = config.stride;
      const Trajectory traj =
          run_scheme(config.scheme, init, config.steps.front(), config.t_end, config.lowreg, options);
      const std::vector<FilamentCurve> curves = reconstruct_filament(traj, &result.warnings);
      const TorusGrid grid(config.n_modes);
      const double offset = sample_offset(config, grid);
      Table points{"filament", {"t", "x", "X1", "X2", "X3"}, {}};
      Table base{"base_point", {"t", "X1", "X2", "X3"}, {}};
      for (const auto& curve : curves) {
        base.add_row({curve.t, curve.base_point[0], curve.base_point[1], curve.base_point[2]});
        for (std::size_t n = 0; n < curve.points.size(); ++n) {
          const Eigen::Vector3d& p = curve.points[n];
          points.add_row({curve.t, grid.node(n) + offset, p[0], p[1], p[2]});
        }
      }
      result.tables.push_back(std::move(points));
      result.tables.push_back(std::move(base));
      break;
    }
  }
  return result;
}

std::vector<std::filesystem::path> write_artifacts(const RunResult& result, RunMode mode,
                                                   const RunConfig& config) {
  std::vector<std::filesystem::path> paths;
  json files = json::array();
  for (const Table& table : result.tables) {
    const auto path = write_table(table, config.out_dir, config.format);
    files.push_back({{"path", path.filename().string()},
                     {"bytes", std::filesystem::file_size(path)},
                     {"git_sha1", git_blob_sha1_file(path)}});
    paths.push_back(path);
  }
  json manifest;
  manifest["mode"] = mode_name(mode);
  manifest["config"] = json::parse(config_to_json(config));
  manifest["files"] = std::move(files);
  manifest["warnings"] = result.warnings;
  const auto path = config.out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  paths.push_back(path);
  return paths;
}

}  // namespace smap
