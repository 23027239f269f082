// Experiment driver: run configuration, scheme dispatch, reference
// solutions, convergence sweeps, conservation tracking and filament
// reconstruction.

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smap/frame.h"
#include "smap/lowreg.h"
#include "smap/magnus.h"
#include "smap/output.h"

namespace smap {

enum class SchemeKind { kSchemeA2, kSchemeA4, kSchemeB };
enum class RunMode { kSimulate, kConverge, kConserve, kFilament };

SchemeKind parse_scheme(std::string_view name);
std::string scheme_name(SchemeKind scheme);
RunMode parse_mode(std::string_view name);
std::string mode_name(RunMode mode);

struct RunConfig {
  std::string preset = "smooth";
  std::string input_file;  // tangent samples; replaces the preset when set
  SchemeKind scheme = SchemeKind::kSchemeA4;
  std::size_t n_modes = 128;
  // One step for simulate/conserve/filament. In converge mode either the full
  // list of step sizes, or a single largest step halved `levels - 1` times.
  std::vector<double> steps{1.0 / 200};
  int levels = 6;
  double t_end = 1.0;
  LowRegConfig lowreg;
  std::optional<SchemeKind> ref_scheme;  // default: scheme_b for rough, else scheme_a_4
  double ref_step = 0.0;                 // 0: smallest step / 16
  std::size_t ref_n_modes = 0;           // 0: n_modes
  std::size_t stride = 1;                // frames kept for filament output
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::kCsv;

  // Throws std::invalid_argument.
  void validate(RunMode mode) const;
  std::vector<double> step_sizes() const;
};

// Config file keys match the long CLI flag names ("n-modes", "t-end", ...).
// Keys absent from the file leave `base` untouched.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
std::string config_to_json(const RunConfig& config);

// Sample offset of the configured initial data relative to the nodes.
double sample_offset(const RunConfig& config, const TorusGrid& grid);
VectorField3 initial_tangent(const RunConfig& config, const TorusGrid& grid);
InitialState initial_state(const RunConfig& config, std::size_t n_modes);

Trajectory run_scheme(SchemeKind scheme, const InitialState& init, double h, double t_end,
                      const LowRegConfig& lowreg, const TrajectoryOptions& options = {});

// Restricts a fine-grid field sampled at x_n + fine_offset onto `coarse`
// sampled at x_n + coarse_offset by Fourier shift and truncation.
VectorField3 restrict_field(const VectorField3& fine, double fine_offset, const TorusGrid& coarse,
                            double coarse_offset);

struct ConvergenceRow {
  double h = 0.0;
  double error = 0.0;
  double slope = 0.0;  // against the previous row; NaN on the first
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double fitted_slope = 0.0;
  SchemeKind ref_scheme = SchemeKind::kSchemeA4;
  double ref_step = 0.0;
  std::size_t ref_n_modes = 0;
};

// Final-time L2 tangent error of each step size against a self-generated
// reference. Cells run on worker_threads() threads.
ConvergenceResult convergence_study(const RunConfig& config);

// SMAP_THREADS if set to a positive integer, otherwise the hardware count.
unsigned worker_threads();

struct FilamentCurve {
  double t = 0.0;
  std::vector<Eigen::Vector3d> points;  // X(t, x_n + offset)
  Eigen::Vector3d base_point = Eigen::Vector3d::Zero();
};

// X(t, .) = X0(t) + int_0^x T(t, .), with X0 advanced by the trapezoid rule
// on (T x T_x)(t, first sample). Curves whose mean tangent exceeds 1e-6 get a
// message appended to `warnings`.
std::vector<FilamentCurve> reconstruct_filament(const Trajectory& trajectory,
                                                std::vector<std::string>* warnings = nullptr);

struct RunResult {
  std::vector<Table> tables;
  std::vector<std::string> warnings;
};

RunResult run_experiment(RunMode mode, const RunConfig& config);

// Writes every table plus manifest.json into config.out_dir and returns the
// paths written.
std::vector<std::filesystem::path> write_artifacts(const RunResult& result, RunMode mode,
                                                   const RunConfig& config);

}  // namespace smap
