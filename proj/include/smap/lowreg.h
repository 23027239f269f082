// Symmetric low-regularity integrator for the cubic NLS. Each step solves
//   u+ = S1(u+),
//   S1(c) = e^{ih dxx} u + i(h/4) e^{ih dxx}[u^2 phi1(-ih dxx) conj(u)]
//           + i(h/4) [c^2 phi1(ih dxx) conj(c)]
// by fixed-point iteration started from e^{ih dxx} u.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "smap/spectral.h"

namespace smap {

struct LowRegConfig {
  double fp_tolerance = 1e-12;  // absolute H^s distance between iterates
  int fp_max_iters = 100;
  double s_norm = 1.0;

  void validate() const;
};

class NonContractiveError : public std::runtime_error {
 public:
  NonContractiveError(const std::string& what, int iterations, double last_distance,
                      std::size_t step_index = 0)
      : std::runtime_error(what),
        iterations_(iterations),
        last_distance_(last_distance),
        step_index_(step_index) {}
  int iterations() const { return iterations_; }
  double last_distance() const { return last_distance_; }
  std::size_t step_index() const { return step_index_; }

 private:
  int iterations_;
  double last_distance_;
  std::size_t step_index_;
};

SpectralField s1_map(const SpectralField& u_m, const SpectralField& candidate, double h);

struct LowRegStep {
  SpectralField u_next;
  int iterations = 0;
  RVector distances;  // H^s distance between successive iterates
};

// Throws NonContractiveError when fp_max_iters is reached.
LowRegStep lowreg_step(const SpectralField& u_m, double h, const LowRegConfig& config = {});

// u+ - S1(u+) for a proposed step pair.
SpectralField lowreg_residual(const SpectralField& u_m, const SpectralField& u_next, double h);

std::vector<SpectralField> run_lowreg(const SpectralField& u0, double h, std::size_t n_steps,
                                      const LowRegConfig& config = {});

}  // namespace smap
