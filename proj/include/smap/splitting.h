// Exponential splitting for the cubic NLS  i u_t + u_xx + |u|^2 u / 2 = 0.
//
// A step applies, right to left over the coefficient lists,
//   P1(a_1 h) P2(b_1 h) ... P1(a_S h) P2(b_S h) u,
// i.e. P2(b_S h) acts first and P1(a_1 h) last.

#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smap/spectral.h"

namespace smap {

struct SplittingScheme {
  std::string name;
  RVector a;  // dispersive fractions
  RVector b;  // nonlinear fractions
  int declared_order = 1;

  // Throws std::invalid_argument if the lists differ in length or do not
  // each sum to one.
  void validate() const;
  // True when the applied flow sequence, after merging neighbours of the same
  // kind and dropping zero fractions, reads the same in both directions.
  bool is_symmetric() const;
};

// lie, strang, yoshida4. Throws std::invalid_argument on unknown names.
SplittingScheme splitting_preset(std::string_view name);

SpectralField flow_p1(const SpectralField& u, double t);
SpectralField flow_p2(const SpectralField& u, double t);
SpectralField splitting_step(const SpectralField& u, double h,
                             const SplittingScheme& scheme);

// Advances u by dt using equal substeps no longer than max_substep.
SpectralField splitting_advance(const SpectralField& u, double dt,
                                const SplittingScheme& scheme,
                                double max_substep = std::numeric_limits<double>::infinity());

// States at each requested time. times must start at 0 and increase strictly.
std::vector<SpectralField> run_splitting(
    const SpectralField& u0, std::span<const double> times,
    const SplittingScheme& scheme,
    double max_substep = std::numeric_limits<double>::infinity());

}  // namespace smap
