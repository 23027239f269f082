// Conserved quantities, error norms and convergence slopes.

#pragma once

#include <span>

#include "smap/frame.h"
#include "smap/spectral.h"

namespace smap {

// E = int |T_x|^2.
double energy_E(const VectorField3& t);
double energy_E(const Frame& frame);
// I = int |T x T_xx|^2 + |T_xx|^2 - q |T_x|^4. Only q = 3/2 gives a quantity
// conserved by the flow (it equals twice the NLS Hamiltonian of u); q = 3/4
// evaluates the variant with the smaller quartic weight.
inline constexpr double kActionQuartic = 1.5;
double action_I(const VectorField3& t, double quartic = kActionQuartic);
// (int |T_a - T_b|^2)^{1/2}. Throws std::invalid_argument on grid mismatch.
double l2_frame_error(const VectorField3& a, const VectorField3& b);
// Least-squares slope of log(err) against log(h). Throws on non-positive data.
double order_estimate(std::span<const double> hs, std::span<const double> errs);
// 2 pi sum |u_k|^2.
double nls_mass(const SpectralField& u);

struct ConservedReport {
  RVector times;
  RVector energy_E;
  RVector action_I;
  RVector nls_mass;

  void record(double t, const Frame& frame, const SpectralField& u);
  // max_t |q(t) - q(0)| / |q(0)| (absolute when q(0) = 0).
  static double relative_drift(const RVector& q);
};

}  // namespace smap
