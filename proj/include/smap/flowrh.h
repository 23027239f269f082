// Low-regularity quadratures for the first Magnus term of the frame ODE and
// the resulting step map (FLowRH), plus the Scheme B driver.

#pragma once

#include "smap/frame.h"
#include "smap/lowreg.h"
#include "smap/magnus.h"
#include "smap/spectral.h"

namespace smap {

// Q1 = h phi1(ih dxx) (e^{-ih dxx} d_x u_next + d_x u_m) / 2.
SpectralField quadrature_q1(const SpectralField& u_m, const SpectralField& u_next, double h);

// Q2 by the literal O(N^2) double sum over k1 - k2 = l split at k1^2 >= k2^2.
SpectralField quadrature_q2_naive(const SpectralField& u_m, const SpectralField& u_next, double h);
// The same sums through index-restricted convolutions, O(N log^2 N).
SpectralField quadrature_q2_fast(const SpectralField& u_m, const SpectralField& u_next, double h);

struct FlowRH {
  SkewMatrixField omega;
  double q2_imag_max = 0.0;  // max |Im Q2(x_n)|, dropped from omega
};

// a = Im Q1, b = Re Q1, c = Re Q2 / 2.
FlowRH assemble_flowrh(const SpectralField& u_m, const SpectralField& u_next, double h);

Frame scheme_b_step(const Frame& frame, const SpectralField& u_m, const SpectralField& u_next,
                    double h);

Trajectory scheme_b_run(const InitialState& init, double h, double t_end,
                        const LowRegConfig& config = {}, const TrajectoryOptions& options = {});

}  // namespace smap
