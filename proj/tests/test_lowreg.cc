#include <gtest/gtest.h>

#include <cmath>

#include "smap/diagnostics.h"
#include "smap/lowreg.h"
#include "smap/splitting.h"
#include "test_util.h"

namespace smap {
namespace {

using testing::coeff_diff;
using testing::random_field;
using testing::random_resolved_field;

// i(h/4) c^2 phi1(ih dxx) conj(c), built mode by mode and in values.
SpectralField cubic_oracle(const SpectralField& c, double h) {
  const TorusGrid& g = c.grid();
  CVector conj_values = to_values(c);
  for (auto& v : conj_values) v = std::conj(v);
  SpectralField conj_c = to_coeffs(conj_values, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = g.wavenumber(i);
    conj_c.coeffs()[i] *= phi1(cplx(0.0, -h * k * k));
  }
  CVector w = to_values(conj_c);
  const CVector cv = to_values(c);
  for (std::size_t n = 0; n < w.size(); ++n) w[n] *= cv[n] * cv[n] * cplx(0.0, h / 4.0);
  return to_coeffs(w, g);
}

TEST(S1Map, ZeroBaseStateLeavesOnlyCandidateTerm) {
  const TorusGrid g(32);
  const SpectralField c = random_field(g, 1, 2.0, 2.0);
  const double h = 0.07;
  EXPECT_LT(coeff_diff(s1_map(SpectralField::zero(g), c, h), cubic_oracle(c, h)), 1e-14);
}

TEST(S1Map, ConstantState) {
  const TorusGrid g(8);
  const double a = 1.4, h = 0.1;
  const SpectralField u = SpectralField::mode(g, 0, a);
  const SpectralField out = s1_map(u, u, h);
  EXPECT_LT(std::abs(out.coeff(0) - a * cplx(1.0, h * a * a / 2.0)), 1e-14);
}

TEST(S1Map, ZeroStepReturnsBaseState) {
  const TorusGrid g(32);
  const SpectralField u = random_field(g, 2);
  const SpectralField c = random_field(g, 3);
  EXPECT_LT(coeff_diff(s1_map(u, c, 0.0), u), 1e-15);
}

TEST(S1Map, GridMismatchThrows) {
  EXPECT_THROW(s1_map(SpectralField::zero(TorusGrid(8)), SpectralField::zero(TorusGrid(16)), 0.1),
               std::invalid_argument);
}

TEST(LowRegStep, ZeroDataConvergesImmediately) {
  const LowRegStep s = lowreg_step(SpectralField::zero(TorusGrid(16)), 0.1);
  EXPECT_EQ(s.iterations, 1);
  EXPECT_EQ(testing::max_abs(s.u_next.coeffs()), 0.0);
}

TEST(LowRegStep, ConstantDataMatchesScalarFixedPoint) {
  const double a = 1.2, h = 0.05;
  // z = a + i(h/4)(a^3 + |z|^2 z), solved by Newton on (Re z, Im z).
  cplx z = a;
  for (int it = 0; it < 50; ++it) {
    const cplx f = z - a - cplx(0.0, h / 4.0) * (a * a * a + std::norm(z) * z);
    const double x = z.real(), y = z.imag();
    const double c = h / 4.0;
    const double j11 = 1.0 + c * 2 * x * y, j12 = c * (x * x + 3 * y * y);
    const double j21 = -c * (3 * x * x + y * y), j22 = 1.0 - c * 2 * x * y;
    const double det = j11 * j22 - j12 * j21;
    z -= cplx((j22 * f.real() - j12 * f.imag()) / det, (-j21 * f.real() + j11 * f.imag()) / det);
  }
  const LowRegStep s = lowreg_step(SpectralField::mode(TorusGrid(8), 0, a), h);
  EXPECT_LT(std::abs(s.u_next.coeff(0) - z), 1e-12);
}

TEST(LowRegStep, DistanceToFreeFlowIsOrderH) {
  const SpectralField u = random_resolved_field(TorusGrid(64), 4, 1.5);
  const double norm3 = std::pow(sobolev_norm(u, 1.0), 3);
  double prev = 0.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const LowRegStep s = lowreg_step(u, h);
    const double d = sobolev_norm(s.u_next - free_propagator(u, h), 1.0);
    EXPECT_LT(d, h * norm3);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / d, 2.0, 0.1);
    }
    prev = d;
  }
}

TEST(LowRegStep, ResidualWithinTenTimesTolerance) {
  const SpectralField u = random_resolved_field(TorusGrid(64), 5, 1.5);
  LowRegConfig cfg;
  cfg.fp_tolerance = 1e-11;
  const LowRegStep s = lowreg_step(u, 0.02, cfg);
  EXPECT_LE(sobolev_norm(lowreg_residual(u, s.u_next, 0.02), 1.0), 10 * cfg.fp_tolerance);
}

TEST(LowRegStep, BackwardStepRecoversState) {
  const SpectralField u = random_resolved_field(TorusGrid(64), 6, 1.5);
  const LowRegConfig cfg;
  const double h = 0.02;
  const SpectralField v = lowreg_step(u, h, cfg).u_next;
  const SpectralField back = lowreg_step(v, -h, cfg).u_next;
  EXPECT_LE(sobolev_norm(back - u, 1.0), 10 * cfg.fp_tolerance);
}

TEST(LowRegStep, IterationContractsAtSmallSteps) {
  const SpectralField u = random_resolved_field(TorusGrid(64), 7, 1.5);
  const LowRegStep s = lowreg_step(u, 0.01);
  ASSERT_GE(s.distances.size(), 3u);
  for (std::size_t i = 1; i < s.distances.size(); ++i) {
    if (s.distances[i - 1] < 1e-13) break;
    EXPECT_LE(s.distances[i] / s.distances[i - 1], 0.5);
  }
}

TEST(LowRegStep, IterationCountIndependentOfResolution) {
  const SpectralField base = random_resolved_field(TorusGrid(64), 8, 2.0);
  const double h = 1.0 / 64;
  int counts[3];
  int idx = 0;
  for (std::size_t n : {64u, 256u, 1024u}) {
    counts[idx++] = lowreg_step(resample(base, TorusGrid(n)), h).iterations;
  }
  EXPECT_LE(std::abs(counts[0] - counts[1]), 1);
  EXPECT_LE(std::abs(counts[0] - counts[2]), 1);
}

TEST(LowRegStep, NonContractiveReportsFailure) {
  const SpectralField u = random_field(TorusGrid(64), 9, 1.0, 20.0);
  LowRegConfig cfg;
  cfg.fp_max_iters = 20;
  try {
    lowreg_step(u, 1.0, cfg);
    FAIL() << "expected NonContractiveError";
  } catch (const NonContractiveError& e) {
    EXPECT_GE(e.iterations(), 1);
    EXPECT_LE(e.iterations(), 20);
    EXPECT_FALSE(e.last_distance() < cfg.fp_tolerance);
  }
}

TEST(LowRegConfig, Validation) {
  LowRegConfig c;
  c.fp_tolerance = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.fp_max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunLowReg, ZeroStepsReturnsInitialState) {
  const SpectralField u0 = random_field(TorusGrid(16), 10);
  const auto out = run_lowreg(u0, 0.1, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(coeff_diff(out[0], u0), 0.0);
}

TEST(RunLowReg, FailingStepIndexIsPropagated) {
  const SpectralField u0 = random_field(TorusGrid(64), 11, 1.0, 20.0);
  LowRegConfig cfg;
  cfg.fp_max_iters = 5;
  try {
    run_lowreg(u0, 0.5, 3, cfg);
    FAIL() << "expected NonContractiveError";
  } catch (const NonContractiveError& e) {
    EXPECT_EQ(e.step_index(), 0u);
    EXPECT_NE(std::string(e.what()).find("at step 0"), std::string::npos);
  }
}

TEST(RunLowReg, AtLeastFirstOrderOnSmoothData) {
  // Reference from fourth-order splitting at a much smaller step.
  const SpectralField u0 = random_resolved_field(TorusGrid(64), 12, 1.0);
  const double t_end = 0.5;
  const SpectralField ref = splitting_advance(u0, t_end, splitting_preset("yoshida4"), 1.0 / 4096);
  RVector hs, errs;
  for (int e = 4; e <= 8; ++e) {
    const double h = std::ldexp(1.0, -e);
    const auto traj = run_lowreg(u0, h, static_cast<std::size_t>(std::lround(t_end / h)));
    hs.push_back(h);
    errs.push_back(sobolev_norm(traj.back() - ref, 1.0));
  }
  EXPECT_GE(order_estimate(hs, errs), 0.8);
}

TEST(RunLowReg, MassDriftShrinksQuadratically) {
  // The step is symmetric but not an L2 isometry, so the mass drifts at the
  // scheme's accuracy instead of staying at roundoff.
  const SpectralField u0 = random_resolved_field(TorusGrid(64), 13, 1.0);
  const double m0 = nls_mass(u0);
  double prev = 0.0;
  for (int e = 7; e <= 9; ++e) {
    const double h = std::ldexp(1.0, -e);
    double drift = 0.0;
    for (const auto& u : run_lowreg(u0, h, static_cast<std::size_t>(std::lround(1.0 / h)))) {
      drift = std::max(drift, std::abs(nls_mass(u) - m0) / m0);
    }
    if (prev > 0.0) {
      EXPECT_NEAR(prev / drift, 4.0, 0.3);
    }
    prev = drift;
  }
}

}  // namespace
}  // namespace smap
