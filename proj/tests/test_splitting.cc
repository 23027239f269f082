#include <gtest/gtest.h>

#include <cmath>

#include "smap/diagnostics.h"
#include "smap/frame.h"
#include "smap/presets.h"
#include "smap/splitting.h"
#include "test_util.h"

namespace smap {
namespace {

using testing::coeff_diff;
using testing::max_abs_diff;
using testing::random_field;

// Integrating-factor RK4 for u_t = i u_xx + (i/2)|u|^2 u, used as an
// independent reference solver.
SpectralField nls_rhs_twisted(const SpectralField& w, double t) {
  CVector u = to_values(free_propagator(w, t));
  for (auto& x : u) x *= cplx(0.0, 0.5) * std::norm(x);
  return free_propagator(to_coeffs(u, w.grid()), -t);
}

SpectralField ifrk4(const SpectralField& u0, double t_end, std::size_t steps) {
  const double dt = t_end / static_cast<double>(steps);
  SpectralField w = u0;
  for (std::size_t m = 0; m < steps; ++m) {
    const double t = dt * static_cast<double>(m);
    const SpectralField k1 = nls_rhs_twisted(w, t);
    const SpectralField k2 = nls_rhs_twisted(w + cplx(dt / 2) * k1, t + dt / 2);
    const SpectralField k3 = nls_rhs_twisted(w + cplx(dt / 2) * k2, t + dt / 2);
    const SpectralField k4 = nls_rhs_twisted(w + cplx(dt) * k3, t + dt);
    w += cplx(dt / 6) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);
  }
  return free_propagator(w, t_end);
}

SpectralField smooth_u0(std::size_t n) {
  return prepare_initial_state(preset_smooth(TorusGrid(n))).u0;
}

TEST(FlowP1, ZeroTimeAndPlaneWave) {
  const TorusGrid g(16);
  const SpectralField f = random_field(g, 1);
  EXPECT_EQ(coeff_diff(flow_p1(f, 0.0), f), 0.0);
  const double h = 0.37;
  const SpectralField p = flow_p1(SpectralField::mode(g, 1, 1.0), h);
  CVector expected(16);
  for (std::size_t n = 0; n < 16; ++n) expected[n] = std::polar(1.0, g.node(n) - h);
  EXPECT_LT(max_abs_diff(to_values(p), expected), 1e-14);
}

TEST(FlowP1, PreservesH1Norm) {
  const SpectralField f = random_field(TorusGrid(64), 2);
  EXPECT_NEAR(sobolev_norm(flow_p1(f, 0.9), 1.0), sobolev_norm(f, 1.0),
              1e-12 * sobolev_norm(f, 1.0));
}

TEST(FlowP2, ConstantData) {
  const TorusGrid g(8);
  const cplx a(0.6, -0.8);
  const double t = 1.7;
  const SpectralField out = flow_p2(SpectralField::mode(g, 0, a), t);
  const cplx expected = a * std::polar(1.0, t * std::norm(a) / 2.0);
  for (const auto& v : to_values(out)) EXPECT_LT(std::abs(v - expected), 1e-15);
}

TEST(FlowP2, ZeroTimeAndModulusInvariance) {
  const SpectralField f = random_field(TorusGrid(64), 3, 1.0, 3.0);
  EXPECT_LT(coeff_diff(flow_p2(f, 0.0), f), 1e-15);
  const CVector before = to_values(f);
  const CVector after = to_values(flow_p2(f, 2.3));
  // Values pass through two transforms, so compare moduli at roundoff level.
  for (std::size_t n = 0; n < before.size(); ++n) {
    EXPECT_NEAR(std::abs(after[n]), std::abs(before[n]), 1e-14 * (1.0 + std::abs(before[n])));
  }
}

TEST(SplittingPreset, Coefficients) {
  const SplittingScheme strang = splitting_preset("strang");
  EXPECT_EQ(strang.a, (RVector{0.5, 0.5}));
  EXPECT_EQ(strang.b, (RVector{1.0, 0.0}));
  EXPECT_EQ(strang.declared_order, 2);
  const SplittingScheme lie = splitting_preset("lie");
  EXPECT_EQ(lie.a, RVector{1.0});
  EXPECT_EQ(lie.b, RVector{1.0});
  EXPECT_EQ(lie.declared_order, 1);
  const SplittingScheme y4 = splitting_preset("yoshida4");
  double sa = 0, sb = 0;
  for (double v : y4.a) sa += v;
  for (double v : y4.b) sb += v;
  EXPECT_NEAR(sa, 1.0, 1e-15);
  EXPECT_NEAR(sb, 1.0, 1e-15);
  EXPECT_EQ(y4.declared_order, 4);
  // Triple jump weights.
  const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double g2 = 1.0 - 2.0 * g1;
  EXPECT_NEAR(y4.b[0], g1, 1e-15);
  EXPECT_NEAR(y4.b[1], g2, 1e-15);
  EXPECT_THROW(splitting_preset("ruth"), std::invalid_argument);
}

TEST(SplittingPreset, SymmetryPredicate) {
  EXPECT_TRUE(splitting_preset("strang").is_symmetric());
  EXPECT_TRUE(splitting_preset("yoshida4").is_symmetric());
  EXPECT_FALSE(splitting_preset("lie").is_symmetric());
  // The other symmetric shape: P2(h/2) P1(h) P2(h/2).
  const SplittingScheme alt{"alt", {0.0, 1.0}, {0.5, 0.5}, 2};
  EXPECT_TRUE(alt.is_symmetric());
  const SplittingScheme skewed{"skewed", {0.3, 0.7}, {1.0, 0.0}, 1};
  EXPECT_FALSE(skewed.is_symmetric());
}

TEST(SplittingScheme, InconsistentCoefficientsRejected) {
  const SplittingScheme bad{"bad", {0.5, 0.4}, {1.0, 0.0}, 2};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  const SplittingScheme ragged{"ragged", {1.0}, {0.5, 0.5}, 1};
  EXPECT_THROW(ragged.validate(), std::invalid_argument);
  const SpectralField f = random_field(TorusGrid(16), 4);
  EXPECT_THROW(splitting_step(f, 0.1, bad), std::invalid_argument);
}

TEST(SplittingStep, LieOnConstantData) {
  const TorusGrid g(8);
  const double a = 1.3, h = 0.2;
  const SpectralField out = splitting_step(SpectralField::mode(g, 0, a), h, splitting_preset("lie"));
  EXPECT_LT(std::abs(out.coeff(0) - a * std::polar(1.0, h * a * a / 2.0)), 1e-15);
}

TEST(SplittingStep, StrangIsHalfDispersionFullNonlinearHalfDispersion) {
  const SpectralField u = random_field(TorusGrid(32), 5, 1.5, 2.0);
  const double h = 0.05;
  const SpectralField expected = flow_p1(flow_p2(flow_p1(u, h / 2), h), h / 2);
  EXPECT_LT(coeff_diff(splitting_step(u, h, splitting_preset("strang")), expected), 1e-15);
}

TEST(SplittingStep, StrangOnPlaneWaveMatchesDispersionRelation) {
  const TorusGrid g(16);
  const int k = 2;
  const double amp = 1.5;
  for (double h : {0.1, 0.05, 0.025}) {
    const SpectralField out =
        splitting_step(SpectralField::mode(g, k, amp), h, splitting_preset("strang"));
    const double omega = -static_cast<double>(k * k) + amp * amp / 2.0;
    CVector exact(16);
    for (std::size_t n = 0; n < 16; ++n) exact[n] = amp * std::polar(1.0, k * g.node(n) + omega * h);
    EXPECT_LT(max_abs_diff(to_values(out), exact), 10.0 * h * h * h);
  }
}

TEST(SplittingStep, ZeroStaysZero) {
  const SpectralField z = SpectralField::zero(TorusGrid(16));
  for (const char* name : {"lie", "strang", "yoshida4"}) {
    EXPECT_EQ(testing::max_abs(splitting_step(z, 0.1, splitting_preset(name)).coeffs()), 0.0);
  }
}

TEST(SplittingStep, MassConservedOverThousandSteps) {
  const SpectralField u0 = random_field(TorusGrid(64), 6, 2.0, 2.0);
  for (const char* name : {"strang", "yoshida4"}) {
    SpectralField u = u0;
    const SplittingScheme s = splitting_preset(name);
    for (int m = 0; m < 1000; ++m) u = splitting_step(u, 0.01, s);
    EXPECT_NEAR(nls_mass(u), nls_mass(u0), 1e-11 * nls_mass(u0)) << name;
  }
}

TEST(SplittingStep, SymmetricPresetsAreTimeReversible) {
  const SpectralField u = random_field(TorusGrid(64), 7, 2.0, 2.0);
  for (const char* name : {"strang", "yoshida4"}) {
    const SplittingScheme s = splitting_preset(name);
    const SpectralField back = splitting_step(splitting_step(u, 0.05, s), -0.05, s);
    EXPECT_LT(coeff_diff(back, u), 1e-10) << name;
  }
}

TEST(RunSplitting, SingleTimeReturnsInitialState) {
  const SpectralField u0 = random_field(TorusGrid(16), 8);
  const RVector times{0.0};
  const auto out = run_splitting(u0, times, splitting_preset("strang"));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(coeff_diff(out[0], u0), 0.0);
}

TEST(RunSplitting, UniformTimesMatchRepeatedSteps) {
  const SpectralField u0 = random_field(TorusGrid(32), 9, 2.0, 2.0);
  const SplittingScheme s = splitting_preset("strang");
  const RVector times{0.0, 0.1, 0.2, 0.3};
  const auto out = run_splitting(u0, times, s);
  SpectralField u = u0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    u = splitting_step(u, 0.1, s);
    EXPECT_LT(coeff_diff(out[i], u), 1e-14);
  }
}

TEST(RunSplitting, GaussNodeTimeGrid) {
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double h = 0.1;
  const int steps = 5;
  RVector times{0.0};
  for (int m = 0; m < steps; ++m) {
    times.push_back(h * m + h * c1);
    times.push_back(h * m + h * c2);
  }
  // Gaps alternate between h (c2 - c1) and h (1 - c2 + c1).
  for (std::size_t i = 2; i < times.size(); ++i) {
    const double gap = times[i] - times[i - 1];
    const double expected = (i % 2 == 0) ? h * (c2 - c1) : h * (1.0 - c2 + c1);
    EXPECT_NEAR(gap, expected, 1e-15);
  }
  const SpectralField u0 = random_field(TorusGrid(32), 10, 2.0, 2.0);
  const SplittingScheme s = splitting_preset("strang");
  const auto out = run_splitting(u0, times, s);
  ASSERT_EQ(out.size(), 2u * steps + 1u);
  SpectralField u = u0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    u = splitting_step(u, times[i] - times[i - 1], s);
    EXPECT_LT(coeff_diff(out[i], u), 1e-13);
  }
}

TEST(RunSplitting, RejectsBadTimes) {
  const SpectralField u0 = random_field(TorusGrid(16), 11);
  const SplittingScheme s = splitting_preset("strang");
  EXPECT_THROW(run_splitting(u0, RVector{0.0, 0.2, 0.1}, s), std::invalid_argument);
  EXPECT_THROW(run_splitting(u0, RVector{0.1, 0.2}, s), std::invalid_argument);
}

TEST(SplittingAdvance, SubstepsAreEqualAndBounded) {
  const SpectralField u0 = random_field(TorusGrid(32), 12, 2.0, 2.0);
  const SplittingScheme s = splitting_preset("strang");
  SpectralField u = u0;
  for (int i = 0; i < 3; ++i) u = splitting_step(u, 0.1, s);
  EXPECT_LT(coeff_diff(splitting_advance(u0, 0.3, s, 0.11), u), 1e-14);
}

TEST(SplittingOrder, SlopesOnSmoothDataMatchDeclaredOrder) {
  // Fourth order is pre-asymptotic down to about 2^-7 on this data, so the
  // slope is measured from 2^-8 down.
  const SpectralField u0 = smooth_u0(64);
  const double t_end = 0.5;
  const SpectralField ref = ifrk4(u0, t_end, 16384);
  for (const char* name : {"strang", "yoshida4"}) {
    const SplittingScheme s = splitting_preset(name);
    RVector hs, errs;
    for (int e = 8; e <= 11; ++e) {
      const double h = std::ldexp(1.0, -e);
      const SpectralField u = splitting_advance(u0, t_end, s, h);
      hs.push_back(h);
      errs.push_back(sobolev_norm(u - ref, 1.0));
    }
    EXPECT_NEAR(order_estimate(hs, errs), s.declared_order, 0.25) << name;
  }
}

}  // namespace
}  // namespace smap
