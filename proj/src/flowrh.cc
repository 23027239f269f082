#include "smap/flowrh.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "smap/toeplitz.h"

namespace smap {
namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// Per-wavenumber factors shared by the naive and fast evaluations.
struct Q2Factors {
  CVector first_k1;   // h phi1(-ih k^2)(e^{ih k^2} u+_k + u_k)/2
  CVector first_k2;   // (conj u+_k + conj u_k)/2
  CVector second_k1;  // (u+_k + u_k)/2
  CVector second_k2;  // h phi1(ih k^2)(e^{-ih k^2} conj u+_k + conj u_k)/2
};

Q2Factors q2_factors(const SpectralField& u_m, const SpectralField& u_next, double h) {
  const TorusGrid& g = u_m.grid();
  const std::size_t n = g.size();
  Q2Factors f{CVector(n), CVector(n), CVector(n), CVector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double k = g.wavenumber(i);
    const double k2 = k * k;
    const cplx up = u_next.coeffs()[i];
    const cplx um = u_m.coeffs()[i];
    f.first_k1[i] = h * phi1(cplx(0.0, -h * k2)) * (std::polar(1.0, h * k2) * up + um) * 0.5;
    f.first_k2[i] = (std::conj(up) + std::conj(um)) * 0.5;
    f.second_k1[i] = (up + um) * 0.5;
    f.second_k2[i] = h * phi1(cplx(0.0, h * k2)) *
                     (std::polar(1.0, -h * k2) * std::conj(up) + std::conj(um)) * 0.5;
  }
  return f;
}

// Sequence over the wavenumber window; reverse = true maps index j to k = -j.
IndexedSeq window_seq(const TorusGrid& g, const CVector& by_slot, bool reverse) {
  const int lo = g.min_wavenumber();
  const int hi = g.max_wavenumber();
  IndexedSeq s;
  s.first = reverse ? -hi : lo;
  s.values.resize(g.size());
  for (int idx = s.first; idx <= s.last(); ++idx) {
    const int k = reverse ? -idx : idx;
    s.values[idx - s.first] = by_slot[g.slot(k)];
  }
  return s;
}

}  // namespace

SpectralField quadrature_q1(const SpectralField& u_m, const SpectralField& u_next, double h) {
  require_same_grid(u_m, u_next, "quadrature_q1");
  SpectralField avg = free_propagator(derivative(u_next), -h) + derivative(u_m);
  avg *= 0.5 * h;
  return phi1_propagator(avg, h, +1);
}

SpectralField quadrature_q2_naive(const SpectralField& u_m, const SpectralField& u_next,
                                  double h) {
  require_same_grid(u_m, u_next, "quadrature_q2_naive");
  const TorusGrid& g = u_m.grid();
  const Q2Factors f = q2_factors(u_m, u_next, h);
  SpectralField out = SpectralField::zero(g);
  for (int k1 = g.min_wavenumber(); k1 <= g.max_wavenumber(); ++k1) {
    for (int k2 = g.min_wavenumber(); k2 <= g.max_wavenumber(); ++k2) {
      const int l = k1 - k2;
      if (!g.contains(l)) continue;
      const std::size_t s1 = g.slot(k1);
      const std::size_t s2 = g.slot(k2);
      if (k1 * k1 >= k2 * k2) {
        out.coeff(l) += f.first_k1[s1] * f.first_k2[s2];
      } else {
        out.coeff(l) += f.second_k1[s1] * f.second_k2[s2];
      }
    }
  }
  return out;
}

SpectralField quadrature_q2_fast(const SpectralField& u_m, const SpectralField& u_next,
                                 double h) {
  require_same_grid(u_m, u_next, "quadrature_q2_fast");
  const TorusGrid& g = u_m.grid();
  const Q2Factors f = q2_factors(u_m, u_next, h);
  const int lo = g.min_wavenumber();
  const std::size_t count = g.size();
  // With k = k1 and j = -k2, l = k + j and k1^2 >= k2^2 becomes k^2 >= j^2.
  const IndexedSeq w = window_seq(g, f.first_k1, false);
  const IndexedSeq z = window_seq(g, f.first_k2, true);
  const IndexedSeq w2 = window_seq(g, f.second_k1, false);
  const IndexedSeq z2 = window_seq(g, f.second_k2, true);
  const CVector first = index_restricted_convolution(w, z, lo, count);
  const CVector second_all = full_convolution(w2, z2, lo, count);
  const CVector second_res = index_restricted_convolution(w2, z2, lo, count);
  SpectralField out = SpectralField::zero(g);
  for (std::size_t i = 0; i < count; ++i) {
    out.coeff(lo + static_cast<int>(i)) = first[i] + second_all[i] - second_res[i];
  }
  return out;
}

FlowRH assemble_flowrh(const SpectralField& u_m, const SpectralField& u_next, double h) {
  const CVector q1 = to_values(quadrature_q1(u_m, u_next, h));
  const CVector q2 = to_values(quadrature_q2_fast(u_m, u_next, h));
  FlowRH out{SkewMatrixField(u_m.grid()), 0.0};
  for (std::size_t n = 0; n < q1.size(); ++n) {
    out.omega.a[n] = q1[n].imag();
    out.omega.b[n] = q1[n].real();
    out.omega.c[n] = 0.5 * q2[n].real();
    out.q2_imag_max = std::max(out.q2_imag_max, std::abs(q2[n].imag()));
  }
  return out;
}

Frame scheme_b_step(const Frame& frame, const SpectralField& u_m, const SpectralField& u_next,
                    double h) {
  return apply_rotation(exp_so3(assemble_flowrh(u_m, u_next, h).omega), frame);
}

Trajectory scheme_b_run(const InitialState& init, double h, double t_end,
                        const LowRegConfig& config, const TrajectoryOptions& options) {
  const std::size_t steps = step_count(h, t_end);
  Trajectory traj;
  Frame frame = init.frame;
  SpectralField u = init.u0;
  traj.times.push_back(0.0);
  traj.frames.push_back(frame);
  if (options.observer) options.observer(0, 0.0, frame, u);
  for (std::size_t m = 0; m < steps; ++m) {
    SpectralField next = u;
    try {
      next = lowreg_step(u, h, config).u_next;
    } catch (const NonContractiveError& e) {
      std::ostringstream msg;
      msg << e.what() << " at step " << m;
      throw NonContractiveError(msg.str(), e.iterations(), e.last_distance(), m);
    }
    frame = scheme_b_step(frame, u, next, h);
    u = std::move(next);
    const double t = static_cast<double>(m + 1) * h;
    if (m + 1 == steps || (options.stride > 0 && (m + 1) % options.stride == 0)) {
      traj.times.push_back(t);
      traj.frames.push_back(frame);
    }
    if (options.observer) options.observer(m + 1, t, frame, u);
  }
  return traj;
}

}  // namespace smap
