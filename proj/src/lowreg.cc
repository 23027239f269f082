#include "smap/lowreg.h"

#include <cmath>
#include <span>
#include <sstream>

namespace smap {
namespace {

// i(h/4) [c^2 phi1(sign i h dxx) conj(c)] for the given field c.
SpectralField cubic_term(const SpectralField& c, double h, int sign) {
  const CVector cv = to_values(c);
  CVector prod = to_values(phi1_propagator(conjugate(c), h, sign));
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= cv[i] * cv[i];
  SpectralField out = to_coeffs(std::span<const cplx>(prod), c.grid());
  out *= cplx(0.0, 0.25 * h);
  return out;
}

// The candidate-independent part of S1.
SpectralField s1_fixed_part(const SpectralField& u_m, double h) {
  return free_propagator(u_m + cubic_term(u_m, h, -1), h);
}

double distance(const SpectralField& a, const SpectralField& b, double s) {
  return sobolev_norm(a - b, s);
}

}  // namespace

void LowRegConfig::validate() const {
  if (!(fp_tolerance > 0.0)) throw std::invalid_argument("fp_tolerance must be positive");
  if (fp_max_iters < 1) throw std::invalid_argument("fp_max_iters must be >= 1");
  if (s_norm < 0.0) throw std::invalid_argument("s_norm must be >= 0");
}

SpectralField s1_map(const SpectralField& u_m, const SpectralField& candidate, double h) {
  if (!(u_m.grid() == candidate.grid())) throw std::invalid_argument("s1_map: grid mismatch");
  return s1_fixed_part(u_m, h) + cubic_term(candidate, h, +1);
}

LowRegStep lowreg_step(const SpectralField& u_m, double h, const LowRegConfig& config) {
  config.validate();
  const SpectralField fixed = s1_fixed_part(u_m, h);
  SpectralField current = free_propagator(u_m, h);
  LowRegStep result{current, 0, {}};
  for (int it = 1; it <= config.fp_max_iters; ++it) {
    SpectralField next = fixed + cubic_term(current, h, +1);
    const double d = distance(next, current, config.s_norm);
    result.distances.push_back(d);
    current = std::move(next);
    result.iterations = it;
    if (d < config.fp_tolerance) {
      result.u_next = std::move(current);
      return result;
    }
    if (!std::isfinite(d)) break;  // diverged; further iterations stay non-finite
  }
  std::ostringstream msg;
  msg << "low-regularity fixed point did not converge in " << result.iterations
      << " iterations (last distance " << result.distances.back() << ", h = " << h
      << "); reduce the step size";
  throw NonContractiveError(msg.str(), result.iterations, result.distances.back());
}

SpectralField lowreg_residual(const SpectralField& u_m, const SpectralField& u_next, double h) {
  return u_next - s1_map(u_m, u_next, h);
}

std::vector<SpectralField> run_lowreg(const SpectralField& u0, double h, std::size_t n_steps,
                                      const LowRegConfig& config) {
  std::vector<SpectralField> out;
  out.reserve(n_steps + 1);
  out.push_back(u0);
  for (std::size_t m = 0; m < n_steps; ++m) {
    try {
      out.push_back(lowreg_step(out.back(), h, config).u_next);
    } catch (const NonContractiveError& e) {
      std::ostringstream msg;
      msg << e.what() << " at step " << m;
      throw NonContractiveError(msg.str(), e.iterations(), e.last_distance(), m);
    }
  }
  return out;
}

}  // namespace smap
