#include "smap/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smap {

double energy_E(const VectorField3& t) {
  const VectorField3 tx = spectral_derivative(t);
  RVector density(t.size());
  for (std::size_t n = 0; n < t.size(); ++n) {
    for (int c = 0; c < 3; ++c) density[n] += tx.comp[c][n] * tx.comp[c][n];
  }
  return torus_integral(density);
}

double energy_E(const Frame& frame) { return energy_E(frame.tangent()); }

double action_I(const VectorField3& t, double quartic) {
  const VectorField3 tx = spectral_derivative(t);
  const VectorField3 txx = spectral_derivative(tx);
  RVector density(t.size());
  for (std::size_t n = 0; n < t.size(); ++n) {
    const Eigen::Vector3d v(t.comp[0][n], t.comp[1][n], t.comp[2][n]);
    const Eigen::Vector3d d1(tx.comp[0][n], tx.comp[1][n], tx.comp[2][n]);
    const Eigen::Vector3d d2(txx.comp[0][n], txx.comp[1][n], txx.comp[2][n]);
    const double s1 = d1.squaredNorm();
    density[n] = v.cross(d2).squaredNorm() + d2.squaredNorm() - quartic * s1 * s1;
  }
  return torus_integral(density);
}

double l2_frame_error(const VectorField3& a, const VectorField3& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("l2_frame_error: grid mismatch");
  RVector density(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    for (int c = 0; c < 3; ++c) {
      const double d = a.comp[c][n] - b.comp[c][n];
      density[n] += d * d;
    }
  }
  return std::sqrt(torus_integral(density));
}

double order_estimate(std::span<const double> hs, std::span<const double> errs) {
  if (hs.size() != errs.size() || hs.size() < 2) {
    throw std::invalid_argument("order_estimate: need at least two (h, error) pairs");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0) || !(errs[i] > 0.0)) {
      throw std::invalid_argument("order_estimate: step sizes and errors must be positive");
    }
    const double x = std::log(hs[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("order_estimate: step sizes must differ");
  return (n * sxy - sx * sy) / denom;
}

double nls_mass(const SpectralField& u) {
  double acc = 0.0;
  for (const auto& c : u.coeffs()) acc += std::norm(c);
  return kTwoPi * acc;
}

void ConservedReport::record(double t, const Frame& frame, const SpectralField& u) {
  const VectorField3 tangent = frame.tangent();
  times.push_back(t);
  energy_E.push_back(smap::energy_E(tangent));
  action_I.push_back(smap::action_I(tangent));
  nls_mass.push_back(smap::nls_mass(u));
}

double ConservedReport::relative_drift(const RVector& q) {
  if (q.empty()) return 0.0;
  const double scale = q.front() != 0.0 ? std::abs(q.front()) : 1.0;
  double worst = 0.0;
  for (double v : q) worst = std::max(worst, std::abs(v - q.front()));
  return worst / scale;
}

}  // namespace smap
