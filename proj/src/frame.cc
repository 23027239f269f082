#include "smap/frame.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace smap {
namespace {

Eigen::Vector3d vec_at(const VectorField3& f, std::size_t n) {
  return {f.comp[0][n], f.comp[1][n], f.comp[2][n]};
}

void check_unit(const VectorField3& t0) {
  double worst = 0.0;
  for (std::size_t n = 0; n < t0.size(); ++n) {
    worst = std::max(worst, std::abs(vec_at(t0, n).norm() - 1.0));
  }
  if (worst > 1e-8) {
    std::ostringstream msg;
    msg << "tangent field is not unit length (max deviation " << worst << ")";
    throw NonUnitTangentError(msg.str());
  }
}

// Phase reduction per unit x that keeps exp(i(theta - slope x)) periodic.
double phase_slope(const CurvatureTorsion& ct, PhaseMode mode) {
  if (mode == PhaseMode::kClosed) return 0.0;
  return (ct.total_torsion - kTwoPi * std::round(ct.total_torsion / kTwoPi)) / kTwoPi;
}

}  // namespace

Frame Frame::from_rows(const VectorField3& t, const VectorField3& e1, const VectorField3& e2) {
  Frame f(t.grid);
  for (std::size_t n = 0; n < f.size(); ++n) {
    f.y[n].row(0) = vec_at(t, n).transpose();
    f.y[n].row(1) = vec_at(e1, n).transpose();
    f.y[n].row(2) = vec_at(e2, n).transpose();
  }
  return f;
}

VectorField3 Frame::row(int r) const {
  VectorField3 out(grid);
  for (std::size_t n = 0; n < size(); ++n) {
    for (int c = 0; c < 3; ++c) out.comp[c][n] = y[n](r, c);
  }
  return out;
}

double orthonormality_defect(const Frame& frame) {
  double worst = 0.0;
  for (const auto& m : frame.y) {
    worst = std::max(worst, (m * m.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double handedness_defect(const Frame& frame) {
  double worst = 0.0;
  for (const auto& m : frame.y) {
    const Eigen::Vector3d t = m.row(0).transpose();
    const Eigen::Vector3d e1 = m.row(1).transpose();
    const Eigen::Vector3d e2 = m.row(2).transpose();
    worst = std::max(worst, (e2 - t.cross(e1)).norm());
  }
  return worst;
}

double tangent_norm_defect(const Frame& frame) {
  double worst = 0.0;
  for (const auto& m : frame.y) worst = std::max(worst, std::abs(m.row(0).norm() - 1.0));
  return worst;
}

CurvatureTorsion curvature_torsion(const VectorField3& t0) {
  check_unit(t0);
  const TorusGrid& g = t0.grid;
  const VectorField3 tx = spectral_derivative(t0);
  const VectorField3 txx = spectral_derivative(tx);
  CurvatureTorsion ct(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Eigen::Vector3d t = vec_at(t0, n);
    const Eigen::Vector3d d1 = vec_at(tx, n);
    const Eigen::Vector3d d2 = vec_at(txx, n);
    const double kappa = d1.norm();
    ct.kappa[n] = kappa;
    if (kappa > kKappaMin) {
      ct.tau[n] = t.cross(d1).dot(d2) / (kappa * kappa);
      ct.tau_defined[n] = 1;
    }
  }
  const SpectralField tau_hat = to_coeffs(std::span<const double>(ct.tau), g);
  const double mean = tau_hat.coeffs()[0].real();
  ct.total_torsion = kTwoPi * mean;
  const RVector prim = to_real_values(antiderivative(tau_hat));
  for (std::size_t n = 0; n < g.size(); ++n) {
    ct.theta[n] = mean * g.node(n) + prim[n] - prim[0];
  }
  return ct;
}

Frame initial_frame_frenet(const VectorField3& t0, PhaseMode mode) {
  const CurvatureTorsion ct = curvature_torsion(t0);
  const double slope = phase_slope(ct, mode);
  const auto min_it = std::min_element(ct.kappa.begin(), ct.kappa.end());
  if (*min_it <= kKappaMin) {
    std::ostringstream msg;
    msg << "curvature " << *min_it << " at node " << (min_it - ct.kappa.begin())
        << " is below " << kKappaMin << "; use the flat construction";
    throw VanishingCurvatureError(msg.str());
  }
  const VectorField3 tx = spectral_derivative(t0);
  Frame f(t0.grid);
  for (std::size_t n = 0; n < f.size(); ++n) {
    const Eigen::Vector3d t = vec_at(t0, n).normalized();
    Eigen::Vector3d normal = vec_at(tx, n);
    normal = (normal - normal.dot(t) * t).normalized();
    const Eigen::Vector3d binormal = t.cross(normal);
    const double angle = ct.theta[n] - slope * t0.grid.node(n);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    f.y[n].row(0) = t.transpose();
    f.y[n].row(1) = (c * normal - s * binormal).transpose();
    f.y[n].row(2) = (s * normal + c * binormal).transpose();
  }
  return f;
}

Frame initial_frame_flat(const VectorField3& t0, const Eigen::Vector3d& b) {
  check_unit(t0);
  if (std::abs(b.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("initial_frame_flat: b must be a unit vector");
  }
  Frame f(t0.grid);
  for (std::size_t n = 0; n < f.size(); ++n) {
    const Eigen::Vector3d t = vec_at(t0, n);
    const double d = t.dot(b);
    if (std::abs(d) > 1e-10) {
      std::ostringstream msg;
      msg << "tangent is not orthogonal to b at node " << n << " (<T0, b> = " << d << ")";
      throw NotFlatError(msg.str());
    }
    f.y[n].row(0) = t.transpose();
    f.y[n].row(1) = b.cross(t).transpose();
    f.y[n].row(2) = b.transpose();
  }
  return f;
}

SpectralField initial_nls_data(const CurvatureTorsion& ct, PhaseMode mode) {
  const double slope = phase_slope(ct, mode);
  CVector v(ct.grid.size());
  for (std::size_t n = 0; n < v.size(); ++n) {
    v[n] = std::polar(ct.kappa[n], ct.theta[n] - slope * ct.grid.node(n));
  }
  return to_coeffs(std::span<const cplx>(v), ct.grid);
}

SpectralField nls_data_from_frame(const Frame& frame) {
  const VectorField3 tx = spectral_derivative(frame.tangent());
  CVector v(frame.size());
  for (std::size_t n = 0; n < v.size(); ++n) {
    const Eigen::Vector3d d = vec_at(tx, n);
    v[n] = cplx(d.dot(frame.y[n].row(1).transpose()), d.dot(frame.y[n].row(2).transpose()));
  }
  return to_coeffs(std::span<const cplx>(v), frame.grid);
}

std::optional<Eigen::Vector3d> flat_normal(const VectorField3& t0, double tol) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (std::size_t n = 0; n < t0.size(); ++n) {
    const Eigen::Vector3d t = vec_at(t0, n);
    m += t * t.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  Eigen::Vector3d b = eig.eigenvectors().col(0).normalized();
  Eigen::Index big = 0;
  b.cwiseAbs().maxCoeff(&big);
  if (b[big] < 0) b = -b;
  for (std::size_t n = 0; n < t0.size(); ++n) {
    if (std::abs(vec_at(t0, n).dot(b)) > tol) return std::nullopt;
  }
  return b;
}

InitialState prepare_initial_state(const VectorField3& t0, std::optional<Eigen::Vector3d> normal) {
  if (normal) {
    Frame f = initial_frame_flat(t0, *normal);
    SpectralField u0 = nls_data_from_frame(f);
    return {std::move(f), std::move(u0), "flat", false};
  }
  // Planar curves take the flat route: it needs no division by the curvature,
  // which spectral differentiation of kinked data never drives exactly to zero.
  if (auto b = flat_normal(t0)) {
    Frame f = initial_frame_flat(t0, *b);
    SpectralField u0 = nls_data_from_frame(f);
    return {std::move(f), std::move(u0), "flat", false};
  }
  const CurvatureTorsion ct = curvature_torsion(t0);
  if (*std::min_element(ct.kappa.begin(), ct.kappa.end()) > kKappaMin) {
    const double excess = ct.total_torsion - kTwoPi * std::round(ct.total_torsion / kTwoPi);
    const bool closed = std::abs(excess) < 1e-8;
    const PhaseMode mode = closed ? PhaseMode::kClosed : PhaseMode::kGeneral;
    Frame f = initial_frame_frenet(t0, mode);
    SpectralField u0 = initial_nls_data(ct, mode);
    return {std::move(f), std::move(u0), "frenet", !closed};
  }
  throw VanishingCurvatureError(
      "curvature vanishes somewhere and the curve is not planar; no frame construction applies");
}

}  // namespace smap
