// Initial parallel frames and NLS data for the Hasimoto transform.
//
// A frame stores, per node, the 3x3 matrix y whose rows are (T, e1, e2) with
// e2 = T x e1. Along a parallel frame T_x = Re(u) e1 + Im(u) e2.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smap/spectral.h"

namespace smap {

inline constexpr double kKappaMin = 1e-8;

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NonUnitTangentError : public FrameError {
 public:
  using FrameError::FrameError;
};
class VanishingCurvatureError : public FrameError {
 public:
  using FrameError::FrameError;
};
class NotFlatError : public FrameError {
 public:
  using FrameError::FrameError;
};

struct Frame {
  explicit Frame(TorusGrid g) : grid(g), y(g.size(), Eigen::Matrix3d::Identity()) {}
  static Frame from_rows(const VectorField3& t, const VectorField3& e1,
                         const VectorField3& e2);

  std::size_t size() const { return y.size(); }
  VectorField3 row(int r) const;
  VectorField3 tangent() const { return row(0); }
  VectorField3 e1() const { return row(1); }
  VectorField3 e2() const { return row(2); }

  TorusGrid grid;
  std::vector<Eigen::Matrix3d> y;
};

// max over nodes and entries of |y y^T - I|.
double orthonormality_defect(const Frame& frame);
// max over nodes of ||e2 - T x e1||.
double handedness_defect(const Frame& frame);
// max over nodes of | ||T|| - 1 |.
double tangent_norm_defect(const Frame& frame);

struct CurvatureTorsion {
  explicit CurvatureTorsion(TorusGrid g)
      : grid(g), kappa(g.size()), tau(g.size()), tau_defined(g.size()), theta(g.size()) {}

  TorusGrid grid;
  RVector kappa;
  RVector tau;                     // zero where undefined
  std::vector<char> tau_defined;   // kappa > kKappaMin
  RVector theta;                   // theta(x) = int_0^x tau, theta(0) = 0
  double total_torsion = 0.0;      // int over the torus
};

// Throws NonUnitTangentError if some |T0| deviates from 1 by more than 1e-8.
CurvatureTorsion curvature_torsion(const VectorField3& t0);

enum class PhaseMode { kClosed, kGeneral };

// Frenet construction rotated by theta (kGeneral: by the same reduced phase
// as initial_nls_data, so the frame stays periodic). Throws
// VanishingCurvatureError.
Frame initial_frame_frenet(const VectorField3& t0, PhaseMode mode = PhaseMode::kClosed);
// e2 = b, e1 = b x T0. Throws NotFlatError if some |<T0, b>| > 1e-10.
Frame initial_frame_flat(const VectorField3& t0, const Eigen::Vector3d& b);

// kClosed: kappa exp(i theta). kGeneral: the phase is reduced by
// x/(2 pi) times the part of the total torsion not in 2 pi Z, which keeps u0
// periodic when the torsion holonomy is not trivial.
SpectralField initial_nls_data(const CurvatureTorsion& ct, PhaseMode mode);

// u = <T_x, e1> + i <T_x, e2> for the first row of the frame.
SpectralField nls_data_from_frame(const Frame& frame);

// Unit normal of the plane containing every T0(x), if there is one.
std::optional<Eigen::Vector3d> flat_normal(const VectorField3& t0, double tol = 1e-10);

struct InitialState {
  Frame frame;
  SpectralField u0;
  std::string route;          // "frenet" or "flat"
  bool gauge_corrected = false;  // general phase mode was needed
};

// Flat route when a plane normal is given or detected, otherwise the Frenet
// route. Throws VanishingCurvatureError for non-planar curves whose curvature
// drops to kKappaMin.
InitialState prepare_initial_state(const VectorField3& t0,
                                   std::optional<Eigen::Vector3d> normal = std::nullopt);

}  // namespace smap
