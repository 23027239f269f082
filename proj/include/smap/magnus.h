// Interpolatory Magnus steps for the frame ODE y_t = A(t, x) y and the
// explicit driver that pairs them with splitting NLS solutions.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "smap/frame.h"
#include "smap/spectral.h"
#include "smap/splitting.h"

namespace smap {

// A = [[0, -Im alpha, Re alpha], [Im alpha, 0, -beta], [-Re alpha, beta, 0]].
struct SkewFieldCoeffs {
  TorusGrid grid;
  CVector alpha;  // u_x at the nodes
  RVector beta;   // |u|^2 / 2 at the nodes
};

// Per node [[0, -a, b], [a, 0, -c], [-b, c, 0]], i.e. hat(w) with w = (c, b, a).
struct SkewMatrixField {
  explicit SkewMatrixField(TorusGrid g) : grid(g), a(g.size()), b(g.size()), c(g.size()) {}
  explicit SkewMatrixField(const SkewFieldCoeffs& coeffs);

  std::size_t size() const { return a.size(); }
  Eigen::Vector3d axis(std::size_t n) const { return {c[n], b[n], a[n]}; }
  void set_axis(std::size_t n, const Eigen::Vector3d& w) {
    c[n] = w[0];
    b[n] = w[1];
    a[n] = w[2];
  }
  Eigen::Matrix3d matrix(std::size_t n) const;

  TorusGrid grid;
  RVector a, b, c;
};

SkewMatrixField operator+(const SkewMatrixField& x, const SkewMatrixField& y);
SkewMatrixField operator*(double s, const SkewMatrixField& x);
SkewMatrixField commutator(const SkewMatrixField& x, const SkewMatrixField& y);

SkewFieldCoeffs assemble_A(const SpectralField& u);

// Gauss-Legendre nodes on (0, 1) for L in {1, 2}.
RVector gauss_nodes(int L);
int magnus_node_count(int order);

// order 2: h A_1. order 4: (h/2)(A_1 + A_2) + (sqrt(3) h^2 / 12) [A_2, A_1].
SkewMatrixField magnus_omega(std::span<const SkewMatrixField> a_at_nodes, double h, int order);

using RotationField = std::vector<Eigen::Matrix3d>;

// Rodrigues formula; 4th order Taylor weights below an angle of 1e-4.
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w);
RotationField exp_so3(const SkewMatrixField& field);

// y <- R y at each node.
Frame apply_rotation(const RotationField& r, const Frame& frame);

Frame scheme_a_step(const Frame& frame, std::span<const SpectralField> u_at_nodes, double h,
                    int order);

// Observer called at t = 0 and after every step with the current frame and
// the most recent NLS state.
using StepObserver =
    std::function<void(std::size_t step, double t, const Frame& frame, const SpectralField& u)>;

struct TrajectoryOptions {
  // Store every stride-th frame (0: store only the initial and final frame).
  std::size_t stride = 1;
  StepObserver observer;
};

struct Trajectory {
  RVector times;
  std::vector<Frame> frames;
};

std::size_t step_count(double h, double t_end);

Trajectory scheme_a_run(const InitialState& init, double h, double t_end, int order,
                        const SplittingScheme& nls, const TrajectoryOptions& options = {});

}  // namespace smap
