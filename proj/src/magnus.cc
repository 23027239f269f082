#include "smap/magnus.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace smap {

SkewMatrixField::SkewMatrixField(const SkewFieldCoeffs& coeffs)
    : grid(coeffs.grid), a(coeffs.grid.size()), b(coeffs.grid.size()), c(coeffs.beta) {
  for (std::size_t n = 0; n < a.size(); ++n) {
    a[n] = coeffs.alpha[n].imag();
    b[n] = coeffs.alpha[n].real();
  }
}

Eigen::Matrix3d SkewMatrixField::matrix(std::size_t n) const {
  Eigen::Matrix3d m;
  m << 0.0, -a[n], b[n], a[n], 0.0, -c[n], -b[n], c[n], 0.0;
  return m;
}

SkewMatrixField operator+(const SkewMatrixField& x, const SkewMatrixField& y) {
  SkewMatrixField out(x.grid);
  for (std::size_t n = 0; n < x.size(); ++n) {
    out.a[n] = x.a[n] + y.a[n];
    out.b[n] = x.b[n] + y.b[n];
    out.c[n] = x.c[n] + y.c[n];
  }
  return out;
}

SkewMatrixField operator*(double s, const SkewMatrixField& x) {
  SkewMatrixField out(x.grid);
  for (std::size_t n = 0; n < x.size(); ++n) {
    out.a[n] = s * x.a[n];
    out.b[n] = s * x.b[n];
    out.c[n] = s * x.c[n];
  }
  return out;
}

SkewMatrixField commutator(const SkewMatrixField& x, const SkewMatrixField& y) {
  SkewMatrixField out(x.grid);
  for (std::size_t n = 0; n < x.size(); ++n) out.set_axis(n, x.axis(n).cross(y.axis(n)));
  return out;
}

SkewFieldCoeffs assemble_A(const SpectralField& u) {
  SkewFieldCoeffs out{u.grid(), to_values(derivative(u)), RVector(u.size())};
  const CVector v = to_values(u);
  for (std::size_t n = 0; n < v.size(); ++n) out.beta[n] = 0.5 * std::norm(v[n]);
  return out;
}

RVector gauss_nodes(int L) {
  if (L == 1) return {0.5};
  if (L == 2) {
    const double d = std::sqrt(3.0) / 6.0;
    return {0.5 - d, 0.5 + d};
  }
  throw std::invalid_argument("gauss_nodes: only L = 1 or 2 is supported");
}

int magnus_node_count(int order) {
  if (order == 2) return 1;
  if (order == 4) return 2;
  throw std::invalid_argument("Magnus order must be 2 or 4");
}

SkewMatrixField magnus_omega(std::span<const SkewMatrixField> a_at_nodes, double h, int order) {
  const int expected = magnus_node_count(order);
  if (static_cast<int>(a_at_nodes.size()) != expected) {
    std::ostringstream msg;
    msg << "magnus_omega: order " << order << " needs " << expected << " node values, got "
        << a_at_nodes.size();
    throw std::invalid_argument(msg.str());
  }
  if (order == 2) return h * a_at_nodes[0];
  const SkewMatrixField& a1 = a_at_nodes[0];
  const SkewMatrixField& a2 = a_at_nodes[1];
  return (0.5 * h) * (a1 + a2) + (std::sqrt(3.0) * h * h / 12.0) * commutator(a2, a1);
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w) {
  const double phi2 = w.squaredNorm();
  const double phi = std::sqrt(phi2);
  double s, q;
  if (phi < 1e-4) {
    s = 1.0 - phi2 / 6.0 + phi2 * phi2 / 120.0;
    q = 0.5 - phi2 / 24.0 + phi2 * phi2 / 720.0;
  } else {
    s = std::sin(phi) / phi;
    const double half = std::sin(0.5 * phi) / phi;
    q = 2.0 * half * half;
  }
  Eigen::Matrix3d k;
  k << 0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0;
  return Eigen::Matrix3d::Identity() + s * k + q * (k * k);
}

RotationField exp_so3(const SkewMatrixField& field) {
  RotationField out(field.size());
  for (std::size_t n = 0; n < field.size(); ++n) out[n] = exp_so3(field.axis(n));
  return out;
}

Frame apply_rotation(const RotationField& r, const Frame& frame) {
  if (r.size() != frame.size()) throw std::invalid_argument("apply_rotation: size mismatch");
  Frame out = frame;
  for (std::size_t n = 0; n < out.size(); ++n) out.y[n] = r[n] * frame.y[n];
  return out;
}

Frame scheme_a_step(const Frame& frame, std::span<const SpectralField> u_at_nodes, double h,
                    int order) {
  std::vector<SkewMatrixField> a;
  a.reserve(u_at_nodes.size());
  for (const auto& u : u_at_nodes) a.emplace_back(assemble_A(u));
  return apply_rotation(exp_so3(magnus_omega(a, h, order)), frame);
}

std::size_t step_count(double h, double t_end) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  if (t_end < 0.0) throw std::invalid_argument("final time must be non-negative");
  return static_cast<std::size_t>(std::llround(t_end / h));
}

Trajectory scheme_a_run(const InitialState& init, double h, double t_end, int order,
                        const SplittingScheme& nls, const TrajectoryOptions& options) {
  const std::size_t steps = step_count(h, t_end);
  const RVector c = gauss_nodes(magnus_node_count(order));
  Trajectory traj;
  Frame frame = init.frame;
  SpectralField u = init.u0;
  double t_nls = 0.0;
  traj.times.push_back(0.0);
  traj.frames.push_back(frame);
  if (options.observer) options.observer(0, 0.0, frame, u);
  std::vector<SpectralField> nodes;
  for (std::size_t m = 0; m < steps; ++m) {
    nodes.clear();
    for (double cl : c) {
      const double t_node = (static_cast<double>(m) + cl) * h;
      u = splitting_advance(u, t_node - t_nls, nls, h);
      t_nls = t_node;
      nodes.push_back(u);
    }
    frame = scheme_a_step(frame, nodes, h, order);
    const double t = static_cast<double>(m + 1) * h;
    const bool last = m + 1 == steps;
    if (last || (options.stride > 0 && (m + 1) % options.stride == 0)) {
      traj.times.push_back(t);
      traj.frames.push_back(frame);
    }
    if (options.observer) options.observer(m + 1, t, frame, u);
  }
  return traj;
}

}  // namespace smap
