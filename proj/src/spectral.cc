#include "smap/spectral.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.h"

namespace smap {

TorusGrid::TorusGrid(std::size_t n_modes) : n_(n_modes) {
  if (n_modes < 2 || n_modes % 2 != 0) {
    throw std::invalid_argument("TorusGrid: N must be even and >= 2, got " +
                                std::to_string(n_modes));
  }
}

RVector TorusGrid::nodes() const {
  RVector x(n_);
  for (std::size_t n = 0; n < n_; ++n) x[n] = node(n);
  return x;
}

std::size_t TorusGrid::slot(int k) const {
  if (!contains(k)) {
    throw std::out_of_range("wavenumber " + std::to_string(k) +
                            " outside the grid window");
  }
  return k >= 0 ? static_cast<std::size_t>(k)
                : static_cast<std::size_t>(k + static_cast<int>(n_));
}

SpectralField::SpectralField(TorusGrid grid, CVector coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("SpectralField: coefficient count " +
                                std::to_string(coeffs_.size()) +
                                " does not match N = " +
                                std::to_string(grid_.size()));
  }
}

SpectralField SpectralField::zero(TorusGrid grid) {
  return SpectralField(grid, CVector(grid.size()));
}

SpectralField SpectralField::mode(TorusGrid grid, int k, cplx amplitude) {
  SpectralField f = zero(grid);
  f.coeff(k) = amplitude;
  return f;
}

namespace {

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

VectorField3::VectorField3(TorusGrid g, std::array<RVector, 3> c)
    : grid(g), comp(std::move(c)) {
  for (const auto& v : comp) {
    if (v.size() != g.size()) {
      throw std::invalid_argument("VectorField3: component length mismatch");
    }
  }
}

SpectralField to_coeffs(std::span<const cplx> values, const TorusGrid& grid) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("to_coeffs: expected " + std::to_string(grid.size()) +
                                " values, got " + std::to_string(values.size()));
  }
  CVector c(values.size());
  detail::fft_forward(values, c);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (auto& v : c) v *= inv;
  return SpectralField(grid, std::move(c));
}

SpectralField to_coeffs(std::span<const double> values, const TorusGrid& grid) {
  CVector c(values.begin(), values.end());
  return to_coeffs(std::span<const cplx>(c), grid);
}

CVector to_values(const SpectralField& field) {
  CVector v(field.size());
  detail::fft_backward(field.coeffs(), v);
  return v;
}

RVector to_real_values(const SpectralField& field) {
  const CVector v = to_values(field);
  RVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
  return r;
}

SpectralField derivative(const SpectralField& field) {
  SpectralField out = field;
  const TorusGrid& g = field.grid();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.coeffs()[i] *= cplx(0.0, g.wavenumber(i));
  }
  out.coeffs()[g.size() / 2] = 0.0;
  return out;
}

SpectralField free_propagator(const SpectralField& field, double t) {
  SpectralField out = field;
  const TorusGrid& g = field.grid();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = g.wavenumber(i);
    out.coeffs()[i] *= std::polar(1.0, -t * k * k);
  }
  return out;
}

cplx phi1(cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) return 1.0;
  if (r < 1e-12) return 1.0 + 0.5 * z;
  // exp(z) - 1 without cancellation for small |z|.
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const cplx em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return em1 / z;
}

SpectralField phi1_propagator(const SpectralField& field, double t, int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("phi1_propagator: sign must be +1 or -1");
  }
  SpectralField out = field;
  const TorusGrid& g = field.grid();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = g.wavenumber(i);
    out.coeffs()[i] *= phi1(cplx(0.0, -sign * t * k * k));
  }
  return out;
}

double sobolev_norm(const SpectralField& field, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  const TorusGrid& g = field.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const int k = g.wavenumber(i);
    const double weight = k == 0 ? 1.0 : 1.0 + std::pow(std::abs(k), 2.0 * s);
    acc += weight * std::norm(field.coeffs()[i]);
  }
  return std::sqrt(acc);
}

SpectralField conjugate(const SpectralField& field) {
  const std::size_t n = field.size();
  CVector c(n);
  // conj of the nodal values has coefficient conj(u_{-k}), taken mod N.
  for (std::size_t i = 0; i < n; ++i) c[i] = std::conj(field.coeffs()[(n - i) % n]);
  return SpectralField(field.grid(), std::move(c));
}

SpectralField antiderivative(const SpectralField& field) {
  SpectralField out = field;
  const TorusGrid& g = field.grid();
  out.coeffs()[0] = 0.0;
  out.coeffs()[g.size() / 2] = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (i == g.size() / 2) continue;
    out.coeffs()[i] /= cplx(0.0, g.wavenumber(i));
  }
  return out;
}

SpectralField resample(const SpectralField& field, const TorusGrid& target) {
  const TorusGrid& src = field.grid();
  SpectralField out = SpectralField::zero(target);
  if (target.size() >= src.size()) {
    for (int k = src.min_wavenumber(); k < src.max_wavenumber(); ++k) {
      out.coeff(k) = field.coeff(k);
    }
    const int ny = src.max_wavenumber();
    const cplx top = field.coeff(ny);
    if (target.size() == src.size()) {
      out.coeff(ny) = top;
    } else {
      // Split the source Nyquist mode as a cosine so nodal values are kept.
      out.coeff(ny) = 0.5 * top;
      out.coeff(-ny) = 0.5 * top;
    }
  } else {
    for (int k = target.min_wavenumber(); k < target.max_wavenumber(); ++k) {
      out.coeff(k) = field.coeff(k);
    }
    const int ny = target.max_wavenumber();
    // Both +-ny alias onto the target Nyquist slot.
    out.coeff(ny) = field.coeff(ny) + field.coeff(-ny);
  }
  return out;
}

RVector spectral_derivative(std::span<const double> values, const TorusGrid& grid) {
  return to_real_values(derivative(to_coeffs(values, grid)));
}

VectorField3 spectral_derivative(const VectorField3& field) {
  VectorField3 out(field.grid);
  for (int c = 0; c < 3; ++c) out.comp[c] = spectral_derivative(field.comp[c], field.grid);
  return out;
}

double torus_integral(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v;
  return kTwoPi * acc / static_cast<double>(values.size());
}

}  // namespace smap
