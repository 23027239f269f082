// Periodic pseudo-spectral primitives on the torus [0, 2pi).
//
// Coefficients are stored in FFT order: slot i holds wavenumber i for
// i <= N/2 and i - N otherwise, so the window is {-N/2+1, ..., N/2}.
// A field u has values u(x_n) = sum_k u_k exp(i k x_n); integrals over the
// torus are 2 pi times the mean of the nodal values.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace smap {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using RVector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class TorusGrid {
 public:
  // Throws std::invalid_argument unless n_modes is even and >= 2.
  explicit TorusGrid(std::size_t n_modes);

  std::size_t size() const { return n_; }
  double spacing() const { return kTwoPi / static_cast<double>(n_); }
  double node(std::size_t n) const { return spacing() * static_cast<double>(n); }
  RVector nodes() const;

  int wavenumber(std::size_t slot) const {
    return slot <= n_ / 2 ? static_cast<int>(slot)
                          : static_cast<int>(slot) - static_cast<int>(n_);
  }
  // Throws std::out_of_range for k outside the window.
  std::size_t slot(int k) const;
  bool contains(int k) const {
    return k > -static_cast<int>(n_ / 2) && k <= static_cast<int>(n_ / 2);
  }
  int min_wavenumber() const { return -static_cast<int>(n_ / 2) + 1; }
  int max_wavenumber() const { return static_cast<int>(n_ / 2); }

  bool operator==(const TorusGrid&) const = default;

 private:
  std::size_t n_;
};

class SpectralField {
 public:
  SpectralField(TorusGrid grid, CVector coeffs);
  static SpectralField zero(TorusGrid grid);
  // Single Fourier mode amplitude * exp(i k x).
  static SpectralField mode(TorusGrid grid, int k, cplx amplitude);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  const CVector& coeffs() const { return coeffs_; }
  CVector& coeffs() { return coeffs_; }
  cplx coeff(int k) const { return coeffs_[grid_.slot(k)]; }
  cplx& coeff(int k) { return coeffs_[grid_.slot(k)]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx scale);

 private:
  TorusGrid grid_;
  CVector coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);

// Real vector field T: torus -> R^3 sampled at the nodes.
struct VectorField3 {
  explicit VectorField3(TorusGrid g)
      : grid(g), comp{RVector(g.size()), RVector(g.size()), RVector(g.size())} {}
  VectorField3(TorusGrid g, std::array<RVector, 3> c);

  std::size_t size() const { return grid.size(); }
  std::array<double, 3> at(std::size_t n) const {
    return {comp[0][n], comp[1][n], comp[2][n]};
  }
  void set(std::size_t n, const std::array<double, 3>& v) {
    comp[0][n] = v[0];
    comp[1][n] = v[1];
    comp[2][n] = v[2];
  }

  TorusGrid grid;
  std::array<RVector, 3> comp;
};

// Throws std::invalid_argument on length mismatch.
SpectralField to_coeffs(std::span<const cplx> values, const TorusGrid& grid);
SpectralField to_coeffs(std::span<const double> values, const TorusGrid& grid);
CVector to_values(const SpectralField& field);
RVector to_real_values(const SpectralField& field);

// i k u_k with the N/2 mode zeroed.
SpectralField derivative(const SpectralField& field);
// exp(i t d_xx): mode k times exp(-i t k^2).
SpectralField free_propagator(const SpectralField& field, double t);
// (e^z - 1)/z with the removable singularity filled.
cplx phi1(cplx z);
// phi1(sign * i t d_xx): mode k times phi1(-sign * i t k^2).
SpectralField phi1_propagator(const SpectralField& field, double t, int sign);
// (sum_k (1 + |k|^{2s}) |u_k|^2)^{1/2}; the k = 0 weight is 1 for every s.
double sobolev_norm(const SpectralField& field, double s);
// Complex-conjugate field: coefficient k becomes conj(u_{-k}).
SpectralField conjugate(const SpectralField& field);
// Zero-mean antiderivative (mean mode dropped, N/2 mode dropped).
SpectralField antiderivative(const SpectralField& field);
// Fourier truncation or zero padding onto another grid.
SpectralField resample(const SpectralField& field, const TorusGrid& target);

// Real-valued helpers on nodal data.
RVector spectral_derivative(std::span<const double> values, const TorusGrid& grid);
VectorField3 spectral_derivative(const VectorField3& field);
double torus_integral(std::span<const double> values);

}  // namespace smap
