#include "smap/splitting.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace smap {
namespace {

enum class Flow { kDispersive, kNonlinear };

// Flows in application order with zero fractions removed and neighbours of
// the same kind merged.
std::vector<std::pair<Flow, double>> applied_sequence(const SplittingScheme& s) {
  std::vector<std::pair<Flow, double>> seq;
  auto push = [&seq](Flow f, double c) {
    if (c == 0.0) return;
    if (!seq.empty() && seq.back().first == f) {
      seq.back().second += c;
      if (seq.back().second == 0.0) seq.pop_back();
    } else {
      seq.emplace_back(f, c);
    }
  };
  for (std::size_t i = s.a.size(); i-- > 0;) {
    push(Flow::kNonlinear, s.b[i]);
    push(Flow::kDispersive, s.a[i]);
  }
  return seq;
}

}  // namespace

void SplittingScheme::validate() const {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("splitting scheme '" + name +
                                "': coefficient lists must be non-empty and equal in length");
  }
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(sa - 1.0) > 1e-12 || std::abs(sb - 1.0) > 1e-12) {
    throw std::invalid_argument("splitting scheme '" + name +
                                "': coefficients must sum to 1");
  }
}

bool SplittingScheme::is_symmetric() const {
  const auto seq = applied_sequence(*this);
  for (std::size_t i = 0, j = seq.size(); i < j--; ++i) {
    if (seq[i].first != seq[j].first) return false;
    if (std::abs(seq[i].second - seq[j].second) > 1e-14) return false;
  }
  return true;
}

SplittingScheme splitting_preset(std::string_view name) {
  if (name == "lie") return {"lie", {1.0}, {1.0}, 1};
  if (name == "strang") return {"strang", {0.5, 0.5}, {1.0, 0.0}, 2};
  if (name == "yoshida4") {
    // Triple jump of Strang steps with fractions g1, g2, g3 = g1.
    const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double g2 = 1.0 - 2.0 * g1;
    return {"yoshida4",
            {0.5 * g1, 0.5 * (g1 + g2), 0.5 * (g2 + g1), 0.5 * g1},
            {g1, g2, g1, 0.0},
            4};
  }
  throw std::invalid_argument("unknown splitting preset '" + std::string(name) + "'");
}

SpectralField flow_p1(const SpectralField& u, double t) { return free_propagator(u, t); }

SpectralField flow_p2(const SpectralField& u, double t) {
  CVector v = to_values(u);
  for (auto& z : v) z *= std::polar(1.0, 0.5 * t * std::norm(z));
  return to_coeffs(std::span<const cplx>(v), u.grid());
}

SpectralField splitting_step(const SpectralField& u, double h,
                             const SplittingScheme& scheme) {
  scheme.validate();
  SpectralField out = u;
  for (std::size_t i = scheme.a.size(); i-- > 0;) {
    if (scheme.b[i] != 0.0) out = flow_p2(out, scheme.b[i] * h);
    if (scheme.a[i] != 0.0) out = flow_p1(out, scheme.a[i] * h);
  }
  return out;
}

SpectralField splitting_advance(const SpectralField& u, double dt,
                                const SplittingScheme& scheme, double max_substep) {
  if (dt == 0.0) return u;
  if (!(max_substep > 0.0)) {
    throw std::invalid_argument("splitting_advance: max_substep must be positive");
  }
  const double count = std::ceil(std::abs(dt) / max_substep - 1e-12);
  const long steps = std::max(1L, static_cast<long>(count));
  const double h = dt / static_cast<double>(steps);
  SpectralField out = u;
  for (long s = 0; s < steps; ++s) out = splitting_step(out, h, scheme);
  return out;
}

std::vector<SpectralField> run_splitting(const SpectralField& u0,
                                         std::span<const double> times,
                                         const SplittingScheme& scheme,
                                         double max_substep) {
  scheme.validate();
  if (times.empty() || times[0] != 0.0) {
    throw std::invalid_argument("run_splitting: times must start at 0");
  }
  std::vector<SpectralField> out;
  out.reserve(times.size());
  out.push_back(u0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("run_splitting: times must be strictly increasing");
    }
    out.push_back(splitting_advance(out.back(), times[i] - times[i - 1], scheme, max_substep));
  }
  return out;
}

}  // namespace smap
