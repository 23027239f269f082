#include "smap/presets.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smap {

VectorField3 preset_smooth(const TorusGrid& grid) {
  VectorField3 t(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double x = grid.node(n);
    t.set(n, {std::cos(2 * x) * std::sin(x), std::sin(2 * x) * std::sin(x), std::cos(x)});
  }
  return t;
}

VectorField3 preset_rough(const TorusGrid& grid) {
  if (grid.size() % 4 != 0) {
    throw std::invalid_argument("rough preset needs N divisible by 4");
  }
  VectorField3 t(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    // Shift into [-pi, pi) where the pieces are defined.
    double x = grid.node(n) + 0.5 * grid.spacing();
    if (x >= kPi) x -= kTwoPi;
    std::array<double, 3> v{};
    if (x < -0.5 * kPi) {
      v = {std::cos(2 * x + kPi), std::sin(2 * x + kPi), 0.0};
    } else if (x < 0.0) {
      v = {1.0, 0.0, 0.0};
    } else if (x < 0.5 * kPi) {
      v = {std::cos(2 * x), std::sin(2 * x), 0.0};
    } else {
      v = {-1.0, 0.0, 0.0};
    }
    t.set(n, v);
  }
  return t;
}

VectorField3 preset_circle(const TorusGrid& grid) {
  VectorField3 t(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double x = grid.node(n);
    t.set(n, {std::cos(x), std::sin(x), 0.0});
  }
  return t;
}

VectorField3 preset_by_name(std::string_view name, const TorusGrid& grid) {
  if (name == "smooth") return preset_smooth(grid);
  if (name == "rough") return preset_rough(grid);
  if (name == "circle") return preset_circle(grid);
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (expected smooth, rough or circle)");
}

double preset_sample_offset(std::string_view name, const TorusGrid& grid) {
  return name == "rough" ? 0.5 * grid.spacing() : 0.0;
}

std::optional<Eigen::Vector3d> preset_plane_normal(std::string_view name) {
  if (name == "rough") return Eigen::Vector3d(0.0, 0.0, 1.0);
  return std::nullopt;
}

VectorField3 load_tangent_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tangent file '" + path + "'");
  std::array<RVector, 3> comp;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream fields(line);
    double a, b, c;
    if (!(fields >> a >> b >> c)) {
      if (comp[0].empty()) continue;  // header
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected three numbers");
    }
    comp[0].push_back(a);
    comp[1].push_back(b);
    comp[2].push_back(c);
  }
  if (comp[0].empty()) throw std::runtime_error("tangent file '" + path + "' has no samples");
  const TorusGrid g(comp[0].size());
  return VectorField3(g, std::move(comp));
}

}  // namespace smap
