// Named initial tangent fields.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

#include "smap/frame.h"
#include "smap/spectral.h"

namespace smap {

// (cos 2x sin x, sin 2x sin x, cos x).
VectorField3 preset_smooth(const TorusGrid& grid);
// Two straight sections joined by half circles in the xy-plane, sampled half a
// cell off the nodes so no node sits on a kink. Requires N divisible by 4.
VectorField3 preset_rough(const TorusGrid& grid);
// Great circle (cos x, sin x, 0).
VectorField3 preset_circle(const TorusGrid& grid);

// smooth | rough | circle. Throws std::invalid_argument otherwise.
VectorField3 preset_by_name(std::string_view name, const TorusGrid& grid);
// Distance from node x_n to the point where sample n is taken.
double preset_sample_offset(std::string_view name, const TorusGrid& grid);
// Plane normal to use with the flat construction, if the preset prescribes one.
std::optional<Eigen::Vector3d> preset_plane_normal(std::string_view name);

// Reads N rows of "T1,T2,T3" (an optional non-numeric header line is skipped).
VectorField3 load_tangent_file(const std::string& path);

}  // namespace smap
