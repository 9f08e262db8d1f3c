#pragma once
#include <string>

#include "mhdfv/mesh.hpp"

namespace mhdfv {

enum class MeshKind { cartesian, skewed, mixed, triangular };

MeshKind mesh_kind_from_string(const std::string& s);

// Structured-boundary generators on the box [lo, hi]. All kinds keep the
// boundary nodes on the uniform grid so periodic pairings stay conforming.
MeshInput generate_mesh(MeshKind kind, int nx, int ny, Vec2 lo, Vec2 hi,
                        bool periodic_x = false, bool periodic_y = false);

}  // namespace mhdfv
