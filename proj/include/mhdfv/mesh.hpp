#pragma once
#include <string>
#include <vector>

#include "mhdfv/geometry.hpp"

namespace mhdfv {

// Raw mesh description, as stored in the plain-text mesh files.
// A periodic pairing identifies the boundary face (a1,a2) with (b1,b2),
// node a1 with b1 and a2 with b2; t translates side-a coordinates to side-b.
struct PeriodicPair {
  int a1, a2, b1, b2;
  Vec2 t;
};

struct MeshInput {
  std::vector<Vec2> nodes;
  std::vector<std::vector<int>> elements;
  std::vector<PeriodicPair> periodic;
};

struct Face {
  int a = -1, b = -1;    // node ids; tangent a->b, n = tangent rotated -90deg
  int left = -1;         // element for which (a,b) is counterclockwise
  int right = -1;        // neighbour element, or -1 on the boundary
  Vec2 n;                // unit, points left -> right (outward on the boundary)
  double len = 0;
  Vec2 bary;
  Vec2 shift_right;      // right-element native coords + shift_right = face frame
  bool periodic = false;
  bool boundary() const { return right < 0; }
};

// Per-element face reference. off maps face-frame coordinates into the
// element's native frame (nonzero only across periodic pairings).
struct FaceUse {
  int f = -1;
  double sigma = 1.0;
  Vec2 off;
};

struct Element {
  int v[4] = {-1, -1, -1, -1};
  int nv = 0;
  double area = 0;
  Vec2 bary;
  double h = 0;                // incircle diameter proxy 4|T|/P
  std::vector<FaceUse> faces;  // in local counterclockwise edge order
};

// Incidence of a (merged) vertex on an element corner. shift maps the
// element's native coordinates into the canonical vertex frame.
struct VertexUse {
  int elem = -1;
  int corner = -1;
  Vec2 shift;
};

struct PrimalMesh {
  std::vector<Vec2> node;
  std::vector<Element> elem;
  std::vector<Face> face;

  // periodic-quotient vertices (pressure unknowns, electric-field sites)
  std::vector<int> vrep;  // node id -> merged vertex id
  int n_vert = 0;
  std::vector<Vec2> vert_pos;
  std::vector<std::vector<VertexUse>> vert_use;
  std::vector<char> vert_boundary;

  double total_area = 0;

  // face barycenter seen from element side of FaceUse
  Vec2 face_point(const FaceUse& fu) const { return face[fu.f].bary + fu.off; }
  // neighbour element across fu as seen from element i, with the barycenter
  // offset expressed in i's native frame; returns -1 for boundary faces
  int neighbour(int i, const FaceUse& fu, Vec2& dx) const;
};

PrimalMesh build_primal(const MeshInput& in);

struct DualMesh {
  // one dual cell per face: left/right subelement volumes and total
  std::vector<double> subL, subR;
  std::vector<double> vol;
  double total = 0;
  // subelement volume of face-use fu inside element i
  double sub(const PrimalMesh& m, int i, const FaceUse& fu) const {
    return (m.face[fu.f].left == i) ? subL[fu.f] : subR[fu.f];
  }
};

DualMesh build_dual(const PrimalMesh& m);

// One linear piece of a vertex-dual boundary: midpoint and oriented vector,
// both in the canonical vertex frame.
struct VDSegment {
  Vec2 mid;
  Vec2 dvec;
};

struct VDElem {
  int elem = -1;
  Vec2 shift;            // element native + shift = canonical frame
  Vec2 tstar;            // unit corner tangent
  double elen = 0;       // |e*_ei|
  VDSegment seg[2];      // the two pieces inside the element, CCW
  int n_extra = 0;       // boundary closure pieces through the vertex, if any
  VDSegment extra[2];
};

struct VertexDual {
  Vec2 pos;
  bool boundary = false;
  double area = 0;   // |G*_e|
  double perim = 0;  // |dG*_e|
  std::vector<VDElem> ring;  // counterclockwise
};

struct VertexDualSet {
  std::vector<VertexDual> vd;
};

VertexDualSet build_vertex_duals(const PrimalMesh& m);

MeshInput read_mesh_input(const std::string& path);
void write_mesh_input(const std::string& path, const MeshInput& in);

}  // namespace mhdfv
