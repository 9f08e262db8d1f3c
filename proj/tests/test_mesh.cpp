#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>

#include "doctest.h"
#include "mhdfv/mesh.hpp"
#include "mhdfv/meshgen.hpp"

using namespace mhdfv;

namespace {

MeshInput two_tri_square() {
  MeshInput in;
  in.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  in.elements = {{0, 1, 2}, {0, 2, 3}};
  return in;
}

MeshInput unit_quad() {
  MeshInput in;
  in.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  in.elements = {{0, 1, 2, 3}};
  return in;
}

void check_invariants(const PrimalMesh& m) {
  for (const Element& el : m.elem) {
    CHECK(el.area > 0);
    Vec2 s{};
    double per = 0;
    for (const FaceUse& fu : el.faces) {
      const Face& f = m.face[fu.f];
      CHECK(f.len > 0);
      s += fu.sigma * f.len * f.n;
      per += f.len;
    }
    CHECK(norm(s) <= 1e-13 * per);
  }
  for (size_t i = 0; i < m.elem.size(); ++i)
    for (const FaceUse& fu : m.elem[i].faces) {
      const Face& f = m.face[fu.f];
      if (fu.sigma > 0)
        CHECK(f.left == int(i));
      else
        CHECK(f.right == int(i));
    }
}

}  // namespace

TEST_CASE("two-triangle unit square geometry") {
  PrimalMesh m = build_primal(two_tri_square());
  CHECK(m.elem.size() == 2);
  CHECK(m.elem[0].area == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.elem[1].area == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.face.size() == 5);
  int interior = 0;
  for (const Face& f : m.face)
    if (!f.boundary()) ++interior;
  CHECK(interior == 1);
  check_invariants(m);
}

TEST_CASE("reference mixed mesh counts via file round trip") {
  MeshInput gen = generate_mesh(MeshKind::mixed, 20, 20, {0, 0}, {2 * M_PI, 2 * M_PI});
  write_mesh_input("m20.msh", gen);
  MeshInput back = read_mesh_input("m20.msh");
  PrimalMesh m = build_primal(back);
  CHECK(m.elem.size() == 666);
  CHECK(m.node.size() == 524);
  int ntri = 0, nquad = 0;
  for (const Element& el : m.elem) (el.nv == 3 ? ntri : nquad)++;
  CHECK(ntri == 366);
  CHECK(nquad == 300);
  check_invariants(m);
}

TEST_CASE("clockwise element rejected") {
  MeshInput in;
  in.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  in.elements = {{0, 3, 2, 1}};
  CHECK_THROWS(build_primal(in));
}

TEST_CASE("invalid node reference and non-conforming mesh rejected") {
  MeshInput in = two_tri_square();
  in.elements[1][2] = 7;
  CHECK_THROWS(build_primal(in));
  MeshInput in2 = two_tri_square();
  in2.elements.push_back({0, 1, 2});  // third user of face (0,1) etc.
  CHECK_THROWS(build_primal(in2));
}

TEST_CASE("dual mesh of the two-triangle square") {
  PrimalMesh m = build_primal(two_tri_square());
  DualMesh d = build_dual(m);
  CHECK(d.total == doctest::Approx(1.0).epsilon(1e-14));
  for (size_t f = 0; f < m.face.size(); ++f) {
    CHECK(d.subL[f] > 0);
    if (!m.face[f].boundary())
      CHECK(d.vol[f] == doctest::Approx(d.subL[f] + d.subR[f]));
  }
  // subelement partition of each primal element
  for (size_t i = 0; i < m.elem.size(); ++i) {
    double s = 0;
    for (const FaceUse& fu : m.elem[i].faces) s += d.sub(m, int(i), fu);
    CHECK(s == doctest::Approx(m.elem[i].area).epsilon(1e-12));
  }
}

TEST_CASE("dual mesh of a single unit quad") {
  PrimalMesh m = build_primal(unit_quad());
  DualMesh d = build_dual(m);
  CHECK(m.face.size() == 4);
  for (size_t f = 0; f < 4; ++f) {
    CHECK(d.subL[f] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.vol[f] == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("dual volume partition on the M_40 mesh") {
  PrimalMesh m = build_primal(generate_mesh(MeshKind::mixed, 40, 40, {0, 0}, {2 * M_PI, 2 * M_PI}));
  DualMesh d = build_dual(m);
  double area = 4 * M_PI * M_PI;
  CHECK(d.total == doctest::Approx(area).epsilon(1e-12));
  CHECK(m.total_area == doctest::Approx(area).epsilon(1e-12));
  check_invariants(m);
}

TEST_CASE("vertex duals on a uniform quad grid") {
  PrimalMesh m = build_primal(generate_mesh(MeshKind::cartesian, 4, 4, {0, 0}, {1, 1}));
  VertexDualSet vds = build_vertex_duals(m);
  int vid = m.vrep[2 * 5 + 2];  // interior node (2,2)
  const VertexDual& vd = vds.vd[vid];
  CHECK(!vd.boundary);
  CHECK(vd.ring.size() == 4);
  Vec2 s{};
  for (const VDElem& ve : vd.ring) s += ve.elen * ve.tstar;
  CHECK(norm(s) <= 1e-13);
  CHECK(vd.area > 0);
}

TEST_CASE("vertex dual polygon area matches corner-triangle fan") {
  // regular 6-triangle fan around the origin
  MeshInput in;
  in.nodes.push_back({0, 0});
  for (int k = 0; k < 6; ++k)
    in.nodes.push_back({std::cos(k * M_PI / 3), std::sin(k * M_PI / 3)});
  for (int k = 0; k < 6; ++k) in.elements.push_back({0, 1 + k, 1 + (k + 1) % 6});
  PrimalMesh m = build_primal(in);
  VertexDualSet vds = build_vertex_duals(m);
  const VertexDual& vd = vds.vd[m.vrep[0]];
  CHECK(!vd.boundary);
  CHECK(vd.ring.size() == 6);
  double fan = 0;
  for (const VDElem& ve : vd.ring)
    for (const VDSegment& sg : {ve.seg[0], ve.seg[1]}) {
      Vec2 a = sg.mid - sg.dvec * 0.5, b = sg.mid + sg.dvec * 0.5;
      fan += tri_area(vd.pos, a, b);
    }
  CHECK(vd.area == doctest::Approx(fan).epsilon(1e-13));
  Vec2 s{};
  for (const VDElem& ve : vd.ring) s += ve.elen * ve.tstar;
  CHECK(norm(s) <= 1e-13);
}

TEST_CASE("boundary vertex dual has a closed positive region") {
  PrimalMesh m = build_primal(generate_mesh(MeshKind::cartesian, 3, 3, {0, 0}, {1, 1}));
  VertexDualSet vds = build_vertex_duals(m);
  for (int v = 0; v < m.n_vert; ++v) {
    CHECK(vds.vd[v].area > 0);
    if (vds.vd[v].boundary) {
      int nextra = 0;
      for (const VDElem& ve : vds.vd[v].ring) nextra += ve.n_extra;
      CHECK(nextra == 2);
    }
  }
  // corner vertex: single-element fan
  const VertexDual& c = vds.vd[m.vrep[0]];
  CHECK(c.boundary);
  CHECK(c.ring.size() == 1);
  CHECK(c.area == doctest::Approx(1.0 / 36.0).epsilon(1e-12));  // quarter of a cell
}

TEST_CASE("fully periodic mesh has no boundary and merged vertices") {
  PrimalMesh m = build_primal(generate_mesh(MeshKind::cartesian, 4, 4, {0, 0}, {1, 1}, true, true));
  for (const Face& f : m.face) CHECK(!f.boundary());
  CHECK(m.face.size() == 32);
  CHECK(m.n_vert == 16);
  DualMesh d = build_dual(m);
  CHECK(d.total == doctest::Approx(1.0).epsilon(1e-13));
  VertexDualSet vds = build_vertex_duals(m);
  for (int v = 0; v < m.n_vert; ++v) {
    CHECK(!vds.vd[v].boundary);
    CHECK(vds.vd[v].ring.size() == 4);
    Vec2 s{};
    for (const VDElem& ve : vds.vd[v].ring) s += ve.elen * ve.tstar;
    CHECK(norm(s) <= 1e-13);
  }
  check_invariants(m);
}

TEST_CASE("periodic mixed and triangular meshes close up") {
  for (MeshKind k : {MeshKind::mixed, MeshKind::triangular, MeshKind::skewed}) {
    PrimalMesh m =
        build_primal(generate_mesh(k, 8, 8, {0, 0}, {2 * M_PI, 2 * M_PI}, true, true));
    for (const Face& f : m.face) CHECK(!f.boundary());
    check_invariants(m);
    VertexDualSet vds = build_vertex_duals(m);
    for (int v = 0; v < m.n_vert; ++v) {
      Vec2 s{};
      for (const VDElem& ve : vds.vd[v].ring) s += ve.elen * ve.tstar;
      CHECK(norm(s) <= 1e-12);
    }
    DualMesh d = build_dual(m);
    CHECK(d.total == doctest::Approx(m.total_area).epsilon(1e-12));
  }
}

TEST_CASE("mesh file parser accepts comments and rejects garbage") {
  {
    std::ofstream f("tiny.msh");
    f << "# simple two-triangle mesh\nNODES 4\n0 0 0\n1 1 0\n2 1 1\n3 0 1 # last node\n"
      << "ELEMENTS 2\n0 3 0 1 2\n1 3 0 2 3\n";
  }
  PrimalMesh m = build_primal(read_mesh_input("tiny.msh"));
  CHECK(m.elem.size() == 2);
  {
    std::ofstream f("bad.msh");
    f << "NODES 1\n0 0 0\nELEMENTS 1\n0 5 0 0 0 0 0\n";
  }
  CHECK_THROWS(read_mesh_input("bad.msh"));
  CHECK_THROWS(read_mesh_input("no_such_file.msh"));
}

TEST_CASE("triangular generator element count scale") {
  MeshInput in = generate_mesh(MeshKind::triangular, 100, 100, {-1, -1}, {1, 1});
  double n = double(in.elements.size());
  CHECK(n >= 23056 * 0.85);
  CHECK(n <= 23056 * 1.15);
}
