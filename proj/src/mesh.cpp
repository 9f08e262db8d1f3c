#include "mhdfv/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mhdfv {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) { parent[a] = parent[parent[a]]; a = parent[a]; }
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

uint64_t edge_key(int a, int b) {
  int lo = std::min(a, b), hi = std::max(a, b);
  return (uint64_t(uint32_t(lo)) << 32) | uint32_t(hi);
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("mesh: " + msg); }

}  // namespace

int PrimalMesh::neighbour(int i, const FaceUse& fu, Vec2& dx) const {
  const Face& f = face[fu.f];
  int j = (f.left == i && fu.sigma > 0) ? f.right : f.left;
  if (j < 0) { dx = Vec2{}; return -1; }
  Vec2 xj_frame = elem[j].bary;
  if (j == f.right && fu.sigma > 0) xj_frame += f.shift_right;
  if (fu.sigma < 0) {
    // we are the right element; bring the left neighbour into our frame
    xj_frame = elem[j].bary - f.shift_right;
  }
  dx = xj_frame - elem[i].bary;
  return j;
}

PrimalMesh build_primal(const MeshInput& in) {
  PrimalMesh m;
  m.node = in.nodes;
  const int nn = int(m.node.size());

  m.elem.resize(in.elements.size());
  for (size_t i = 0; i < in.elements.size(); ++i) {
    const auto& ev = in.elements[i];
    Element& el = m.elem[i];
    el.nv = int(ev.size());
    if (el.nv != 3 && el.nv != 4) fail("element " + std::to_string(i) + " must have 3 or 4 nodes");
    for (int k = 0; k < el.nv; ++k) {
      if (ev[k] < 0 || ev[k] >= nn) fail("element " + std::to_string(i) + " references invalid node");
      for (int l = 0; l < k; ++l)
        if (ev[k] == ev[l]) fail("element " + std::to_string(i) + " has repeated nodes");
      el.v[k] = ev[k];
    }
    std::vector<Vec2> p(el.nv);
    for (int k = 0; k < el.nv; ++k) p[k] = m.node[el.v[k]];
    double a = polygon_area(p);
    if (a <= 0.0) fail("element " + std::to_string(i) + " is degenerate or clockwise");
    el.area = a;
    Vec2 c{};
    double per = 0;
    for (int k = 0; k < el.nv; ++k) {
      const Vec2& pa = p[k];
      const Vec2& pb = p[(k + 1) % el.nv];
      double cr = cross(pa, pb);
      c += (pa + pb) * cr;
      per += norm(pb - pa);
    }
    el.bary = c / (6.0 * a);
    el.h = 4.0 * a / per;
    m.total_area += a;
  }

  // face creation; the first element traversing an edge becomes its left side
  std::unordered_map<uint64_t, int> fmap;
  for (size_t i = 0; i < m.elem.size(); ++i) {
    Element& el = m.elem[i];
    for (int k = 0; k < el.nv; ++k) {
      int p = el.v[k], q = el.v[(k + 1) % el.nv];
      auto key = edge_key(p, q);
      auto it = fmap.find(key);
      if (it == fmap.end()) {
        Face f;
        f.a = p; f.b = q; f.left = int(i);
        fmap.emplace(key, int(m.face.size()));
        m.face.push_back(f);
      } else {
        Face& f = m.face[it->second];
        if (f.right != -1) fail("face used by more than two elements (non-conforming)");
        if (f.a == p && f.b == q) fail("two elements traverse a face in the same direction");
        f.right = int(i);
      }
    }
  }
  for (Face& f : m.face) {
    Vec2 t = m.node[f.b] - m.node[f.a];
    f.len = norm(t);
    if (f.len <= 0) fail("zero-length face");
    f.n = rot_minus90(t / f.len);
    f.bary = (m.node[f.a] + m.node[f.b]) * 0.5;
  }

  // periodic pairing: fuse each paired boundary face couple into one interior face
  UnionFind uf(nn);
  std::vector<int> remap(m.face.size());
  std::iota(remap.begin(), remap.end(), 0);
  for (const PeriodicPair& pp : in.periodic) {
    auto ia = fmap.find(edge_key(pp.a1, pp.a2));
    auto ib = fmap.find(edge_key(pp.b1, pp.b2));
    if (ia == fmap.end() || ib == fmap.end()) fail("periodic pairing references unknown face");
    int fa = ia->second, fb = ib->second;
    Face& A = m.face[fa];
    Face& B = m.face[fb];
    if (!A.boundary() || !B.boundary()) fail("periodic pairing of a non-boundary face");
    double scale = A.len;
    if (norm(m.node[pp.b1] - m.node[pp.a1] - pp.t) > 1e-9 * scale ||
        norm(m.node[pp.b2] - m.node[pp.a2] - pp.t) > 1e-9 * scale)
      fail("periodic translation does not map paired nodes onto each other");
    A.right = B.left;
    A.shift_right = -pp.t;
    A.periodic = true;
    remap[fb] = fa;
    uf.unite(pp.a1, pp.b1);
    uf.unite(pp.a2, pp.b2);
  }

  // compact faces, dropping the dead periodic partners
  std::vector<Face> packed;
  std::vector<int> newid(m.face.size(), -1);
  for (size_t f = 0; f < m.face.size(); ++f)
    if (remap[f] == int(f)) { newid[f] = int(packed.size()); packed.push_back(m.face[f]); }
  for (size_t f = 0; f < m.face.size(); ++f)
    if (remap[f] != int(f)) newid[f] = newid[remap[f]];
  m.face.swap(packed);

  // per-element face references with orientation and frame offsets
  for (size_t i = 0; i < m.elem.size(); ++i) {
    Element& el = m.elem[i];
    el.faces.resize(el.nv);
    for (int k = 0; k < el.nv; ++k) {
      int p = el.v[k], q = el.v[(k + 1) % el.nv];
      int f = newid[fmap.at(edge_key(p, q))];
      const Face& F = m.face[f];
      FaceUse fu;
      fu.f = f;
      if (F.a == p && F.b == q) {
        fu.sigma = 1.0;
        fu.off = Vec2{};
      } else {
        fu.sigma = -1.0;
        fu.off = -F.shift_right;
      }
      el.faces[k] = fu;
    }
  }

  // merged vertices
  m.vrep.assign(nn, -1);
  m.n_vert = 0;
  for (int v = 0; v < nn; ++v)
    if (uf.find(v) == v) {
      m.vrep[v] = m.n_vert++;
      m.vert_pos.push_back(m.node[v]);
    }
  for (int v = 0; v < nn; ++v) m.vrep[v] = m.vrep[uf.find(v)];

  m.vert_use.assign(m.n_vert, {});
  for (size_t i = 0; i < m.elem.size(); ++i) {
    const Element& el = m.elem[i];
    for (int c = 0; c < el.nv; ++c) {
      int vid = m.vrep[el.v[c]];
      VertexUse vu;
      vu.elem = int(i);
      vu.corner = c;
      vu.shift = m.vert_pos[vid] - m.node[el.v[c]];
      m.vert_use[vid].push_back(vu);
    }
  }
  m.vert_boundary.assign(m.n_vert, 0);
  for (const Face& f : m.face)
    if (f.boundary()) {
      m.vert_boundary[m.vrep[f.a]] = 1;
      m.vert_boundary[m.vrep[f.b]] = 1;
    }
  return m;
}

DualMesh build_dual(const PrimalMesh& m) {
  DualMesh d;
  const size_t nf = m.face.size();
  d.subL.assign(nf, 0.0);
  d.subR.assign(nf, 0.0);
  d.vol.assign(nf, 0.0);
  for (size_t f = 0; f < nf; ++f) {
    const Face& F = m.face[f];
    Vec2 a = m.node[F.a], b = m.node[F.b];
    double sl = tri_area(a, b, m.elem[F.left].bary);
    if (sl <= 0) fail("negative left subelement at face " + std::to_string(f));
    d.subL[f] = sl;
    if (!F.boundary()) {
      Vec2 br = m.elem[F.right].bary + F.shift_right;
      double sr = -tri_area(a, b, br);
      if (sr <= 0) fail("negative right subelement at face " + std::to_string(f));
      d.subR[f] = sr;
    }
    d.vol[f] = d.subL[f] + d.subR[f];
    d.total += d.vol[f];
  }
  return d;
}

VertexDualSet build_vertex_duals(const PrimalMesh& m) {
  VertexDualSet out;
  out.vd.resize(m.n_vert);

  for (int e = 0; e < m.n_vert; ++e) {
    const auto& uses = m.vert_use[e];
    if (uses.empty()) fail("vertex " + std::to_string(e) + " has no incident element");
    VertexDual& vd = out.vd[e];
    vd.pos = m.vert_pos[e];

    const int n = int(uses.size());
    // corner faces of each incidence, in local CCW order: prev then next
    std::vector<int> fprev(n), fnext(n);
    for (int k = 0; k < n; ++k) {
      const Element& el = m.elem[uses[k].elem];
      int c = uses[k].corner;
      fprev[k] = el.faces[(c - 1 + el.nv) % el.nv].f;
      fnext[k] = el.faces[c].f;
    }
    std::map<int, std::vector<int>> users;  // face -> incidences
    for (int k = 0; k < n; ++k) {
      users[fprev[k]].push_back(k);
      users[fnext[k]].push_back(k);
    }

    int start = 0, entry = fprev[0];
    bool boundary = false;
    for (auto& [f, us] : users)
      if (m.face[f].boundary()) {
        boundary = true;
        start = us[0];
        entry = f;
        break;
      }
    vd.boundary = boundary;

    std::vector<int> ring, faces;  // interior: faces[k] joins ring[k], ring[k+1]
    if (boundary) faces.push_back(entry);
    int cur = start, ein = entry;
    for (int guard = 0; guard <= n; ++guard) {
      ring.push_back(cur);
      int exit = (fprev[cur] == ein) ? fnext[cur] : fprev[cur];
      faces.push_back(exit);
      if (boundary && m.face[exit].boundary()) break;
      const auto& us = users.at(exit);
      int nxt = -1;
      for (int u : us)
        if (u != cur) nxt = u;
      if (nxt < 0) fail("broken element ring around vertex " + std::to_string(e));
      if (!boundary && nxt == start) break;
      cur = nxt;
      ein = exit;
      if (guard == n) fail("element ring around vertex " + std::to_string(e) + " does not close");
    }
    if (int(ring.size()) != n) fail("vertex " + std::to_string(e) + " has a disconnected element fan");
    const int mring = n;

    // face midpoint in canonical frame, computed through a ring element's frame
    auto midpoint = [&](int f, int k) {
      const Element& el = m.elem[uses[ring[k]].elem];
      for (const FaceUse& fu : el.faces)
        if (fu.f == f) return m.face[f].bary + fu.off + uses[ring[k]].shift;
      fail("face not adjacent to ring element at vertex " + std::to_string(e));
    };
    auto barycenter = [&](int k) {
      return m.elem[uses[ring[k]].elem].bary + uses[ring[k]].shift;
    };

    auto build_polygon = [&](const std::vector<int>& rg, const std::vector<int>& fs,
                             std::vector<Vec2>& poly) {
      poly.clear();
      if (boundary) {
        poly.push_back(vd.pos);
        for (int k = 0; k < mring; ++k) {
          // fs[k] precedes element k; compute through element k's frame
          const Element& el = m.elem[uses[rg[k]].elem];
          Vec2 mp{};
          bool found = false;
          for (const FaceUse& fu : el.faces)
            if (fu.f == fs[k]) { mp = m.face[fs[k]].bary + fu.off + uses[rg[k]].shift; found = true; }
          if (!found) fail("ring face not on its element at vertex " + std::to_string(e));
          poly.push_back(mp);
          poly.push_back(m.elem[uses[rg[k]].elem].bary + uses[rg[k]].shift);
        }
        {
          const Element& el = m.elem[uses[rg[mring - 1]].elem];
          for (const FaceUse& fu : el.faces)
            if (fu.f == fs[mring]) poly.push_back(m.face[fs[mring]].bary + fu.off + uses[rg[mring - 1]].shift);
        }
      } else {
        for (int k = 0; k < mring; ++k) {
          int fpre = fs[(k - 1 + mring) % mring];
          const Element& el = m.elem[uses[rg[k]].elem];
          for (const FaceUse& fu : el.faces)
            if (fu.f == fpre) poly.push_back(m.face[fpre].bary + fu.off + uses[rg[k]].shift);
          poly.push_back(m.elem[uses[rg[k]].elem].bary + uses[rg[k]].shift);
        }
      }
    };

    std::vector<Vec2> poly;
    build_polygon(ring, faces, poly);
    if (polygon_area(poly) < 0) {
      std::vector<int> rring(mring), rfaces(faces.size());
      if (boundary) {
        for (int k = 0; k < mring; ++k) rring[k] = ring[mring - 1 - k];
        for (size_t k = 0; k < faces.size(); ++k) rfaces[k] = faces[faces.size() - 1 - k];
      } else {
        for (int k = 0; k < mring; ++k) rring[k] = ring[(mring - k) % mring];
        for (int k = 0; k < mring; ++k) rfaces[k] = faces[mring - 1 - k];
      }
      ring.swap(rring);
      faces.swap(rfaces);
      build_polygon(ring, faces, poly);
    }
    vd.area = polygon_area(poly);
    if (vd.area <= 0) fail("non-positive dual area at vertex " + std::to_string(e));
    vd.perim = 0;
    for (size_t k = 0; k < poly.size(); ++k)
      vd.perim += norm(poly[(k + 1) % poly.size()] - poly[k]);

    vd.ring.resize(mring);
    for (int k = 0; k < mring; ++k) {
      VDElem& ve = vd.ring[k];
      ve.elem = uses[ring[k]].elem;
      ve.shift = uses[ring[k]].shift;
      int fpre = boundary ? faces[k] : faces[(k - 1 + mring) % mring];
      int fnxt = boundary ? faces[k + 1] : faces[k];
      Vec2 mp = midpoint(fpre, k);
      Vec2 mn = midpoint(fnxt, k);
      Vec2 bc = barycenter(k);
      ve.seg[0] = {(mp + bc) * 0.5, bc - mp};
      ve.seg[1] = {(bc + mn) * 0.5, mn - bc};
      Vec2 sum = mn - mp;
      ve.elen = norm(sum);
      ve.tstar = (ve.elen > 0) ? sum / ve.elen : Vec2{};
      if (boundary && k == 0)
        ve.extra[ve.n_extra++] = {(vd.pos + mp) * 0.5, mp - vd.pos};
      if (boundary && k == mring - 1)
        ve.extra[ve.n_extra++] = {(mn + vd.pos) * 0.5, vd.pos - mn};
    }
  }
  return out;
}

MeshInput read_mesh_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail("cannot open mesh file " + path);
  // strip comments, tokenize
  std::vector<std::string> tok;
  std::string line;
  while (std::getline(f, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) tok.push_back(t);
  }
  size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tok.size()) fail("unexpected end of mesh file " + path);
    return tok[pos++];
  };
  auto next_int = [&]() { return std::stoi(next()); };
  auto next_dbl = [&]() { return std::stod(next()); };

  MeshInput in;
  if (next() != "NODES") fail("mesh file must start with NODES");
  int nn = next_int();
  in.nodes.resize(nn);
  for (int k = 0; k < nn; ++k) {
    int id = next_int();
    if (id < 0 || id >= nn) fail("node id out of range in " + path);
    double x = next_dbl(), y = next_dbl();
    in.nodes[id] = {x, y};
  }
  if (next() != "ELEMENTS") fail("mesh file: expected ELEMENTS");
  int ne = next_int();
  in.elements.resize(ne);
  for (int k = 0; k < ne; ++k) {
    int id = next_int();
    if (id < 0 || id >= ne) fail("element id out of range in " + path);
    int nv = next_int();
    if (nv != 3 && nv != 4) fail("element must have 3 or 4 nodes in " + path);
    in.elements[id].resize(nv);
    for (int l = 0; l < nv; ++l) in.elements[id][l] = next_int();
  }
  if (pos < tok.size()) {
    if (next() != "PERIODIC") fail("mesh file: expected PERIODIC");
    int np = next_int();
    in.periodic.resize(np);
    for (int k = 0; k < np; ++k) {
      PeriodicPair& pp = in.periodic[k];
      pp.a1 = next_int(); pp.a2 = next_int();
      pp.b1 = next_int(); pp.b2 = next_int();
      pp.t.x = next_dbl(); pp.t.y = next_dbl();
    }
  }
  return in;
}

void write_mesh_input(const std::string& path, const MeshInput& in) {
  std::ofstream f(path);
  if (!f) fail("cannot write mesh file " + path);
  char buf[128];
  f << "NODES " << in.nodes.size() << "\n";
  for (size_t k = 0; k < in.nodes.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", k, in.nodes[k].x, in.nodes[k].y);
    f << buf;
  }
  f << "ELEMENTS " << in.elements.size() << "\n";
  for (size_t k = 0; k < in.elements.size(); ++k) {
    f << k << " " << in.elements[k].size();
    for (int v : in.elements[k]) f << " " << v;
    f << "\n";
  }
  if (!in.periodic.empty()) {
    f << "PERIODIC " << in.periodic.size() << "\n";
    for (const PeriodicPair& pp : in.periodic) {
      std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g %.17g\n", pp.a1, pp.a2, pp.b1, pp.b2,
                    pp.t.x, pp.t.y);
      f << buf;
    }
  }
  if (!f) fail("I/O failure writing " + path);
}

}  // namespace mhdfv
