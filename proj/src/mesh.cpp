#include "sldg/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sldg {

namespace {

std::atomic<long> g_mesh_uid{0};

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

constexpr double kGeomTol = 1e-12;

bool on_crack_segment(Vec2 p, const CrackSegment& c) {
  return std::abs(p.y - c.y) < kGeomTol && p.x > c.x0 - kGeomTol &&
         p.x < c.x1 + kGeomTol;
}

// Fills h, maps; assumes vertices/elements are final.
void finalize_geometry(Mesh& m) {
  m.maps.resize(m.elements.size());
  for (size_t e = 0; e < m.elements.size(); ++e) {
    Element& el = m.elements[e];
    const Vec2 p0 = m.vertices[el.v[0]];
    const Vec2 p1 = m.vertices[el.v[1]];
    const Vec2 p2 = m.vertices[el.v[2]];
    if (tri_signed_area(p0, p1, p2) <= 0.0)
      throw std::runtime_error("mesh: element " + std::to_string(e) +
                               " is not counter-clockwise");
    m.maps[e] = make_affine_map(p0, p1, p2);
    el.h = std::max({dist(p0, p1), dist(p1, p2), dist(p2, p0)});
  }
}

// Rebuilds the face list from element connectivity. Hanging relations are
// recovered through the edge-midpoint registry, never through coordinates.
void build_faces(Mesh& m) {
  struct Occ {
    int elem;
    int ledge;
  };
  std::map<EdgeKey, std::vector<Occ>> occ;
  for (int e = 0; e < m.n_elements(); ++e) {
    const auto& v = m.elements[e].v;
    for (int k = 0; k < 3; ++k)
      occ[edge_key(v[k], v[(k + 1) % 3])].push_back({e, k});
  }
  for (const auto& [key, lst] : occ)
    if (lst.size() > 2)
      throw std::runtime_error("mesh: edge shared by more than two elements");

  // Map fine sub-edge -> (coarse element, coarse local edge).
  std::map<EdgeKey, Occ> hanging_host;
  for (const auto& [key, lst] : occ) {
    if (lst.size() != 1) continue;
    const auto mid = m.edge_midpoints.find(key);
    if (mid == m.edge_midpoints.end()) continue;
    const EdgeKey half1 = edge_key(key.first, mid->second);
    const EdgeKey half2 = edge_key(mid->second, key.second);
    const auto o1 = occ.find(half1);
    const auto o2 = occ.find(half2);
    if (o1 == occ.end() && o2 == occ.end()) continue;  // stale registry entry
    if (o1 == occ.end() || o2 == occ.end() || o1->second.size() != 1 ||
        o2->second.size() != 1)
      throw std::runtime_error("mesh: inconsistent hanging-edge topology");
    hanging_host[half1] = lst[0];
    hanging_host[half2] = lst[0];
  }

  auto classify = [&](Vec2 a, Vec2 b) -> BoundaryTag {
    if (m.crack && on_crack_segment(a, *m.crack) && on_crack_segment(b, *m.crack))
      return BoundaryTag::crack;
    if (std::abs(a.x) < kGeomTol && std::abs(b.x) < kGeomTol) return BoundaryTag::left;
    if (std::abs(a.x - 1.0) < kGeomTol && std::abs(b.x - 1.0) < kGeomTol)
      return BoundaryTag::right;
    if (std::abs(a.y) < kGeomTol && std::abs(b.y) < kGeomTol) return BoundaryTag::bottom;
    if (std::abs(a.y - 1.0) < kGeomTol && std::abs(b.y - 1.0) < kGeomTol)
      return BoundaryTag::top;
    return BoundaryTag::none;
  };

  m.faces.clear();
  for (int e = 0; e < m.n_elements(); ++e) {
    const auto& v = m.elements[e].v;
    for (int k = 0; k < 3; ++k) {
      const int va = v[k];
      const int vb = v[(k + 1) % 3];
      const EdgeKey key = edge_key(va, vb);
      const auto& lst = occ[key];

      Face f;
      f.plus = e;
      f.plus_edge = k;
      f.a = m.vertices[va];
      f.b = m.vertices[vb];
      f.len = dist(f.a, f.b);
      f.normal = (1.0 / f.len) * Vec2{f.b.y - f.a.y, -(f.b.x - f.a.x)};

      if (lst.size() == 2) {
        const Occ other = (lst[0].elem == e && lst[0].ledge == k) ? lst[1] : lst[0];
        if (e < other.elem) continue;  // emitted when visiting the plus side
        f.kind = FaceKind::interior;
        f.minus = other.elem;
        f.minus_edge = other.ledge;
        m.faces.push_back(f);
        continue;
      }

      const auto host = hanging_host.find(key);
      if (host != hanging_host.end()) {
        f.kind = FaceKind::interior;
        f.hanging = true;
        f.minus = host->second.elem;
        f.minus_edge = host->second.ledge;
        m.faces.push_back(f);
        continue;
      }

      // Skip the coarse side of a hanging pair: its sub-faces are emitted
      // by the fine elements.
      if (m.edge_midpoints.count(key)) {
        const auto mid = m.edge_midpoints.at(key);
        if (occ.count(edge_key(key.first, mid)) || occ.count(edge_key(mid, key.second)))
          continue;
      }

      const BoundaryTag tag = classify(f.a, f.b);
      if (tag == BoundaryTag::none)
        throw std::runtime_error("mesh: interior edge of element " +
                                 std::to_string(e) + " has no neighbor");
      f.kind = (tag == BoundaryTag::crack) ? FaceKind::crack : FaceKind::boundary;
      f.tag = tag;
      f.minus = -1;
      m.faces.push_back(f);
    }
  }
}

}  // namespace

Vec2 Mesh::centroid(int e) const {
  const auto& v = elements[static_cast<size_t>(e)].v;
  return (1.0 / 3.0) * (vertices[v[0]] + vertices[v[1]] + vertices[v[2]]);
}

Mesh build_uniform(int n, const std::optional<CrackSegment>& crack) {
  if (n < 1) throw std::invalid_argument("build_uniform: n must be >= 1");
  if (crack) {
    auto on_grid = [&](double t) {
      const double s = t * n;
      return std::abs(s - std::round(s)) < 1e-9;
    };
    if (!(crack->y > 0.0 && crack->y < 1.0))
      throw std::invalid_argument("build_uniform: crack line must satisfy 0 < y < 1");
    if (!(crack->x0 >= 0.0 && crack->x0 < crack->x1 && crack->x1 <= 1.0))
      throw std::invalid_argument("build_uniform: crack needs 0 <= x0 < x1 <= 1");
    if (!on_grid(crack->y) || !on_grid(crack->x0) || !on_grid(crack->x1))
      throw std::invalid_argument(
          "build_uniform: crack must lie on mesh lines (choose n so that y, x0, "
          "x1 are multiples of 1/n)");
  }

  Mesh m;
  m.uid = g_mesh_uid++;
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.vertices.reserve(static_cast<size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  m.elements.reserve(static_cast<size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      m.elements.push_back({{v00, v10, v11}, -1, -1, 0, 0.0});
      m.elements.push_back({{v00, v11, v01}, -1, -1, 0, 0.0});
    }
  }

  if (crack) {
    m.crack = crack;
    // Duplicate vertices strictly inside the crack segment; elements above
    // the crack line take the duplicates, producing a topological slit.
    std::map<int, int> dup;
    const size_t n_original = m.vertices.size();
    for (size_t v = 0; v < n_original; ++v) {
      const Vec2 p = m.vertices[v];
      if (std::abs(p.y - crack->y) < kGeomTol && p.x > crack->x0 + kGeomTol &&
          p.x < crack->x1 - kGeomTol) {
        dup[static_cast<int>(v)] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(p);
      }
    }
    for (auto& el : m.elements) {
      const Vec2 c = (1.0 / 3.0) * (m.vertices[el.v[0]] + m.vertices[el.v[1]] +
                                    m.vertices[el.v[2]]);
      if (c.y > crack->y)
        for (int k = 0; k < 3; ++k)
          if (auto it = dup.find(el.v[k]); it != dup.end()) el.v[k] = it->second;
    }
  }

  finalize_geometry(m);
  build_faces(m);
  return m;
}

Mesh from_cells(const std::vector<Vec2>& vertices,
                const std::vector<std::array<int, 3>>& cells,
                const std::optional<CrackSegment>& crack) {
  Mesh m;
  m.uid = g_mesh_uid++;
  m.vertices = vertices;
  m.crack = crack;
  m.elements.reserve(cells.size());
  for (const auto& c : cells) m.elements.push_back({c, -1, -1, 0, 0.0});
  finalize_geometry(m);
  build_faces(m);
  return m;
}

Mesh refine(const Mesh& m, const std::vector<int>& marked) {
  std::vector<char> mark(m.elements.size(), 0);
  for (int e : marked) {
    if (e < 0 || e >= m.n_elements())
      throw std::invalid_argument("refine: marked element id out of range");
    mark[static_cast<size_t>(e)] = 1;
  }

  // Closure: a marked element with a strictly coarser unmarked neighbor
  // forces that neighbor, keeping post-refinement level differences <= 1
  // (hence one hanging node per edge and diameter ratios <= 2 across faces).
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Face& f : m.faces) {
      if (f.kind != FaceKind::interior) continue;
      const int p = f.plus, q = f.minus;
      const int lp = m.elements[p].level, lq = m.elements[q].level;
      if (mark[p] && !mark[q] && lq < lp) {
        mark[q] = 1;
        changed = true;
      } else if (mark[q] && !mark[p] && lp < lq) {
        mark[p] = 1;
        changed = true;
      }
    }
  }

  Mesh out;
  out.uid = g_mesh_uid++;
  out.parent_uid = m.uid;
  out.vertices = m.vertices;
  out.crack = m.crack;
  out.edge_midpoints = m.edge_midpoints;

  auto midpoint = [&out](int a, int b) {
    const EdgeKey key = edge_key(a, b);
    if (auto it = out.edge_midpoints.find(key); it != out.edge_midpoints.end())
      return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (out.vertices[a] + out.vertices[b]));
    out.edge_midpoints.emplace(key, id);
    return id;
  };

  for (int e = 0; e < m.n_elements(); ++e) {
    const Element& el = m.elements[e];
    if (!mark[e]) {
      out.elements.push_back({el.v, e, -1, el.level, 0.0});
      continue;
    }
    const int m01 = midpoint(el.v[0], el.v[1]);
    const int m12 = midpoint(el.v[1], el.v[2]);
    const int m20 = midpoint(el.v[2], el.v[0]);
    const int lv = el.level + 1;
    out.elements.push_back({{el.v[0], m01, m20}, e, 0, lv, 0.0});
    out.elements.push_back({{m01, el.v[1], m12}, e, 1, lv, 0.0});
    out.elements.push_back({{m20, m12, el.v[2]}, e, 2, lv, 0.0});
    out.elements.push_back({{m01, m12, m20}, e, 3, lv, 0.0});
  }

  finalize_geometry(out);
  build_faces(out);
  return out;
}

FaceFrame face_quadrature_frame(const Mesh& m, const Face& f) {
  FaceFrame fr;
  fr.a = f.a;
  fr.b = f.b;
  const AffineMap& mp = m.map(f.plus);
  fr.plus_r0 = mp.to_reference(f.a);
  fr.plus_r1 = mp.to_reference(f.b);
  if (f.minus >= 0) {
    fr.has_minus = true;
    const AffineMap& mm = m.map(f.minus);
    fr.minus_r0 = mm.to_reference(f.a);
    fr.minus_r1 = mm.to_reference(f.b);
  }
  return fr;
}

bool element_contains(const Mesh& m, int e, Vec2 p, double tol) {
  const Vec2 r = m.map(e).to_reference(p);
  return r.x >= -tol && r.y >= -tol && r.x + r.y <= 1.0 + tol;
}

void Mesh::check() const {
  auto fail = [](const std::string& msg) { throw std::runtime_error("mesh check: " + msg); };

  double total = 0.0;
  for (int e = 0; e < n_elements(); ++e) {
    if (maps[e].detJ <= 0.0) fail("non-positive element area");
    total += area(e);
  }
  if (std::abs(total - 1.0) > 1e-12) fail("element areas do not cover the unit square");

  // Face geometry, orientation, and per-element edge coverage.
  std::vector<std::array<double, 3>> covered(elements.size(), {0.0, 0.0, 0.0});
  double boundary_len = 0.0;
  for (const Face& f : faces) {
    if (f.len <= 0.0) fail("degenerate face");
    if (std::abs(norm(f.normal) - 1.0) > 1e-12) fail("non-unit face normal");
    if (f.kind == FaceKind::interior) {
      if (!f.hanging && f.plus <= f.minus) fail("interior face with plus <= minus");
      const double hp = elements[f.plus].h, hm = elements[f.minus].h;
      const double ratio = std::max(hp, hm) / std::min(hp, hm);
      if (ratio > 4.0 + 1e-9) fail("neighbor diameter ratio exceeds 4");
      const Vec2 mid = 0.5 * (f.a + f.b);
      if (!element_contains(*this, f.plus, mid, 1e-9) ||
          !element_contains(*this, f.minus, mid, 1e-9))
        fail("face midpoint not contained in both neighbors");
      covered[f.minus][f.minus_edge] += f.len;
    } else {
      if (f.minus != -1) fail("boundary/crack face with a minus element");
      boundary_len += f.len;
    }
    covered[f.plus][f.plus_edge] += f.len;
    // Normal must point out of the plus element.
    const Vec2 probe = 0.5 * (f.a + f.b) + (0.05 * f.len) * f.normal;
    if (element_contains(*this, f.plus, probe, -1e-9))
      fail("face normal does not point out of the plus element");
  }
  for (int e = 0; e < n_elements(); ++e) {
    const auto& v = elements[e].v;
    for (int k = 0; k < 3; ++k) {
      const double elen = dist(vertices[v[k]], vertices[v[(k + 1) % 3]]);
      if (std::abs(covered[e][k] - elen) > 1e-12 * std::max(1.0, elen))
        fail("element edge not exactly covered by faces");
    }
  }
  const double expected = crack ? 4.0 + 2.0 * (crack->x1 - crack->x0) : 4.0;
  if (std::abs(boundary_len - expected) > 1e-10)
    fail("boundary + crack face length mismatch");

  // One hanging node per coarse edge, placed at the edge midpoint.
  std::map<std::pair<int, int>, std::vector<const Face*>> hosts;
  for (const Face& f : faces)
    if (f.hanging) hosts[{f.minus, f.minus_edge}].push_back(&f);
  for (const auto& [host, sub] : hosts) {
    if (sub.size() != 2) fail("coarse edge with more than one hanging node");
    const auto& v = elements[host.first].v;
    const Vec2 pa = vertices[v[host.second]];
    const Vec2 pb = vertices[v[(host.second + 1) % 3]];
    const Vec2 mid = 0.5 * (pa + pb);
    for (const Face* f : sub) {
      const bool touches = dist(f->a, mid) < 1e-12 || dist(f->b, mid) < 1e-12;
      if (!touches) fail("hanging face does not touch the coarse edge midpoint");
      if (std::abs(f->len - 0.5 * dist(pa, pb)) > 1e-12)
        fail("hanging face is not half of the coarse edge");
    }
  }

  // The crack slit must never be glued: no non-crack face may lie on or
  // cross the open crack segment.
  if (crack) {
    for (const Face& f : faces) {
      if (f.kind == FaceKind::crack) continue;
      const Vec2 fm = 0.5 * (f.a + f.b);
      if (on_crack_segment(f.a, *crack) && on_crack_segment(f.b, *crack) &&
          fm.x > crack->x0 + kGeomTol)
        fail("non-crack face lies along the crack segment");
      const double da = f.a.y - crack->y, db = f.b.y - crack->y;
      if (da * db < -kGeomTol * kGeomTol) {
        const double t = da / (da - db);
        const double x = f.a.x + t * (f.b.x - f.a.x);
        if (x > crack->x0 + kGeomTol && x < crack->x1 - kGeomTol)
          fail("face crosses the crack segment");
      }
    }
  }
}

void Mesh::write_vtk(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[64];
  out << "# vtk DataFile Version 3.0\ntriangulation\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << vertices.size() << " double\n";
  for (const Vec2& p : vertices) {
    std::snprintf(buf, sizeof buf, "%.12e %.12e 0.0\n", p.x, p.y);
    out << buf;
  }
  out << "CELLS " << elements.size() << ' ' << 4 * elements.size() << '\n';
  for (const Element& el : elements)
    out << "3 " << el.v[0] << ' ' << el.v[1] << ' ' << el.v[2] << '\n';
  out << "CELL_TYPES " << elements.size() << '\n';
  for (size_t e = 0; e < elements.size(); ++e) out << "5\n";
  out << "CELL_DATA " << elements.size() << '\n';
  out << "SCALARS level int 1\nLOOKUP_TABLE default\n";
  for (const Element& el : elements) out << el.level << '\n';
  out << "SCALARS diameter double 1\nLOOKUP_TABLE default\n";
  for (const Element& el : elements) {
    std::snprintf(buf, sizeof buf, "%.12e\n", el.h);
    out << buf;
  }
}

}  // namespace sldg
