// Triangular meshes of the unit square with 1-irregular red refinement and
// an optional straight crack modeled as a topological slit (duplicated
// vertices, so the two crack sides are face-disconnected).
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sldg/geometry.hpp"

namespace sldg {

enum class FaceKind { interior, boundary, crack };
enum class BoundaryTag { none, left, right, bottom, top, crack };

struct Element {
  std::array<int, 3> v;  // vertex ids, counter-clockwise
  int parent = -1;       // element id in the previous mesh (refine lineage)
  int child_index = -1;  // 0..3 for red children, -1 for carried-over
  int level = 0;         // refinement generation
  double h = 0.0;        // diameter (longest edge)
};

// A face is owned by its plus element; `a -> b` runs along the plus
// element's counter-clockwise traversal and `normal` points plus -> minus
// (outward from plus). On a hanging face the plus side is the fine element
// and the face covers half of the minus (coarse) element's edge.
struct Face {
  FaceKind kind = FaceKind::interior;
  BoundaryTag tag = BoundaryTag::none;
  int plus = -1;
  int minus = -1;      // -1 on boundary/crack faces
  int plus_edge = -1;  // local edge index 0..2 in the plus element
  int minus_edge = -1;
  bool hanging = false;
  Vec2 a, b;
  double len = 0.0;
  Vec2 normal;
};

// Horizontal crack segment ((x0,y),(x1,y)); must lie on mesh lines.
struct CrackSegment {
  double y = 0.5;
  double x0 = 0.5;
  double x1 = 1.0;
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Element> elements;
  std::vector<Face> faces;
  std::optional<CrackSegment> crack;

  // Midpoint vertex of every edge ever split in this mesh's lineage,
  // keyed by (min vid, max vid); lets face construction recover hanging
  // relations topologically (never by coordinates, which would re-glue
  // the crack slit).
  std::map<std::pair<int, int>, int> edge_midpoints;

  long uid = -1;         // identity for refine/transfer lineage checks
  long parent_uid = -1;

  std::vector<AffineMap> maps;  // per-element affine maps, precomputed

  int n_elements() const { return static_cast<int>(elements.size()); }
  const AffineMap& map(int e) const { return maps[static_cast<size_t>(e)]; }
  double area(int e) const { return 0.5 * maps[static_cast<size_t>(e)].detJ; }
  Vec2 vertex(int vid) const { return vertices[static_cast<size_t>(vid)]; }
  Vec2 centroid(int e) const;

  // Validates the full invariant set (orientation, area cover, face
  // classification and coverage, 1-irregularity, neighbor size ratios,
  // crack separation); throws std::runtime_error with a diagnostic.
  void check() const;

  // Legacy-VTK dump of the triangulation with level/diameter cell data.
  void write_vtk(const std::string& path) const;
};

// Structured n x n mesh (two CCW triangles per cell, diagonal bottom-left
// to top-right): 2n^2 elements, (n+1)^2 vertices. A crack requires its
// endpoints and line to sit on mesh lines and 0 < y < 1.
Mesh build_uniform(int n, const std::optional<CrackSegment>& crack = {});

// Mesh from raw cells (conforming, optionally pre-slit along `crack`);
// used for tests and renumbering experiments.
Mesh from_cells(const std::vector<Vec2>& vertices,
                const std::vector<std::array<int, 3>>& cells,
                const std::optional<CrackSegment>& crack = {});

// Red-refines the marked elements plus the closure needed to keep the mesh
// 1-irregular (level difference across any face <= 1). Vertex ids of the
// input mesh are preserved; new elements record parent/child lineage.
Mesh refine(const Mesh& m, const std::vector<int>& marked);

// Shared parametrization of a face for quadrature: t in [0,1] runs from
// `a` to `b`; both side maps return reference coordinates of the same
// physical point. On a hanging face the minus map covers half of the
// coarse element's edge.
struct FaceFrame {
  Vec2 a, b;
  Vec2 plus_r0, plus_r1;
  bool has_minus = false;
  Vec2 minus_r0, minus_r1;

  Vec2 physical(double t) const { return a + t * (b - a); }
  Vec2 plus_ref(double t) const { return plus_r0 + t * (plus_r1 - plus_r0); }
  Vec2 minus_ref(double t) const { return minus_r0 + t * (minus_r1 - minus_r0); }
};

FaceFrame face_quadrature_frame(const Mesh& m, const Face& f);

// True if the closed element contains the physical point (tolerance in
// barycentric coordinates).
bool element_contains(const Mesh& m, int e, Vec2 p, double tol = 1e-12);

}  // namespace sldg
