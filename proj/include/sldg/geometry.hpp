// Small 2D vector and triangle helpers shared across the library.
#pragma once

#include <array>
#include <cmath>

namespace sldg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Signed area of triangle (a,b,c); positive for counter-clockwise order.
inline double tri_signed_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Affine map F(r) = v0 + J r from the reference triangle
// {(r1,r2): r1,r2 >= 0, r1+r2 <= 1} onto a physical triangle.
struct AffineMap {
  Vec2 v0;
  double J[2][2];     // columns: v1-v0, v2-v0
  double Jinv[2][2];  // inverse, for physical -> reference
  double detJ;        // = 2*area, positive for CCW triangles

  Vec2 to_physical(Vec2 r) const {
    return {v0.x + J[0][0] * r.x + J[0][1] * r.y,
            v0.y + J[1][0] * r.x + J[1][1] * r.y};
  }
  Vec2 to_reference(Vec2 p) const {
    const Vec2 d = p - v0;
    return {Jinv[0][0] * d.x + Jinv[0][1] * d.y,
            Jinv[1][0] * d.x + Jinv[1][1] * d.y};
  }
  // Push a reference gradient to a physical one: g_phys = J^{-T} g_ref.
  Vec2 push_gradient(Vec2 g) const {
    return {Jinv[0][0] * g.x + Jinv[1][0] * g.y,
            Jinv[0][1] * g.x + Jinv[1][1] * g.y};
  }
};

inline AffineMap make_affine_map(Vec2 v0, Vec2 v1, Vec2 v2) {
  AffineMap m;
  m.v0 = v0;
  m.J[0][0] = v1.x - v0.x;
  m.J[1][0] = v1.y - v0.y;
  m.J[0][1] = v2.x - v0.x;
  m.J[1][1] = v2.y - v0.y;
  m.detJ = m.J[0][0] * m.J[1][1] - m.J[0][1] * m.J[1][0];
  const double inv = 1.0 / m.detJ;
  m.Jinv[0][0] = m.J[1][1] * inv;
  m.Jinv[0][1] = -m.J[0][1] * inv;
  m.Jinv[1][0] = -m.J[1][0] * inv;
  m.Jinv[1][1] = m.J[0][0] * inv;
  return m;
}

}  // namespace sldg
