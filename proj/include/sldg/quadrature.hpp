// Quadrature rules: Gauss-Legendre on [0,1] and symmetric rules on the
// reference triangle {(x,y): x,y >= 0, x+y <= 1}.
#pragma once

#include <vector>

#include "sldg/geometry.hpp"

namespace sldg {

// Rule on the reference triangle. Exact for all polynomials of total
// degree <= exactness; weights are positive and sum to 1/2.
struct TriangleRule {
  int exactness = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;
};

// Rule on [0,1]. A rule with n points is exact through degree 2n-1;
// weights are positive and sum to 1.
struct EdgeRule {
  int count = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

// Symmetric positive rule exact to degree q, 1 <= q <= 20. Built as a
// conical-product (Duffy) rule averaged over the six affine symmetries of
// the triangle, so invariance under vertex permutations is exact by
// construction.
TriangleRule triangle_rule(int q);

// Gauss-Legendre rule with `count` points mapped to [0,1], 1 <= count <= 20.
EdgeRule edge_rule(int count);

}  // namespace sldg
