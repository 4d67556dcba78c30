// Orthonormal modal basis on the reference triangle
// {(x,y): x,y >= 0, x+y <= 1}: Dubiner/Koornwinder construction from
// Jacobi polynomials in collapsed coordinates, scaled so that the mass
// matrix under the reference inner product is the identity.
#pragma once

#include <vector>

#include "sldg/geometry.hpp"

namespace sldg {

// Dimension of the total-degree-n polynomial space: (n+1)(n+2)/2.
inline int basis_dimension(int n) { return (n + 1) * (n + 2) / 2; }

constexpr int kMaxBasisDegree = 10;

// Values of all basis functions of degree <= n at a point of the closed
// reference triangle (tolerance 1e-12), ordered by total degree.
// The first function is the constant sqrt(2).
std::vector<double> basis_eval(int n, Vec2 p);

// Reference-coordinate gradients of all basis functions of degree <= n.
std::vector<Vec2> basis_grad(int n, Vec2 p);

// Tabulated values and gradients at a fixed set of points (row-major,
// tab[pt*N + k]); avoids re-deriving the recurrences in inner loops.
struct BasisTable {
  int degree = 0;
  int N = 0;
  std::vector<double> val;
  std::vector<Vec2> grad;
};

BasisTable tabulate_basis(int n, const std::vector<Vec2>& points);

}  // namespace sldg
