// Broken polynomial spaces over a mesh: per-element modal coefficients
// with no inter-element coupling. The orthonormal reference basis makes
// the element mass matrix |detJ| * I, so L2 projection needs no solves.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "sldg/basis.hpp"
#include "sldg/mesh.hpp"

namespace sldg {

struct DgSpace {
  std::shared_ptr<const Mesh> mesh;
  std::vector<int> degree;   // per element
  std::vector<int> offset;   // first dof of each element
  int total_dofs = 0;
  int max_degree = 0;

  int dim(int e) const { return basis_dimension(degree[static_cast<size_t>(e)]); }
};

// Uniform degree everywhere.
std::shared_ptr<const DgSpace> make_space(std::shared_ptr<const Mesh> mesh, int degree);

// Per-element degrees; rejects degree ratios > 2 across any interior face
// (naming the offending face) and degrees outside [1, kMaxBasisDegree].
std::shared_ptr<const DgSpace> make_space(std::shared_ptr<const Mesh> mesh,
                                          const std::vector<int>& degrees);

struct Solution {
  std::shared_ptr<const DgSpace> space;
  std::vector<double> coeff;
};

Solution make_zero(std::shared_ptr<const DgSpace> space);

struct EvalResult {
  double value = 0.0;
  Vec2 grad;  // physical gradient
};

// Evaluate on element e at reference point r.
EvalResult eval(const Solution& sol, int e, Vec2 r);

// Element-local L2 projection of a pointwise function.
Solution project(std::shared_ptr<const DgSpace> space,
                 const std::function<double(Vec2)>& f);

// Discrete L2 norm sqrt(sum_e |detJ| sum_k c_k^2) of a coefficient vector
// on the space (exact thanks to the orthonormal basis).
double discrete_l2(const DgSpace& space, const std::vector<double>& coeff);

}  // namespace sldg
