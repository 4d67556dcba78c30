#include "sldg/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sldg/quadrature.hpp"

namespace sldg {

std::shared_ptr<const DgSpace> make_space(std::shared_ptr<const Mesh> mesh, int degree) {
  if (!mesh) throw std::invalid_argument("make_space: null mesh");
  const size_t n = mesh->elements.size();
  return make_space(std::move(mesh), std::vector<int>(n, degree));
}

std::shared_ptr<const DgSpace> make_space(std::shared_ptr<const Mesh> mesh,
                                          const std::vector<int>& degrees) {
  if (!mesh) throw std::invalid_argument("make_space: null mesh");
  if (degrees.size() != mesh->elements.size())
    throw std::invalid_argument("make_space: one degree per element required");
  for (int n : degrees)
    if (n < 1 || n > kMaxBasisDegree)
      throw std::invalid_argument("make_space: degree out of range (must be 1.." +
                                  std::to_string(kMaxBasisDegree) + ")");

  // Bounded degree variation across interior faces (ratio <= 2).
  for (size_t fi = 0; fi < mesh->faces.size(); ++fi) {
    const Face& f = mesh->faces[fi];
    if (f.kind != FaceKind::interior) continue;
    const int np = degrees[static_cast<size_t>(f.plus)];
    const int nm = degrees[static_cast<size_t>(f.minus)];
    const int lo = std::min(np, nm), hi = std::max(np, nm);
    if (hi > 2 * lo)
      throw std::invalid_argument(
          "make_space: degree ratio > 2 across face " + std::to_string(fi) +
          " (elements " + std::to_string(f.plus) + "/" + std::to_string(f.minus) +
          ", degrees " + std::to_string(np) + "/" + std::to_string(nm) + ")");
  }

  auto sp = std::make_shared<DgSpace>();
  sp->mesh = std::move(mesh);
  sp->degree = degrees;
  sp->offset.resize(degrees.size());
  int off = 0;
  for (size_t e = 0; e < degrees.size(); ++e) {
    sp->offset[e] = off;
    off += basis_dimension(degrees[e]);
    sp->max_degree = std::max(sp->max_degree, degrees[e]);
  }
  sp->total_dofs = off;
  return sp;
}

Solution make_zero(std::shared_ptr<const DgSpace> space) {
  Solution s;
  s.coeff.assign(static_cast<size_t>(space->total_dofs), 0.0);
  s.space = std::move(space);
  return s;
}

EvalResult eval(const Solution& sol, int e, Vec2 r) {
  const DgSpace& sp = *sol.space;
  const int n = sp.degree[static_cast<size_t>(e)];
  const int N = basis_dimension(n);
  const int off = sp.offset[static_cast<size_t>(e)];
  const auto val = basis_eval(n, r);
  const auto grd = basis_grad(n, r);
  EvalResult out;
  Vec2 gref{0.0, 0.0};
  for (int k = 0; k < N; ++k) {
    const double c = sol.coeff[static_cast<size_t>(off + k)];
    out.value += c * val[k];
    gref = gref + c * grd[k];
  }
  out.grad = sp.mesh->map(e).push_gradient(gref);
  return out;
}

Solution project(std::shared_ptr<const DgSpace> space,
                 const std::function<double(Vec2)>& f) {
  const DgSpace& sp = *space;
  Solution s = make_zero(space);
  const TriangleRule rule = triangle_rule(std::min(20, 2 * sp.max_degree + 3));
  const BasisTable tab = tabulate_basis(sp.max_degree, rule.points);
  for (int e = 0; e < sp.mesh->n_elements(); ++e) {
    const int N = sp.dim(e);
    const int off = sp.offset[static_cast<size_t>(e)];
    const AffineMap& map = sp.mesh->map(e);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * f(map.to_physical(rule.points[q]));
      const double* phi = &tab.val[q * static_cast<size_t>(tab.N)];
      for (int k = 0; k < N; ++k)
        s.coeff[static_cast<size_t>(off + k)] += w * phi[k];
    }
  }
  return s;
}

double discrete_l2(const DgSpace& sp, const std::vector<double>& coeff) {
  if (coeff.size() != static_cast<size_t>(sp.total_dofs))
    throw std::invalid_argument("discrete_l2: size mismatch");
  double acc = 0.0;
  for (int e = 0; e < sp.mesh->n_elements(); ++e) {
    const int off = sp.offset[static_cast<size_t>(e)];
    double local = 0.0;
    for (int k = 0; k < sp.dim(e); ++k) {
      const double c = coeff[static_cast<size_t>(off + k)];
      local += c * c;
    }
    acc += sp.mesh->map(e).detJ * local;
  }
  return std::sqrt(acc);
}

}  // namespace sldg
