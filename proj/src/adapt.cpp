#include "sldg/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sldg/quadrature.hpp"

namespace sldg {

std::vector<double> indicator(const Solution& u) {
  const DgSpace& sp = *u.space;
  const TriangleRule rule = triangle_rule(std::min(20, 2 * sp.max_degree + 3));
  std::vector<double> eta(static_cast<size_t>(sp.mesh->n_elements()), 0.0);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < sp.mesh->n_elements(); ++e) {
    double gmax = 0.0;
    for (const Vec2& r : rule.points)
      gmax = std::max(gmax, norm(eval(u, e, r).grad));
    eta[static_cast<size_t>(e)] = sp.mesh->elements[static_cast<size_t>(e)].h * gmax;
  }
  return eta;
}

std::vector<int> mark(const std::vector<double>& eta, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("mark: theta must be in [0,1]");
  const int n = static_cast<int>(eta.size());
  const int k = std::min(
      n, static_cast<int>(std::ceil(theta * static_cast<double>(n) - 1e-12)));
  if (k <= 0) return {};
  std::vector<int> ids(static_cast<size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (eta[static_cast<size_t>(a)] != eta[static_cast<size_t>(b)])
      return eta[static_cast<size_t>(a)] > eta[static_cast<size_t>(b)];
    return a < b;
  });
  std::vector<int> out(ids.begin(), ids.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

Solution transfer(const Solution& u, std::shared_ptr<const DgSpace> new_space) {
  const DgSpace& old_sp = *u.space;
  const DgSpace& new_sp = *new_space;
  if (new_sp.mesh->parent_uid != old_sp.mesh->uid)
    throw std::invalid_argument("transfer: target mesh was not refined from the source mesh");

  const int q = std::min(20, old_sp.max_degree + new_sp.max_degree + 2);
  const TriangleRule rule = triangle_rule(q);
  const BasisTable tab = tabulate_basis(new_sp.max_degree, rule.points);

  Solution out = make_zero(new_space);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < new_sp.mesh->n_elements(); ++e) {
    const Element& el = new_sp.mesh->elements[static_cast<size_t>(e)];
    const int parent = el.parent;
    const int n_new = new_sp.degree[static_cast<size_t>(e)];
    const int n_old = old_sp.degree[static_cast<size_t>(parent)];
    const int off_new = new_sp.offset[static_cast<size_t>(e)];
    const int off_old = old_sp.offset[static_cast<size_t>(parent)];

    if (el.child_index < 0 && n_new == n_old) {
      for (int k = 0; k < basis_dimension(n_new); ++k)
        out.coeff[static_cast<size_t>(off_new + k)] =
            u.coeff[static_cast<size_t>(off_old + k)];
      continue;
    }

    const AffineMap& cmap = new_sp.mesh->map(e);
    const AffineMap& pmap = old_sp.mesh->map(parent);
    const int N_new = basis_dimension(n_new);
    const int N_old = basis_dimension(n_old);
    for (size_t qi = 0; qi < rule.points.size(); ++qi) {
      const Vec2 pref = pmap.to_reference(cmap.to_physical(rule.points[qi]));
      const auto pval = basis_eval(n_old, pref);
      double up = 0.0;
      for (int k = 0; k < N_old; ++k)
        up += u.coeff[static_cast<size_t>(off_old + k)] * pval[k];
      const double w = rule.weights[qi] * up;
      const double* phi = &tab.val[qi * static_cast<size_t>(tab.N)];
      for (int k = 0; k < N_new; ++k)
        out.coeff[static_cast<size_t>(off_new + k)] += w * phi[k];
    }
  }
  return out;
}

}  // namespace sldg
