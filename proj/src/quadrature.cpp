#include "sldg/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace sldg {

namespace {

// Gauss nodes/weights for the Jacobi weight (1-x)^a (1+x)^b on [-1,1] via
// Golub-Welsch: eigenvalues of the symmetric tridiagonal recurrence matrix
// are the nodes, scaled squared first eigenvector components the weights.
void gauss_jacobi(int m, double a, double b, std::vector<double>& x,
                  std::vector<double>& w) {
  const double mu0 =
      std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
      std::tgamma(a + b + 2.0);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    T(k, k) = (k == 0) ? (b - a) / (a + b + 2.0)
                       : (b * b - a * a) / (s * (s + 2.0));
    if (k >= 1) {
      const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
      const double den = s * s * (s + 1.0) * (s - 1.0);
      const double off = std::sqrt(num / den);
      T(k, k - 1) = off;
      T(k - 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  x.resize(m);
  w.resize(m);
  for (int k = 0; k < m; ++k) {
    x[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    w[k] = mu0 * v0 * v0;
  }
}

}  // namespace

EdgeRule edge_rule(int count) {
  if (count < 1 || count > 20)
    throw std::invalid_argument("edge_rule: count must be in [1,20]");
  std::vector<double> x, w;
  gauss_jacobi(count, 0.0, 0.0, x, w);
  EdgeRule r;
  r.count = count;
  r.points.resize(count);
  r.weights.resize(count);
  for (int k = 0; k < count; ++k) {
    r.points[k] = 0.5 * (x[k] + 1.0);
    r.weights[k] = 0.5 * w[k];
  }
  return r;
}

TriangleRule triangle_rule(int q) {
  if (q < 1 || q > 20)
    throw std::invalid_argument("triangle_rule: q must be in [1,20]");
  const int m = (q + 2) / 2;  // ceil((q+1)/2)

  // Conical product rule: Gauss-Legendre in the first collapsed coordinate,
  // Gauss-Jacobi (1-s) weight in the second; exact through degree 2m-1 >= q.
  std::vector<double> xg, wg, xj, wj;
  gauss_jacobi(m, 0.0, 0.0, xg, wg);
  gauss_jacobi(m, 1.0, 0.0, xj, wj);

  std::vector<Vec2> pts;
  std::vector<double> wts;
  pts.reserve(static_cast<size_t>(m) * m);
  wts.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double x = 0.25 * (1.0 + xg[i]) * (1.0 - xj[j]);
      const double y = 0.5 * (1.0 + xj[j]);
      pts.push_back({x, y});
      wts.push_back(0.125 * wg[i] * wj[j]);
    }
  }

  // Average over the six vertex permutations of the reference triangle,
  // written in barycentric coordinates (l0,l1,l2) = (1-x-y, x, y).
  static const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const Vec2 vert[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  std::vector<Vec2> spts;
  std::vector<double> swts;
  spts.reserve(pts.size() * 6);
  swts.reserve(pts.size() * 6);
  for (size_t k = 0; k < pts.size(); ++k) {
    const double lam[3] = {1.0 - pts[k].x - pts[k].y, pts[k].x, pts[k].y};
    for (const auto& p : perm) {
      Vec2 q2 = lam[0] * vert[p[0]] + lam[1] * vert[p[1]] + lam[2] * vert[p[2]];
      spts.push_back(q2);
      swts.push_back(wts[k] / 6.0);
    }
  }

  // Merge coincident points (deterministic: sort then sweep).
  std::vector<size_t> order(spts.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (spts[a].x != spts[b].x) return spts[a].x < spts[b].x;
    return spts[a].y < spts[b].y;
  });
  TriangleRule r;
  r.exactness = q;
  const double tol = 1e-13;
  for (size_t k : order) {
    if (!r.points.empty() && std::abs(r.points.back().x - spts[k].x) < tol &&
        std::abs(r.points.back().y - spts[k].y) < tol) {
      r.weights.back() += swts[k];
    } else {
      r.points.push_back(spts[k]);
      r.weights.push_back(swts[k]);
    }
  }
  return r;
}

}  // namespace sldg
