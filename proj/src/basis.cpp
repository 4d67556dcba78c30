#include "sldg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace sldg {

namespace {

// Jacobi polynomials P_k^{(a,0)}(s), k = 0..n, by the standard three-term
// recurrence, together with d/ds values. Derivatives use
// d/ds P_k^{(a,b)} = (k+a+b+1)/2 * P_{k-1}^{(a+1,b+1)}.
void jacobi_row(int n, double a, double b, double s, std::vector<double>& P) {
  P.resize(n + 1);
  P[0] = 1.0;
  if (n == 0) return;
  P[1] = 0.5 * ((a - b) + (a + b + 2.0) * s);
  for (int k = 2; k <= n; ++k) {
    const double t = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (t - 2.0);
    const double c2 = (t - 1.0) * (a * a - b * b);
    const double c3 = (t - 2.0) * (t - 1.0) * t;
    const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * t;
    P[k] = ((c2 + c3 * s) * P[k - 1] - c4 * P[k - 2]) / c1;
  }
}

// Scaled Legendre L_p(u,v) = v^p P_p(u/v): homogeneous form of the Legendre
// recurrence, singularity-free at the collapsed vertex v = 0. D/E are the
// partial derivatives with respect to u and v.
struct ScaledLegendre {
  std::vector<double> L, Du, Dv;
};

ScaledLegendre scaled_legendre(int n, double u, double v) {
  ScaledLegendre r;
  r.L.assign(n + 1, 0.0);
  r.Du.assign(n + 1, 0.0);
  r.Dv.assign(n + 1, 0.0);
  r.L[0] = 1.0;
  if (n == 0) return r;
  r.L[1] = u;
  r.Du[1] = 1.0;
  for (int p = 1; p < n; ++p) {
    const double ap = (2.0 * p + 1.0) / (p + 1.0);
    const double bp = static_cast<double>(p) / (p + 1.0);
    r.L[p + 1] = ap * u * r.L[p] - bp * v * v * r.L[p - 1];
    r.Du[p + 1] = ap * (r.L[p] + u * r.Du[p]) - bp * v * v * r.Du[p - 1];
    r.Dv[p + 1] =
        ap * u * r.Dv[p] - bp * (2.0 * v * r.L[p - 1] + v * v * r.Dv[p - 1]);
  }
  return r;
}

void check_point(int n, Vec2 p) {
  if (n < 0 || n > kMaxBasisDegree)
    throw std::invalid_argument("basis: degree out of range");
  const double tol = 1e-12;
  if (p.x < -tol || p.y < -tol || p.x + p.y > 1.0 + tol)
    throw std::invalid_argument("basis: point outside reference triangle");
}

}  // namespace

// phi_{p,q}(x,y) = sqrt(2(2p+1)(p+q+1)) * L_p(u,v) * P_q^{(2p+1,0)}(2y-1)
// with u = 2x+y-1, v = 1-y; ordered by total degree l = p+q, p ascending.
std::vector<double> basis_eval(int n, Vec2 p) {
  check_point(n, p);
  const double u = 2.0 * p.x + p.y - 1.0;
  const double v = 1.0 - p.y;
  const double s = 2.0 * p.y - 1.0;
  const ScaledLegendre sl = scaled_legendre(n, u, v);
  std::vector<double> out(basis_dimension(n));
  std::vector<double> J;
  int idx = 0;
  for (int l = 0; l <= n; ++l) {
    for (int pp = 0; pp <= l; ++pp) {
      const int q = l - pp;
      jacobi_row(q, 2.0 * pp + 1.0, 0.0, s, J);
      const double c = std::sqrt(2.0 * (2.0 * pp + 1.0) * (pp + q + 1.0));
      out[idx++] = c * sl.L[pp] * J[q];
    }
  }
  return out;
}

std::vector<Vec2> basis_grad(int n, Vec2 p) {
  check_point(n, p);
  const double u = 2.0 * p.x + p.y - 1.0;
  const double v = 1.0 - p.y;
  const double s = 2.0 * p.y - 1.0;
  const ScaledLegendre sl = scaled_legendre(n, u, v);
  std::vector<Vec2> out(basis_dimension(n));
  std::vector<double> J, Jd;
  int idx = 0;
  for (int l = 0; l <= n; ++l) {
    for (int pp = 0; pp <= l; ++pp) {
      const int q = l - pp;
      const double a = 2.0 * pp + 1.0;
      jacobi_row(q, a, 0.0, s, J);
      // dP_q/ds via the shifted-parameter identity.
      double dJq = 0.0;
      if (q >= 1) {
        jacobi_row(q - 1, a + 1.0, 1.0, s, Jd);
        dJq = 0.5 * (q + a + 1.0) * Jd[q - 1];
      }
      const double c = std::sqrt(2.0 * a * (pp + q + 1.0));
      // u = 2x+y-1, v = 1-y, s = 2y-1.
      const double dLdx = sl.Du[pp] * 2.0;
      const double dLdy = sl.Du[pp] * 1.0 + sl.Dv[pp] * (-1.0);
      out[idx].x = c * dLdx * J[q];
      out[idx].y = c * (dLdy * J[q] + sl.L[pp] * dJq * 2.0);
      ++idx;
    }
  }
  return out;
}

BasisTable tabulate_basis(int n, const std::vector<Vec2>& points) {
  BasisTable t;
  t.degree = n;
  t.N = basis_dimension(n);
  t.val.resize(points.size() * t.N);
  t.grad.resize(points.size() * t.N);
  for (size_t k = 0; k < points.size(); ++k) {
    const auto v = basis_eval(n, points[k]);
    const auto g = basis_grad(n, points[k]);
    for (int j = 0; j < t.N; ++j) {
      t.val[k * t.N + j] = v[j];
      t.grad[k * t.N + j] = g[j];
    }
  }
  return t;
}

}  // namespace sldg
