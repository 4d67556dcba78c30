#include "sldg/constitutive.hpp"

#include <cmath>
#include <stdexcept>

namespace sldg {

void ModelParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("ModelParams: beta must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("ModelParams: mu must be > 0");
}

double coeff_G(double s, const ModelParams& mp) {
  if (s < 0.0) throw std::invalid_argument("coeff_G: s must be >= 0");
  if (mp.beta == 0.0) return 1.0 / (2.0 * mp.mu);
  const double bs = std::pow(mp.beta * s, mp.alpha);
  return 1.0 / (2.0 * mp.mu * std::pow(1.0 + bs, 1.0 / mp.alpha));
}

double coeff_G_prime(double s, const ModelParams& mp) {
  if (s < 0.0) throw std::invalid_argument("coeff_G_prime: s must be >= 0");
  if (mp.beta == 0.0) return 0.0;
  if (s == 0.0) {
    if (mp.alpha < 1.0)
      throw std::invalid_argument("coeff_G_prime: singular at s = 0 for alpha < 1");
    if (mp.alpha == 1.0) return -mp.beta / (2.0 * mp.mu);
    return 0.0;
  }
  const double ba = std::pow(mp.beta, mp.alpha);
  const double bs = ba * std::pow(s, mp.alpha);
  return -ba * std::pow(s, mp.alpha - 1.0) *
         std::pow(1.0 + bs, -(1.0 + mp.alpha) / mp.alpha) / (2.0 * mp.mu);
}

Vec2 stress_from_gradient(Vec2 g) { return {g.y, -g.x}; }

Vec2 strain_from_stress(Vec2 T, const ModelParams& mp) {
  return coeff_G(norm(T), mp) * T;
}

namespace {
// One-dimensional factor w(t) = t^{5/2}(1-t) and derivatives.
inline void factor(double t, double& w, double& dw, double& ddw) {
  const double t12 = std::sqrt(t);
  const double t32 = t * t12;
  const double t52 = t * t32;
  w = t52 * (1.0 - t);
  dw = 2.5 * t32 - 3.5 * t52;
  ddw = 3.75 * t12 - 8.75 * t32;
}
}  // namespace

ManufacturedPoint manufactured_solution(Vec2 p) {
  if (p.x < 0.0 || p.y < 0.0)
    throw std::invalid_argument("manufactured_solution: point outside [0,1]^2");
  double wx, dwx, ddwx, wy, dwy, ddwy;
  factor(p.x, wx, dwx, ddwx);
  factor(p.y, wy, dwy, ddwy);
  ManufacturedPoint r;
  r.u = wx * wy;
  r.grad = {dwx * wy, wx * dwy};
  r.hxx = ddwx * wy;
  r.hxy = dwx * dwy;
  r.hyy = wx * ddwy;
  return r;
}

double manufactured_source(Vec2 p, const ModelParams& mp) {
  const ManufacturedPoint m = manufactured_solution(p);
  const double s = norm(m.grad);
  const double trH = m.hxx + m.hyy;
  double f = -coeff_G(s, mp) * trH;
  if (s >= 1e-12) {
    // grad u . H grad u
    const double q = m.grad.x * (m.hxx * m.grad.x + m.hxy * m.grad.y) +
                     m.grad.y * (m.hxy * m.grad.x + m.hyy * m.grad.y);
    f -= coeff_G_prime(s, mp) * q / s;
  }
  return f;
}

}  // namespace sldg
