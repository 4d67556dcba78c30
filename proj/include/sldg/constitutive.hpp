// Strain-limiting constitutive relation for anti-plane shear and the
// manufactured solution used by the convergence studies.
//
// The scalar diffusion coefficient is
//   G(s) = 1 / (2 mu (1 + beta^alpha s^alpha)^(1/alpha)),
// the stress of a potential u is T = (du/dy, -du/dx), and the strain is
// eps = G(|T|) T, which satisfies |eps| < 1/(2 mu beta) for beta > 0.
#pragma once

#include "sldg/geometry.hpp"

namespace sldg {

struct ModelParams {
  double alpha = 1.0;  // > 0
  double beta = 1.0;   // >= 0; beta = 0 is the linear model
  double mu = 0.5;     // > 0

  void validate() const;
};

// G(s) for s >= 0.
double coeff_G(double s, const ModelParams& mp);

// dG/ds. For alpha < 1 the derivative is singular at s = 0 and s > 0 is
// required; for alpha = 1 the s -> 0 limit -beta/(2 mu) is returned, and
// for alpha > 1 the limit is 0.
double coeff_G_prime(double s, const ModelParams& mp);

// T = (T13, T23) = (du/dy, -du/dx).
Vec2 stress_from_gradient(Vec2 grad_u);

// eps = G(|T|) T.
Vec2 strain_from_stress(Vec2 T, const ModelParams& mp);

// Manufactured potential u = x^{5/2}(1-x) y^{5/2}(1-y) on [0,1]^2 with
// closed-form gradient and Hessian (hxx, hxy, hyy).
struct ManufacturedPoint {
  double u = 0.0;
  Vec2 grad;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;
};

ManufacturedPoint manufactured_solution(Vec2 p);

// Source f = -div(G(|grad u|) grad u) for the manufactured u, evaluated
// pointwise from the closed-form derivatives:
//   f = -[ G'(s) (grad u . H grad u)/s + G(s) tr H ],  s = |grad u|,
// with the first term dropped when s < 1e-12.
double manufactured_source(Vec2 p, const ModelParams& mp);

}  // namespace sldg
