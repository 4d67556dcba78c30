// SIPG assembly of the quasi-linear model with frozen coefficients:
//
//   A(u,v) = sum_T int G grad u . grad v
//          - sum_{interior e} int {G grad u . n}[v] + {G grad v . n}[u]
//          + sum_{all e} int pw [u][v],
//   L(v)   = sum_T int f v + sum_{boundary+crack e} int pw g v,
//
// where G is evaluated from the frozen iterate's gradient (or G(0) when no
// iterate is given), [.] is the plus-minus jump (the trace on boundary and
// crack faces), and pw = sigma n_f^2 / |e|^gamma with n_f the arithmetic
// mean of the neighbor degrees (the plus degree on boundary/crack faces).
// Dirichlet data enters through the penalty together with the Nitsche-type
// consistency terms on boundary/crack faces; the latter can be switched off
// (boundary_flux = false), which keeps the scheme stable but limits the
// observable convergence order to ~2 whenever the exact normal flux is
// nonzero on the boundary.
#pragma once

#include <functional>
#include <vector>

#include "sldg/constitutive.hpp"
#include "sldg/space.hpp"

namespace sldg {

struct DgParams {
  double sigma = 100.0;      // penalty scale, > 0
  double gamma = 1.0;        // edge-length exponent
  int volume_exactness = -1; // volume rule degree; default 2*max_degree + 3
  int edge_points = -1;      // face rule points; default max_degree + 2
  bool boundary_flux = true;
};

struct BoundaryData {
  std::function<double(Vec2, BoundaryTag)> g;  // Dirichlet data per face tag
  std::function<double(Vec2)> f;               // volume source
};

struct CsrMatrix {
  int n = 0;
  std::vector<int> rowptr;
  std::vector<int> col;
  std::vector<double> val;

  // y = A x (row-parallel, deterministic for any thread count).
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

struct SparseSystem {
  CsrMatrix A;
  std::vector<double> b;
};

double penalty_weight(const Face& f, const DgSpace& sp, const DgParams& dg);

// Two-phase assembly: element/face local blocks in parallel, then a serial
// scatter in fixed id order, so results are identical for any thread count.
SparseSystem assemble(const DgSpace& sp, const Solution* frozen,
                      const ModelParams& mp, const DgParams& dg,
                      const BoundaryData& bd);

// Straightforward single-pass reference used by tests and the benchmark.
SparseSystem assemble_serial(const DgSpace& sp, const Solution* frozen,
                             const ModelParams& mp, const DgParams& dg,
                             const BoundaryData& bd);

// Broken energy norm
//   ||v||_E^2 = sum_T int |grad v|^2 + sum_{all e} int pw [v]^2,
// with boundary/crack jumps measured against g when given (e.g. for errors)
// and as plain traces otherwise.
double energy_norm(const Solution& v, const DgParams& dg,
                   const std::function<double(Vec2, BoundaryTag)>& g = nullptr);

// Shared kernel behind energy_norm and error_energy: caller supplies the
// broken gradient, the interior trace, and the boundary jump value.
struct BrokenFunction {
  std::function<Vec2(int e, Vec2 ref, Vec2 phys)> grad;
  std::function<double(int e, Vec2 ref, Vec2 phys)> trace;
  std::function<double(int e, Vec2 ref, Vec2 phys, BoundaryTag tag)> boundary_jump;
};

double energy_norm_generic(const DgSpace& sp, const DgParams& dg,
                           const BrokenFunction& v, int extra_exactness);

}  // namespace sldg
