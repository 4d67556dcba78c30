// Linear and nonlinear solvers. The linear path is Jacobi-preconditioned
// conjugate gradients with a dense factorization fallback for small or
// stagnating systems; the nonlinear path is a Picard (frozen-coefficient)
// iteration, warm-started from the previous iterate.
#pragma once

#include <memory>
#include <vector>

#include "sldg/assembly.hpp"

namespace sldg {

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// max_iter <= 0 selects the default 10*n. A positive reduction factor adds a
// second stopping test: the residual has dropped by that factor from its
// entry value (useful for inexact outer iterations with warm starts).
// Deterministic for any OpenMP thread count: the matrix-vector product is
// row-parallel and the dot products are serial.
CgResult cg_solve(const CsrMatrix& A, const std::vector<double>& b,
                  const std::vector<double>* x0 = nullptr, double rel_tol = 1e-12,
                  long max_iter = 0, double reduction = 0.0);

// Dense LDLT solve of the same system (Eigen); used as the fallback and by
// test oracles.
std::vector<double> dense_solve(const CsrMatrix& A, const std::vector<double>& b);

struct LinearSolveResult {
  std::vector<double> x;
  int cg_iterations = 0;
  bool used_dense = false;
};

// CG first; if it stagnates or runs out of iterations, dense fallback for
// dimension <= 2000, otherwise an error carrying the residual.
LinearSolveResult linear_solve_guess(const SparseSystem& sys, double rel_tol,
                                     const std::vector<double>* x0,
                                     double reduction = 0.0);
std::vector<double> linear_solve(const SparseSystem& sys, double rel_tol = 1e-12);

struct PicardParams {
  double tol = 1e-10;          // relative L2 increment tolerance
  int max_iter = 100;
  double relaxation = 1.0;     // in (0,1]
  double linear_rel_tol = 1e-12;
};

struct PicardReport {
  Solution solution;
  int iterations = 0;              // linear solves after the initial guess
  std::vector<double> errs;        // per-iteration relative increments
  std::vector<int> linear_iterations;
  bool converged = false;
};

// Frozen-coefficient iteration: u^{k+1} solves the linear system assembled
// with G evaluated at u^k. The initial guess is `initial` if given, else
// the constant-coefficient (G(0)) solve. err_k = ||u^{k+1}-u^k|| /
// max(||u^{k+1}||, 1e-30) in the discrete L2 norm.
PicardReport picard(std::shared_ptr<const DgSpace> space, const ModelParams& mp,
                    const DgParams& dg, const BoundaryData& bd,
                    const PicardParams& pp = {}, const Solution* initial = nullptr);

}  // namespace sldg
