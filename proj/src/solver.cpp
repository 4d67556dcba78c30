#include "sldg/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sldg {

namespace {

double dot_serial(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

CgResult cg_solve(const CsrMatrix& A, const std::vector<double>& b,
                  const std::vector<double>* x0, double rel_tol, long max_iter,
                  double reduction) {
  const size_t n = static_cast<size_t>(A.n);
  if (b.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
  if (max_iter <= 0) max_iter = 10L * A.n;

  CgResult res;
  const double bnorm = std::sqrt(dot_serial(b, b));
  if (bnorm == 0.0) {
    res.x.assign(n, 0.0);
    res.converged = true;
    return res;
  }

  std::vector<double> diag(n, 1.0);
  for (int r = 0; r < A.n; ++r)
    for (int k = A.rowptr[r]; k < A.rowptr[r + 1]; ++k)
      if (A.col[k] == r && A.val[k] != 0.0) diag[static_cast<size_t>(r)] = A.val[k];

  std::vector<double> x(n, 0.0), r(n), z(n), p(n), q(n);
  if (x0) {
    if (x0->size() != n) throw std::invalid_argument("cg_solve: guess size mismatch");
    x = *x0;
    A.multiply(x, q);
    for (size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  } else {
    r = b;
  }

  double rnorm = std::sqrt(dot_serial(r, r));
  double best = rnorm;
  long best_iter = 0;
  // Stop once the residual is below rel_tol*|b|, or — when a reduction factor
  // is given — once it has dropped by that factor from the entry residual.
  const double stop = std::max(rel_tol * bnorm, reduction * rnorm);
  if (rnorm <= stop) {
    res.x = std::move(x);
    res.rel_residual = rnorm / bnorm;
    res.converged = true;
    return res;
  }

  for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rho = dot_serial(r, z);

  for (long k = 1; k <= max_iter; ++k) {
    A.multiply(p, q);
    const double pq = dot_serial(p, q);
    if (!(pq > 0.0)) break;  // loss of positive definiteness / breakdown
    const double alpha = rho / pq;
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = std::sqrt(dot_serial(r, r));
    res.iterations = static_cast<int>(k);
    if (rnorm <= stop) {
      res.converged = true;
      break;
    }
    if (rnorm < best * (1.0 - 1e-3)) {
      best = rnorm;
      best_iter = k;
    } else if (k - best_iter > std::max(2000L, static_cast<long>(A.n))) {
      break;  // stagnation: no measurable progress over a full window
    }
    for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rho_new = dot_serial(r, z);
    const double beta = rho_new / rho;
    rho = rho_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.x = std::move(x);
  res.rel_residual = rnorm / bnorm;
  return res;
}

std::vector<double> dense_solve(const CsrMatrix& A, const std::vector<double>& b) {
  const int n = A.n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r)
    for (int k = A.rowptr[r]; k < A.rowptr[r + 1]; ++k) M(r, A.col[k]) = A.val[k];
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = b[static_cast<size_t>(i)];
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("dense_solve: factorization failed");
  const Eigen::VectorXd x = ldlt.solve(rhs);
  return std::vector<double>(x.data(), x.data() + n);
}

LinearSolveResult linear_solve_guess(const SparseSystem& sys, double rel_tol,
                                     const std::vector<double>* x0,
                                     double reduction) {
  CgResult cg = cg_solve(sys.A, sys.b, x0, rel_tol, 0, reduction);
  LinearSolveResult out;
  out.cg_iterations = cg.iterations;
  if (cg.converged) {
    out.x = std::move(cg.x);
    return out;
  }
  if (sys.A.n <= 2000) {
    out.x = dense_solve(sys.A, sys.b);
    out.used_dense = true;
    return out;
  }
  throw std::runtime_error(
      "linear_solve: CG did not converge (relative residual " +
      std::to_string(cg.rel_residual) + " after " + std::to_string(cg.iterations) +
      " iterations)");
}

std::vector<double> linear_solve(const SparseSystem& sys, double rel_tol) {
  return linear_solve_guess(sys, rel_tol, nullptr).x;
}

PicardReport picard(std::shared_ptr<const DgSpace> space, const ModelParams& mp,
                    const DgParams& dg, const BoundaryData& bd,
                    const PicardParams& pp, const Solution* initial) {
  if (!(pp.tol > 0.0)) throw std::invalid_argument("picard: tol must be > 0");
  if (pp.max_iter < 1) throw std::invalid_argument("picard: max_iter must be >= 1");
  if (!(pp.relaxation > 0.0 && pp.relaxation <= 1.0))
    throw std::invalid_argument("picard: relaxation must be in (0,1]");
  const DgSpace& sp = *space;

  PicardReport rep;
  Solution u;
  if (initial) {
    if (initial->space->mesh->uid != sp.mesh->uid || initial->space->degree != sp.degree)
      throw std::invalid_argument("picard: initial guess lives on a different space");
    u = *initial;
    u.space = space;
  } else {
    const SparseSystem sys0 = assemble(sp, nullptr, mp, dg, bd);
    u.space = space;
    u.coeff = linear_solve_guess(sys0, pp.linear_rel_tol, nullptr).x;
  }

  // Mid-sweep solves only need to cut the warm-start residual by a fixed
  // factor: driving CG all the way to linear_rel_tol on every frozen system
  // wastes most of its iterations while the fixed-point error is still large.
  // The first sweep stays tight (so a constant-coefficient problem finishes in
  // at most two sweeps at full accuracy), and convergence is only declared
  // from a solve that actually ran at linear_rel_tol: if the loose update
  // lands within tol, the same frozen system is re-solved tight and the test
  // repeated, which rules out false fixed points at large penalty scales where
  // the residual norm is dominated by the penalty rows.
  const double kResidualCut = 1e-2;

  std::vector<double> diff(static_cast<size_t>(sp.total_dofs));
  for (int k = 1; k <= pp.max_iter; ++k) {
    const SparseSystem sys = assemble(sp, &u, mp, dg, bd);
    const bool loose = k > 1;
    LinearSolveResult lin =
        loose ? linear_solve_guess(sys, pp.linear_rel_tol, &u.coeff, kResidualCut)
              : linear_solve_guess(sys, pp.linear_rel_tol, &u.coeff);
    int cg_total = lin.cg_iterations;
    const double w = pp.relaxation;
    Solution unew;
    unew.space = space;
    unew.coeff.resize(static_cast<size_t>(sp.total_dofs));
    auto relax_and_measure = [&](const std::vector<double>& xlin) {
      for (size_t i = 0; i < unew.coeff.size(); ++i)
        unew.coeff[i] = (1.0 - w) * u.coeff[i] + w * xlin[i];
      for (size_t i = 0; i < diff.size(); ++i) diff[i] = unew.coeff[i] - u.coeff[i];
      return discrete_l2(sp, diff) / std::max(discrete_l2(sp, unew.coeff), 1e-30);
    };
    double err = relax_and_measure(lin.x);
    if (err <= pp.tol && loose) {
      LinearSolveResult tight = linear_solve_guess(sys, pp.linear_rel_tol, &lin.x);
      cg_total += tight.cg_iterations;
      err = relax_and_measure(tight.x);
    }
    rep.errs.push_back(err);
    rep.linear_iterations.push_back(cg_total);
    u = std::move(unew);
    if (err <= pp.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.iterations = static_cast<int>(rep.errs.size());
  rep.solution = std::move(u);
  return rep;
}

}  // namespace sldg
