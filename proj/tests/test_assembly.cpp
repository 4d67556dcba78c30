#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "sldg/assembly.hpp"
#include "sldg/solver.hpp"

using namespace sldg;

namespace {

std::shared_ptr<const DgSpace> space_on(int n, int degree) {
  auto m = std::make_shared<const Mesh>(build_uniform(n));
  return make_space(m, degree);
}

BoundaryData zero_data() {
  BoundaryData bd;
  bd.g = [](Vec2, BoundaryTag) { return 0.0; };
  bd.f = [](Vec2) { return 0.0; };
  return bd;
}

std::vector<double> dense_of(const CsrMatrix& A) {
  std::vector<double> M(static_cast<size_t>(A.n) * A.n, 0.0);
  for (int r = 0; r < A.n; ++r)
    for (int k = A.rowptr[r]; k < A.rowptr[r + 1]; ++k)
      M[static_cast<size_t>(r) * A.n + A.col[k]] = A.val[k];
  return M;
}

Solution random_discrete(std::shared_ptr<const DgSpace> sp, std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Solution v = make_zero(sp);
  for (double& c : v.coeff) c = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("penalty weight: sigma * n_f^2 / |e|^gamma") {
  auto sp = space_on(4, 1);
  DgParams dg;
  dg.sigma = 10.0;
  dg.gamma = 1.0;
  for (const Face& f : sp->mesh->faces) {
    const double pw = penalty_weight(f, *sp, dg);
    // Uniform degree 1: n_f = 1 on every face kind.
    CHECK(pw == doctest::Approx(10.0 / f.len).epsilon(1e-14));
    if (f.kind == FaceKind::boundary)
      CHECK(pw == doctest::Approx(40.0).epsilon(1e-14));  // |e| = 1/4
  }
}

TEST_CASE("penalty weight uses the mean of mixed degrees") {
  auto m = std::make_shared<const Mesh>(build_uniform(4));
  std::vector<int> degrees(static_cast<size_t>(m->n_elements()), 1);
  degrees[5] = 2;
  auto sp = make_space(m, degrees);
  DgParams dg;  // sigma = 100, gamma = 1
  for (const Face& f : sp->mesh->faces) {
    if (f.kind != FaceKind::interior) continue;
    const int dp = sp->degree[static_cast<size_t>(f.plus)];
    const int dm = sp->degree[static_cast<size_t>(f.minus)];
    const double nf = 0.5 * (dp + dm);
    CHECK(penalty_weight(f, *sp, dg) == doctest::Approx(100.0 * nf * nf / f.len).epsilon(1e-14));
  }
}

TEST_CASE("assembled matrix is symmetric") {
  auto sp = space_on(4, 2);
  const ModelParams mp{1.0, 1.0, 0.5};
  DgParams dg;
  std::mt19937 rng(11);
  const Solution frozen = random_discrete(sp, rng, 0.5);
  BoundaryData bd = zero_data();
  bd.g = [](Vec2 p, BoundaryTag) { return p.x + 0.2 * p.y; };
  const SparseSystem sys = assemble(*sp, &frozen, mp, dg, bd);

  const std::vector<double> M = dense_of(sys.A);
  const int n = sys.A.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      worst = std::max(worst,
                       std::abs(M[static_cast<size_t>(i) * n + j] - M[static_cast<size_t>(j) * n + i]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("assembled matrix is positive definite in practice") {
  auto sp = space_on(3, 2);
  const SparseSystem sys = assemble(*sp, nullptr, {1.0, 1.0, 0.5}, {}, zero_data());
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(static_cast<size_t>(sys.A.n)), y(x.size());
  for (int trial = 0; trial < 100; ++trial) {
    for (double& v : x) v = dist(rng);
    sys.A.multiply(x, y);
    double xAx = 0.0;
    for (size_t i = 0; i < x.size(); ++i) xAx += x[i] * y[i];
    CHECK(xAx > 0.0);
  }
}

TEST_CASE("constant boundary data reproduces the constant exactly") {
  for (bool flux : {true, false}) {
    auto sp = space_on(4, 1);
    DgParams dg;
    dg.boundary_flux = flux;
    BoundaryData bd = zero_data();
    bd.g = [](Vec2, BoundaryTag) { return 0.7; };
    const SparseSystem sys = assemble(*sp, nullptr, {1.0, 1.0, 0.5}, dg, bd);
    const std::vector<double> x = dense_solve(sys.A, sys.b);
    Solution u{sp, x};
    for (int e : {0, 7, 19, 31}) {
      const EvalResult ev = eval(u, e, {0.3, 0.3});
      CHECK(ev.value == doctest::Approx(0.7).epsilon(1e-10));
      CHECK(std::abs(ev.grad.x) <= 1e-9);
      CHECK(std::abs(ev.grad.y) <= 1e-9);
    }
  }
}

TEST_CASE("globally continuous functions have zero jump energy") {
  auto sp = space_on(4, 2);
  auto f = [](Vec2 p) { return 1.0 + 2.0 * p.x - 3.0 * p.y + p.x * p.y; };
  const Solution u = project(sp, f);
  DgParams dg;
  const double en = energy_norm(u, dg, [&](Vec2 p, BoundaryTag) { return f(p); });
  // int |grad f|^2 = int (2+y)^2 + (x-3)^2 over the unit square = 38/3.
  const double grad_sq = 38.0 / 3.0;
  CHECK(en * en == doctest::Approx(grad_sq).epsilon(1e-12));
}

TEST_CASE("energy norm of zero against unit data is the penalty mass") {
  auto sp = space_on(4, 1);
  const Solution z = make_zero(sp);
  DgParams dg;  // sigma = 100, gamma = 1
  // 16 boundary faces, pw = 100/(1/4) = 400, each contributes pw*len = 100.
  const double en = energy_norm(z, dg, [](Vec2, BoundaryTag) { return 1.0; });
  CHECK(en == doctest::Approx(40.0).epsilon(1e-13));
}

TEST_CASE("frozen-coefficient form is monotone") {
  auto sp = space_on(3, 1);
  const ModelParams mp{1.0, 1.0, 0.5};
  DgParams dg;
  const BoundaryData bd = zero_data();
  std::mt19937 rng(37);
  double min_pairing = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const Solution v = random_discrete(sp, rng, 0.4);
    const Solution w = random_discrete(sp, rng, 0.4);
    const SparseSystem Av = assemble(*sp, &v, mp, dg, bd);
    const SparseSystem Aw = assemble(*sp, &w, mp, dg, bd);
    std::vector<double> Tv(v.coeff.size()), Tw(w.coeff.size());
    Av.A.multiply(v.coeff, Tv);
    Aw.A.multiply(w.coeff, Tw);
    double pairing = 0.0;
    for (size_t i = 0; i < Tv.size(); ++i)
      pairing += (Tv[i] - Tw[i]) * (v.coeff[i] - w.coeff[i]);
    min_pairing = std::min(min_pairing, pairing);
  }
  CHECK(min_pairing >= 0.0);
}

TEST_CASE("parallel and serial assembly agree bitwise") {
  auto sp = space_on(6, 2);
  const ModelParams mp{2.0, 2.0, 1.0};
  DgParams dg;
  std::mt19937 rng(5);
  const Solution frozen = random_discrete(sp, rng, 0.3);
  BoundaryData bd;
  bd.g = [](Vec2 p, BoundaryTag) { return p.x * p.x - p.y; };
  bd.f = [](Vec2 p) { return std::sin(3.0 * p.x) + p.y; };

  const SparseSystem a = assemble(*sp, &frozen, mp, dg, bd);
  const SparseSystem b = assemble_serial(*sp, &frozen, mp, dg, bd);
  REQUIRE(a.A.rowptr == b.A.rowptr);
  REQUIRE(a.A.col == b.A.col);
  REQUIRE(a.A.val == b.A.val);
  REQUIRE(a.b == b.b);
}

TEST_CASE("assembly is identical on renumbered meshes up to dof permutation") {
  // The same two-triangle square built with swapped cell order.
  const std::vector<Vec2> verts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto m1 = std::make_shared<const Mesh>(from_cells(verts, {{0, 1, 2}, {0, 2, 3}}));
  auto m2 = std::make_shared<const Mesh>(from_cells(verts, {{0, 2, 3}, {0, 1, 2}}));
  auto s1 = make_space(m1, 1);
  auto s2 = make_space(m2, 1);
  BoundaryData bd;
  bd.g = [](Vec2 p, BoundaryTag) { return p.x - p.y; };
  bd.f = [](Vec2 p) { return p.x; };
  const SparseSystem sys1 = assemble(*s1, nullptr, {1.0, 0.0, 0.5}, {}, bd);
  const SparseSystem sys2 = assemble(*s2, nullptr, {1.0, 0.0, 0.5}, {}, bd);
  const std::vector<double> x1 = dense_solve(sys1.A, sys1.b);
  const std::vector<double> x2 = dense_solve(sys2.A, sys2.b);

  // Element 0 of mesh 1 is element 1 of mesh 2; compare as functions.
  Solution u1{s1, x1}, u2{s2, x2};
  for (Vec2 r : {Vec2{0.25, 0.25}, Vec2{0.5, 0.1}}) {
    CHECK(eval(u1, 0, r).value == doctest::Approx(eval(u2, 1, r).value).epsilon(1e-12));
    CHECK(eval(u1, 1, r).value == doctest::Approx(eval(u2, 0, r).value).epsilon(1e-12));
  }
}
