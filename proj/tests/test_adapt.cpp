#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sldg/adapt.hpp"

using namespace sldg;

TEST_CASE("mark takes the ceil(theta N) largest, ties to the lower id") {
  CHECK(mark({3.0, 1.0, 2.0, 5.0}, 0.5) == std::vector<int>{0, 3});
  CHECK(mark({2.0, 5.0, 2.0, 1.0}, 0.5) == std::vector<int>{0, 1});
  CHECK(mark({1.0, 2.0, 3.0}, 0.0) == std::vector<int>{});
  CHECK(mark({1.0, 2.0, 3.0}, 1.0) == std::vector<int>{0, 1, 2});
  CHECK(mark({4.0, 4.0, 4.0, 4.0, 4.0}, 0.21) == std::vector<int>{0, 1});  // ceil(1.05) = 2
  CHECK_THROWS_AS(mark({1.0}, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mark({1.0}, 1.1), std::invalid_argument);
}

TEST_CASE("indicator of a linear field is the element diameter") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(4));
  auto sp = make_space(mesh, 1);
  const Solution u = project(sp, [](Vec2 p) { return p.x; });
  const std::vector<double> eta = indicator(u);
  REQUIRE(static_cast<int>(eta.size()) == mesh->n_elements());
  for (int e = 0; e < mesh->n_elements(); ++e)
    CHECK(eta[static_cast<size_t>(e)] ==
          doctest::Approx(mesh->elements[static_cast<size_t>(e)].h).epsilon(1e-12));
}

TEST_CASE("indicator concentrates where the gradient is large") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(8));
  auto sp = make_space(mesh, 2);
  // Steep bump near (0.25, 0.25), nearly flat elsewhere.
  const Solution u = project(sp, [](Vec2 p) {
    const double r2 = (p.x - 0.25) * (p.x - 0.25) + (p.y - 0.25) * (p.y - 0.25);
    return std::exp(-40.0 * r2);
  });
  const std::vector<double> eta = indicator(u);
  const std::vector<int> marked = mark(eta, 0.1);
  for (int e : marked) {
    const Vec2 c = mesh->centroid(e);
    CHECK(std::hypot(c.x - 0.25, c.y - 0.25) < 0.35);
  }
}

TEST_CASE("transfer is exact for piecewise polynomials") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(2));
  auto sp = make_space(mesh, 2);
  auto f = [](Vec2 p) { return 0.3 - p.x + 2.0 * p.y + p.x * p.x - 0.5 * p.x * p.y; };
  const Solution u = project(sp, f);

  auto fine_mesh = std::make_shared<const Mesh>(refine(*mesh, {0, 3}));
  auto fine_sp = make_space(fine_mesh, 2);
  const Solution v = transfer(u, fine_sp);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.05, 0.4);
  for (int e = 0; e < fine_mesh->n_elements(); ++e) {
    for (int trial = 0; trial < 3; ++trial) {
      const Vec2 r{dist(rng), dist(rng)};
      const Vec2 phys = fine_mesh->map(e).to_physical(r);
      CHECK(eval(v, e, r).value == doctest::Approx(f(phys)).epsilon(1e-12));
    }
  }
}

TEST_CASE("transfer copies carried-over elements bitwise") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(4));
  auto sp = make_space(mesh, 3);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Solution u = make_zero(sp);
  for (double& c : u.coeff) c = dist(rng);

  auto fine_mesh = std::make_shared<const Mesh>(refine(*mesh, {5}));
  auto fine_sp = make_space(fine_mesh, 3);
  const Solution v = transfer(u, fine_sp);

  for (int e = 0; e < fine_mesh->n_elements(); ++e) {
    const Element& el = fine_mesh->elements[static_cast<size_t>(e)];
    if (el.child_index != -1) continue;  // freshly split
    const int src = el.parent;
    for (int k = 0; k < fine_sp->dim(e); ++k)
      CHECK(v.coeff[static_cast<size_t>(fine_sp->offset[static_cast<size_t>(e)] + k)] ==
            u.coeff[static_cast<size_t>(sp->offset[static_cast<size_t>(src)] + k)]);
  }
}

TEST_CASE("transfer rejects unrelated meshes") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(2));
  auto sp = make_space(mesh, 1);
  const Solution u = make_zero(sp);
  auto stranger = make_space(std::make_shared<const Mesh>(build_uniform(4)), 1);
  CHECK_THROWS_AS(transfer(u, stranger), std::invalid_argument);
}
