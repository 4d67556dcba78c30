#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "sldg/space.hpp"

using namespace sldg;

namespace {

std::shared_ptr<const Mesh> mesh4() {
  return std::make_shared<const Mesh>(build_uniform(4));
}

}  // namespace

TEST_CASE("dof layout for uniform degrees") {
  auto m = mesh4();
  const auto s1 = make_space(m, 1);
  CHECK(s1->total_dofs == 96);
  CHECK(s1->max_degree == 1);
  const auto s2 = make_space(m, 2);
  CHECK(s2->total_dofs == 192);
  for (int e = 0; e < m->n_elements(); ++e) {
    CHECK(s2->dim(e) == 6);
    CHECK(s2->offset[static_cast<size_t>(e)] == 6 * e);
  }
}

TEST_CASE("degree validation") {
  auto m = mesh4();
  CHECK_THROWS_AS(make_space(m, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_space(m, 11), std::invalid_argument);
  CHECK_NOTHROW(make_space(m, 10));

  std::vector<int> degrees(static_cast<size_t>(m->n_elements()), 1);
  degrees[0] = 3;  // ratio 3 across element 0's interior faces
  CHECK_THROWS_AS(make_space(m, degrees), std::invalid_argument);
  degrees[0] = 2;
  CHECK_NOTHROW(make_space(m, degrees));
}

TEST_CASE("projection reproduces polynomials of the space degree") {
  auto m = mesh4();
  const auto s2 = make_space(m, 2);
  auto f = [](Vec2 p) { return 2.0 + 3.0 * p.x - p.y + 0.5 * p.x * p.y - p.y * p.y; };
  const Solution u = project(s2, f);

  for (int e = 0; e < m->n_elements(); ++e) {
    for (Vec2 r : {Vec2{0.2, 0.2}, Vec2{0.6, 0.1}, Vec2{1.0 / 3, 1.0 / 3}}) {
      const EvalResult ev = eval(u, e, r);
      const Vec2 phys = m->map(e).to_physical(r);
      CHECK(ev.value == doctest::Approx(f(phys)).epsilon(1e-13));
    }
  }
}

TEST_CASE("evaluated gradients are physical") {
  auto m = mesh4();
  const auto s1 = make_space(m, 1);
  const Solution u = project(s1, [](Vec2 p) { return 3.0 * p.x - p.y; });
  const EvalResult ev = eval(u, 5, {0.25, 0.25});
  CHECK(ev.grad.x == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(ev.grad.y == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("discrete_l2 equals the integral L2 norm") {
  auto m = mesh4();
  const auto s1 = make_space(m, 1);
  const Solution c = project(s1, [](Vec2) { return -0.7; });
  CHECK(discrete_l2(*s1, c.coeff) == doctest::Approx(0.7).epsilon(1e-14));

  // |x|_L2([0,1]^2) = 1/sqrt(3).
  const Solution x = project(s1, [](Vec2 p) { return p.x; });
  CHECK(discrete_l2(*s1, x.coeff) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("make_zero") {
  auto m = mesh4();
  const auto s1 = make_space(m, 1);
  const Solution z = make_zero(s1);
  CHECK(z.coeff.size() == 96);
  CHECK(discrete_l2(*s1, z.coeff) == 0.0);
}
