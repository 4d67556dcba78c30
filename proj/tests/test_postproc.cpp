#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "sldg/experiments.hpp"
#include "sldg/postproc.hpp"

using namespace sldg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("eoc of a hand-checked error pair") {
  const double h0 = std::sqrt(2.0) / 4, h1 = std::sqrt(2.0) / 8;
  const std::vector<double> r = eoc({2.3746e-02, 4.9324e-03}, {h0, h1});
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(2.2673).epsilon(2e-4));
}

TEST_CASE("eoc validates its input") {
  CHECK_THROWS_AS(eoc({1.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(eoc({1.0, 0.0}, {0.5, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {0.25, 0.5}), std::invalid_argument);
}

TEST_CASE("relative percent") {
  CHECK(relative_percent(0.5, 2.0) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK_THROWS_AS(relative_percent(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("manufactured norms are the closed-form values") {
  // u = X(x) X(y) with X = t^{5/2}(1-t): int X^2 = 1/168 and int X'^2 = 5/48,
  // so ||u||^2 = (1/168)^2 and ||grad u||^2 = 2*(5/48)*(1/168) = 5/4032.
  CHECK(manufactured_l2_norm() == doctest::Approx(1.0 / 168.0).epsilon(1e-14));
  CHECK(manufactured_energy_norm() == doctest::Approx(std::sqrt(5.0 / 4032.0)).epsilon(1e-14));
}

TEST_CASE("error_l2 of the zero solution is the exact solution norm") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(8));
  auto sp = make_space(mesh, 2);
  const Solution z = make_zero(sp);
  const double err = error_l2(z, [](Vec2 p) { return manufactured_solution(p).u; });
  CHECK(err == doctest::Approx(manufactured_l2_norm()).epsilon(1e-8));
}

TEST_CASE("projection error is far below the zero-solution error") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(8));
  auto sp = make_space(mesh, 2);
  auto exact = [](Vec2 p) { return manufactured_solution(p).u; };
  const Solution pu = project(sp, exact);
  // The 5/2-power edge behavior limits the P2 rate near x=0 and y=0; the
  // measured ratio on this mesh is ~2e-3.
  CHECK(error_l2(pu, exact) < 1e-2 * error_l2(make_zero(sp), exact));
}

TEST_CASE("sample_line walks the segment and reads stresses") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(4));
  auto sp = make_space(mesh, 1);
  const Solution u = project(sp, [](Vec2 p) { return p.x + p.y; });
  const ModelParams mp{1.0, 0.0, 0.5};
  const auto samples = sample_line(u, mp, {0.0, 0.3}, {1.0, 0.3}, 10);
  REQUIRE(samples.size() == 10);
  for (int k = 0; k < 10; ++k) {
    const LineSample& s = samples[static_cast<size_t>(k)];
    CHECK(s.p.x == doctest::Approx(k / 10.0).epsilon(1e-14));
    CHECK(s.p.y == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(s.u == doctest::Approx(s.p.x + 0.3).epsilon(1e-12));
    CHECK(s.t13 == doctest::Approx(1.0).epsilon(1e-12));   // du/dy
    CHECK(s.t23 == doctest::Approx(-1.0).epsilon(1e-12));  // -du/dx
  }
}

TEST_CASE("csv export is byte-deterministic with the documented header") {
  std::vector<ConvergenceRecord> recs(2);
  recs[0].level = "4x4";
  recs[0].ndof = 96;
  recs[0].l2_error = 2.3746e-02;
  recs[0].energy_error = 1.1e-01;
  recs[0].rel_l2_percent = 1.5;
  recs[0].rel_energy_percent = 2.5;
  recs[1] = recs[0];
  recs[1].level = "8x8";
  recs[1].ndof = 384;
  recs[1].eoc_l2 = 2.2673;
  recs[1].eoc_energy = 1.01;

  export_csv(recs, "postproc_a.csv");
  export_csv(recs, "postproc_b.csv");
  const std::string a = slurp("postproc_a.csv");
  CHECK(a == slurp("postproc_b.csv"));
  CHECK(a.find("level,ndof,l2_error,energy_error,eoc_l2,eoc_energy,"
                "rel_l2_percent,rel_energy_percent\r\n") == 0);
  CHECK(a.find("\r\n4x4,") != std::string::npos);
  // The first data row has empty EOC fields.
  CHECK(a.find(",,") != std::string::npos);
  std::remove("postproc_a.csv");
  std::remove("postproc_b.csv");
}

TEST_CASE("vtk export writes a legacy unstructured grid") {
  auto mesh = std::make_shared<const Mesh>(build_uniform(2));
  auto sp = make_space(mesh, 2);
  const Solution u = project(sp, [](Vec2 p) { return p.x * p.y; });
  export_vtk(u, {1.0, 1.0, 0.5}, "postproc_field.vtk");
  const std::string text = slurp("postproc_field.vtk");
  CHECK(text.rfind("# vtk DataFile", 0) == 0);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  // degree 2 -> each element splits into 4 lattice triangles.
  CHECK(text.find("CELLS 32 ") != std::string::npos);
  CHECK(text.find("POINT_DATA") != std::string::npos);
  CHECK(text.find("T23") != std::string::npos);
  std::remove("postproc_field.vtk");
}
