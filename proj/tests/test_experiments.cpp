#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sldg/experiments.hpp"

using namespace sldg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig tiny_config(const std::string& out_dir) {
  RunConfig cfg;
  cfg.mp = {1.0, 1.0, 0.5};
  cfg.levels = {4, 8};
  cfg.degree = 1;
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("boundary data of the two problems") {
  const ModelParams mp{1.0, 1.0, 0.5};
  const BoundaryData man = manufactured_boundary_data(mp);
  CHECK(man.g({0.3, 0.0}, BoundaryTag::bottom) ==
        doctest::Approx(manufactured_solution({0.3, 0.0}).u).epsilon(1e-15));
  CHECK(man.f({0.4, 0.6}) == doctest::Approx(manufactured_source({0.4, 0.6}, mp)).epsilon(1e-15));

  const BoundaryData crack = crack_boundary_data();
  CHECK(crack.g({0.0, 0.3}, BoundaryTag::left) == 1.0);
  CHECK(crack.g({1.0, 0.8}, BoundaryTag::right) == 0.0);
  CHECK(crack.g({0.25, 0.0}, BoundaryTag::bottom) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(crack.g({0.25, 1.0}, BoundaryTag::top) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(crack.g({0.7, 0.5}, BoundaryTag::crack) == 0.0);
  CHECK(crack.f({0.5, 0.5}) == 0.0);
}

TEST_CASE("h sweep: errors drop, EOC columns recompute from the table") {
  namespace fs = std::filesystem;
  const RunConfig cfg = tiny_config("test_out_h");
  const SweepResult res = run_converge_h(cfg);
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].ndof == 96);
  CHECK(res.records[1].ndof == 384);
  CHECK(res.records[1].l2_error < res.records[0].l2_error);
  CHECK(res.records[1].energy_error < res.records[0].energy_error);
  CHECK_FALSE(res.records[0].eoc_l2.has_value());
  REQUIRE(res.records[1].eoc_l2.has_value());

  // The stored EOC must equal what eoc() computes from the error column.
  const std::vector<double> hs = {std::sqrt(2.0) / 4, std::sqrt(2.0) / 8};
  const std::vector<double> r =
      eoc({res.records[0].l2_error, res.records[1].l2_error}, hs);
  CHECK(res.records[1].eoc_l2.value() == r[0]);

  for (const LevelStats& st : res.stats) CHECK(st.picard_converged);
  CHECK(fs::exists(res.csv_path));

  // Re-running the same configuration reproduces the CSV byte for byte.
  const std::string first = slurp(res.csv_path);
  const SweepResult res2 = run_converge_h(cfg);
  CHECK(first == slurp(res2.csv_path));
  fs::remove_all("test_out_h");
}

TEST_CASE("p sweep over a fixed mesh") {
  RunConfig cfg = tiny_config("test_out_p");
  cfg.fixed_n = 4;
  cfg.p_degrees = {1, 2};
  const SweepResult res = run_converge_p(cfg);
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].level == "p=1");
  CHECK(res.records[1].l2_error < res.records[0].l2_error);
  CHECK_FALSE(res.records[1].eoc_l2.has_value());
  std::filesystem::remove_all("test_out_p");
}

TEST_CASE("hp ladder walks its rungs") {
  RunConfig cfg = tiny_config("test_out_hp");
  cfg.hp_rungs = {{2, 1}, {4, 2}};
  const SweepResult res = run_converge_hp(cfg);
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[1].l2_error < res.records[0].l2_error);
  CHECK(res.records[1].rel_l2_percent < res.records[0].rel_l2_percent);
  std::filesystem::remove_all("test_out_hp");
}

TEST_CASE("crack run: linear sweeps stay short, outputs are in range") {
  RunConfig cfg;
  cfg.mp = {2.0, 2.0, 1.0};
  cfg.dg.sigma = 1e4;
  cfg.crack_n = 8;
  cfg.crack_degree = 1;
  cfg.depth = 1;
  cfg.theta = 0.2;
  cfg.crack_betas = {0.0};
  cfg.write_files = false;
  const CrackResult res = run_crack(cfg);
  REQUIRE(res.runs.size() == 1);
  const CrackBetaResult& run = res.runs[0];
  REQUIRE(run.stats.size() == 2);  // round 0 + one refinement
  for (const LevelStats& st : run.stats) {
    CHECK(st.picard_converged);
    CHECK(st.picard_iterations <= 2);  // beta = 0 is linear
  }
  CHECK(run.samples.size() == 100);
  CHECK(run.h_min > 0.0);
  CHECK(run.h_min < std::sqrt(2.0) / 8);  // something was refined
  CHECK(run.max_abs_eps23 > 0.0);
  // Samples stay strictly left of the tip, just below the crack line.
  for (const LineSample& s : run.samples) {
    CHECK(s.p.x < 0.5);
    CHECK(s.p.y < 0.5);
  }
}
