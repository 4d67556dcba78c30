// Reproducible studies: h/p/hp convergence against the manufactured
// solution and the adaptive crack experiment with a beta sweep.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sldg/adapt.hpp"
#include "sldg/postproc.hpp"
#include "sldg/solver.hpp"

namespace sldg {

struct RunConfig {
  ModelParams mp;
  DgParams dg;
  PicardParams picard;

  // h sweep
  int degree = 1;
  std::vector<int> levels = {4, 8, 16, 32, 64};

  // p sweep
  int fixed_n = 30;
  std::vector<int> p_degrees = {1, 2, 3, 4};

  // hp ladder: (n, degree) rungs
  std::vector<std::pair<int, int>> hp_rungs = {{5, 1}, {10, 2}, {15, 3}, {20, 4}};

  // crack experiment
  int crack_n = 30;
  int crack_degree = 1;
  double theta = 0.2;
  int depth = 4;
  std::vector<double> crack_betas = {0.0, 0.01, 0.1, 1.0, 10.0, 100.0};

  std::string out_dir = "out";
  bool write_files = true;  // CSV/VTK outputs (timings never enter them)
};

struct LevelStats {
  std::string label;
  int elements = 0;
  int ndof = 0;
  int picard_iterations = 0;
  bool picard_converged = false;
  int linear_iterations = 0;  // summed over Picard steps
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<ConvergenceRecord> records;
  std::vector<LevelStats> stats;
  std::string csv_path;  // empty when write_files is off
};

// Uniform meshes at cfg.levels, fixed cfg.degree; EOC columns filled from
// the second level on.
SweepResult run_converge_h(const RunConfig& cfg);

// Fixed cfg.fixed_n mesh, degrees cfg.p_degrees; no EOC columns.
SweepResult run_converge_p(const RunConfig& cfg);

// Simultaneous rungs cfg.hp_rungs; no EOC columns.
SweepResult run_converge_hp(const RunConfig& cfg);

struct CrackBetaResult {
  double beta = 0.0;
  std::vector<LineSample> samples;  // along y = crack line - 1e-9
  double h_min = 0.0;               // smallest diameter in the final mesh
  double tip_distance = 0.0;        // closest smallest-h element to the tip
  double max_abs_eps23 = 0.0;       // over the sample line
  double max_abs_eps = 0.0;         // max |eps| over the sample line
  std::vector<LevelStats> stats;    // one per adaptive round (round 0 first)
};

struct CrackResult {
  std::vector<CrackBetaResult> runs;
};

// Crack (x in [0.5,1], y = 0.5) under the mixed data u=1 left, u=0 right
// and crack, u=1-x top/bottom: for each beta, solve on the uniform mesh,
// then cfg.depth rounds of indicate/mark/refine/transfer/re-solve.
CrackResult run_crack(const RunConfig& cfg);

// Exact norms of the manufactured solution (its factors are polynomials
// after squaring, so Gauss quadrature gives them to machine precision).
double manufactured_l2_norm();
double manufactured_energy_norm();

// Dirichlet data + source of the manufactured problem (g = exact trace).
BoundaryData manufactured_boundary_data(const ModelParams& mp);

// Crack-problem data: g as above, f = 0.
BoundaryData crack_boundary_data();

}  // namespace sldg
