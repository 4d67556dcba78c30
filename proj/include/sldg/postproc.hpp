// Error measures, convergence tables, line sampling, and CSV/VTK export.
#pragma once

#include <optional>
#include <string>

#include "sldg/assembly.hpp"
#include "sldg/constitutive.hpp"

namespace sldg {

// ||u_h - u||_L2 with an over-integrated volume rule (assembly default +4).
double error_l2(const Solution& u_h, const std::function<double(Vec2)>& exact);

// Broken energy norm of u_h - u: gradient mismatch plus penalty-weighted
// jumps, with boundary/crack jumps measured against g.
double error_energy(const Solution& u_h, const std::function<double(Vec2)>& exact,
                    const std::function<Vec2(Vec2)>& exact_grad, const DgParams& dg,
                    const std::function<double(Vec2, BoundaryTag)>& g);

// eoc[i] = (log e[i+1]-log e[i])/(log h[i+1]-log h[i]); requires positive
// errors and strictly decreasing positive mesh sizes.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

// 100*err/norm, norm > 0.
double relative_percent(double err, double norm);

struct ConvergenceRecord {
  std::string level;  // "8x8" for meshes, "p=2" for degrees, "8x8 p=2" for hp
  int ndof = 0;
  double l2_error = 0.0;
  double energy_error = 0.0;
  std::optional<double> eoc_l2;
  std::optional<double> eoc_energy;
  double rel_l2_percent = 0.0;
  double rel_energy_percent = 0.0;
};

// RFC-4180 CSV with a header row; floats in scientific notation with 13
// significant digits. Byte-deterministic for identical inputs.
void export_csv(const std::vector<ConvergenceRecord>& records, const std::string& path);

struct LineSample {
  Vec2 p;
  double u = 0.0;
  double t13 = 0.0, t23 = 0.0;
  double eps13 = 0.0, eps23 = 0.0;
};

// Samples count points a + k/count*(b-a), k = 0..count-1. Points on the
// crack segment are nudged 1e-9 below it; a point on a shared edge belongs
// to the lowest containing element id.
std::vector<LineSample> sample_line(const Solution& u, const ModelParams& mp,
                                    Vec2 a, Vec2 b, int count);

void export_samples_csv(const std::vector<LineSample>& samples, const std::string& path);

// Legacy-VTK export of the solution with cells subdivided degree^2-fold and
// per-point u, |grad u|, T13, T23, eps13, eps23.
void export_vtk(const Solution& u, const ModelParams& mp, const std::string& path);

}  // namespace sldg
