// Benchmark: OpenMP two-phase assembly vs the serial reference, plus the
// parallel error-norm kernels, with an equivalence check on the results.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>

#include "sldg/experiments.hpp"

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 24, degree = 2, reps = 3;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) degree = std::atoi(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);
  if (n < 1 || degree < 1 || reps < 1) {
    std::fprintf(stderr, "usage: %s [n=24] [degree=2] [reps=3]\n", argv[0]);
    return 2;
  }

  const sldg::ModelParams mp{2.0, 2.0, 1.0};
  const sldg::DgParams dg;
  const sldg::BoundaryData bd = sldg::manufactured_boundary_data(mp);

  auto mesh = std::make_shared<const sldg::Mesh>(sldg::build_uniform(n));
  auto space = sldg::make_space(mesh, degree);
  const sldg::Solution frozen =
      sldg::project(space, [](sldg::Vec2 p) { return sldg::manufactured_solution(p).u; });

  std::printf("mesh %dx%d, degree %d, %d elements, %d dofs, %d threads\n", n, n, degree,
              mesh->n_elements(), space->total_dofs, omp_get_max_threads());

  sldg::SparseSystem sys_par, sys_ser;
  const double t_par = best_of(reps, [&] { sys_par = sldg::assemble(*space, &frozen, mp, dg, bd); });
  const double t_ser =
      best_of(reps, [&] { sys_ser = sldg::assemble_serial(*space, &frozen, mp, dg, bd); });

  double max_diff = 0.0;
  for (size_t i = 0; i < sys_par.A.val.size(); ++i)
    max_diff = std::max(max_diff, std::abs(sys_par.A.val[i] - sys_ser.A.val[i]));
  for (size_t i = 0; i < sys_par.b.size(); ++i)
    max_diff = std::max(max_diff, std::abs(sys_par.b[i] - sys_ser.b[i]));

  const double t_norm = best_of(reps, [&] {
    volatile double v = sldg::energy_norm(frozen, dg, bd.g);
    (void)v;
  });

  std::printf("%-28s %10.1f ms\n", "assemble (parallel)", 1e3 * t_par);
  std::printf("%-28s %10.1f ms\n", "assemble (serial ref)", 1e3 * t_ser);
  std::printf("%-28s %10.2fx\n", "speedup", t_ser / t_par);
  std::printf("%-28s %10.3e\n", "max |parallel - serial|", max_diff);
  std::printf("%-28s %10.1f ms\n", "energy norm", 1e3 * t_norm);
  return max_diff == 0.0 ? 0 : 1;
}
