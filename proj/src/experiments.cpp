#include "sldg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <stdexcept>

#include "sldg/quadrature.hpp"

namespace sldg {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

int total_linear_iterations(const PicardReport& rep) {
  int total = 0;
  for (int it : rep.linear_iterations) total += it;
  return total;
}

struct SolveOutcome {
  Solution u;
  LevelStats stats;
};

SolveOutcome solve_manufactured(std::shared_ptr<const DgSpace> space, const RunConfig& cfg,
                                const BoundaryData& bd, const std::string& label) {
  const auto t0 = std::chrono::steady_clock::now();
  PicardReport rep = picard(space, cfg.mp, cfg.dg, bd, cfg.picard);
  if (!rep.converged)
    throw std::runtime_error("picard did not converge on level " + label);
  LevelStats st;
  st.label = label;
  st.elements = space->mesh->n_elements();
  st.ndof = space->total_dofs;
  st.picard_iterations = rep.iterations;
  st.picard_converged = rep.converged;
  st.linear_iterations = total_linear_iterations(rep);
  st.seconds = seconds_since(t0);
  return {std::move(rep.solution), std::move(st)};
}

ConvergenceRecord make_record(const Solution& u, const RunConfig& cfg, const BoundaryData& bd,
                              const std::string& label) {
  auto exact = [](Vec2 p) { return manufactured_solution(p).u; };
  auto exact_grad = [](Vec2 p) { return manufactured_solution(p).grad; };
  ConvergenceRecord rec;
  rec.level = label;
  rec.ndof = u.space->total_dofs;
  rec.l2_error = error_l2(u, exact);
  rec.energy_error = error_energy(u, exact, exact_grad, cfg.dg, bd.g);
  rec.rel_l2_percent = relative_percent(rec.l2_error, manufactured_l2_norm());
  rec.rel_energy_percent = relative_percent(rec.energy_error, manufactured_energy_norm());
  return rec;
}

void fill_eoc(std::vector<ConvergenceRecord>& records, const std::vector<double>& hs) {
  std::vector<double> l2(records.size()), en(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    l2[i] = records[i].l2_error;
    en[i] = records[i].energy_error;
  }
  const std::vector<double> r_l2 = eoc(l2, hs);
  const std::vector<double> r_en = eoc(en, hs);
  for (size_t i = 1; i < records.size(); ++i) {
    records[i].eoc_l2 = r_l2[i - 1];
    records[i].eoc_energy = r_en[i - 1];
  }
}

std::string maybe_export(const std::vector<ConvergenceRecord>& records, const RunConfig& cfg,
                         const std::string& name) {
  if (!cfg.write_files) return {};
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/" + name;
  export_csv(records, path);
  return path;
}

// Distance from p to the closed element (0 when contained).
double element_distance(const Mesh& mesh, int e, Vec2 p) {
  if (element_contains(mesh, e, p, 1e-12)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = mesh.vertex(mesh.elements[static_cast<size_t>(e)].v[static_cast<size_t>(k)]);
    const Vec2 b = mesh.vertex(mesh.elements[static_cast<size_t>(e)].v[static_cast<size_t>((k + 1) % 3)]);
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, norm(p - (a + t * d)));
  }
  return best;
}

}  // namespace

double manufactured_l2_norm() {
  // u = f(x) f(y) with f(t) = t^{5/2}(1-t); f^2 is a degree-7 polynomial,
  // so ||u||_L2 = int f^2 exactly under an 8-point Gauss rule.
  const EdgeRule r = edge_rule(8);
  double m = 0.0;
  for (int i = 0; i < r.count; ++i) {
    const double t = r.points[static_cast<size_t>(i)];
    const double f = std::pow(t, 2.5) * (1.0 - t);
    m += r.weights[static_cast<size_t>(i)] * f * f;
  }
  return m;
}

double manufactured_energy_norm() {
  // |u|_H1^2 = 2 int f'^2 int f^2 (f'^2 is a degree-5 polynomial); the
  // jump terms of the continuous u vanish.
  const EdgeRule r = edge_rule(8);
  double mf = 0.0, mdf = 0.0;
  for (int i = 0; i < r.count; ++i) {
    const double t = r.points[static_cast<size_t>(i)];
    const double w = r.weights[static_cast<size_t>(i)];
    const double f = std::pow(t, 2.5) * (1.0 - t);
    const double df = 2.5 * std::pow(t, 1.5) - 3.5 * std::pow(t, 2.5);
    mf += w * f * f;
    mdf += w * df * df;
  }
  return std::sqrt(2.0 * mdf * mf);
}

BoundaryData manufactured_boundary_data(const ModelParams& mp) {
  BoundaryData bd;
  bd.g = [](Vec2 p, BoundaryTag) { return manufactured_solution(p).u; };
  bd.f = [mp](Vec2 p) { return manufactured_source(p, mp); };
  return bd;
}

BoundaryData crack_boundary_data() {
  BoundaryData bd;
  bd.g = [](Vec2 p, BoundaryTag tag) {
    switch (tag) {
      case BoundaryTag::left: return 1.0;
      case BoundaryTag::right: return 0.0;
      case BoundaryTag::bottom:
      case BoundaryTag::top: return 1.0 - p.x;
      case BoundaryTag::crack: return 0.0;
      default: throw std::invalid_argument("crack boundary data: untagged face");
    }
  };
  bd.f = [](Vec2) { return 0.0; };
  return bd;
}

SweepResult run_converge_h(const RunConfig& cfg) {
  if (cfg.levels.size() < 2) throw std::invalid_argument("run_converge_h: need >= 2 levels");
  const BoundaryData bd = manufactured_boundary_data(cfg.mp);
  SweepResult out;
  std::vector<double> hs;
  for (int n : cfg.levels) {
    const std::string label = std::to_string(n) + "x" + std::to_string(n);
    auto mesh = std::make_shared<const Mesh>(build_uniform(n));
    auto space = make_space(mesh, cfg.degree);
    SolveOutcome so = solve_manufactured(space, cfg, bd, label);
    out.records.push_back(make_record(so.u, cfg, bd, label));
    out.stats.push_back(std::move(so.stats));
    hs.push_back(std::sqrt(2.0) / n);
  }
  fill_eoc(out.records, hs);
  out.csv_path = maybe_export(out.records, cfg, "converge_h_p" + std::to_string(cfg.degree) + ".csv");
  return out;
}

SweepResult run_converge_p(const RunConfig& cfg) {
  if (cfg.p_degrees.empty()) throw std::invalid_argument("run_converge_p: empty degree list");
  const BoundaryData bd = manufactured_boundary_data(cfg.mp);
  SweepResult out;
  auto mesh = std::make_shared<const Mesh>(build_uniform(cfg.fixed_n));
  for (int deg : cfg.p_degrees) {
    const std::string label = "p=" + std::to_string(deg);
    auto space = make_space(mesh, deg);
    SolveOutcome so = solve_manufactured(space, cfg, bd, label);
    out.records.push_back(make_record(so.u, cfg, bd, label));
    out.stats.push_back(std::move(so.stats));
  }
  out.csv_path = maybe_export(out.records, cfg, "converge_p_n" + std::to_string(cfg.fixed_n) + ".csv");
  return out;
}

SweepResult run_converge_hp(const RunConfig& cfg) {
  if (cfg.hp_rungs.empty()) throw std::invalid_argument("run_converge_hp: empty rung list");
  const BoundaryData bd = manufactured_boundary_data(cfg.mp);
  SweepResult out;
  for (auto [n, deg] : cfg.hp_rungs) {
    const std::string label = std::to_string(n) + "x" + std::to_string(n) + " p=" + std::to_string(deg);
    auto mesh = std::make_shared<const Mesh>(build_uniform(n));
    auto space = make_space(mesh, deg);
    SolveOutcome so = solve_manufactured(space, cfg, bd, label);
    out.records.push_back(make_record(so.u, cfg, bd, label));
    out.stats.push_back(std::move(so.stats));
  }
  out.csv_path = maybe_export(out.records, cfg, "converge_hp.csv");
  return out;
}

CrackResult run_crack(const RunConfig& cfg) {
  if (cfg.depth < 0) throw std::invalid_argument("run_crack: negative depth");
  const CrackSegment crack{0.5, 0.5, 1.0};
  const BoundaryData bd = crack_boundary_data();
  const Vec2 tip{crack.x0, crack.y};
  if (cfg.write_files) std::filesystem::create_directories(cfg.out_dir);

  CrackResult result;
  for (double beta : cfg.crack_betas) {
    RunConfig local = cfg;
    local.mp.beta = beta;
    local.mp.validate();
    const std::string beta_tag = "beta" + fmt_g(beta);

    auto mesh = std::make_shared<const Mesh>(build_uniform(cfg.crack_n, crack));
    auto space = make_space(mesh, cfg.crack_degree);

    CrackBetaResult run;
    run.beta = beta;

    SolveOutcome so = [&] {
      const auto t0 = std::chrono::steady_clock::now();
      PicardReport rep = picard(space, local.mp, local.dg, bd, local.picard);
      LevelStats st;
      st.label = beta_tag + " r0";
      st.elements = space->mesh->n_elements();
      st.ndof = space->total_dofs;
      st.picard_iterations = rep.iterations;
      st.picard_converged = rep.converged;
      st.linear_iterations = total_linear_iterations(rep);
      st.seconds = seconds_since(t0);
      return SolveOutcome{std::move(rep.solution), std::move(st)};
    }();
    run.stats.push_back(so.stats);
    if (cfg.write_files) mesh->write_vtk(cfg.out_dir + "/crack_mesh_" + beta_tag + "_r0.vtk");

    Solution u = std::move(so.u);
    for (int round = 1; round <= cfg.depth; ++round) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<double> eta = indicator(u);
      const std::vector<int> marked = mark(eta, cfg.theta);
      auto fine = std::make_shared<const Mesh>(refine(*mesh, marked));
      auto fine_space = make_space(fine, cfg.crack_degree);
      Solution initial = transfer(u, fine_space);
      PicardReport rep = picard(fine_space, local.mp, local.dg, bd, local.picard, &initial);
      mesh = fine;
      space = fine_space;
      u = std::move(rep.solution);

      LevelStats st;
      st.label = beta_tag + " r" + std::to_string(round);
      st.elements = mesh->n_elements();
      st.ndof = space->total_dofs;
      st.picard_iterations = rep.iterations;
      st.picard_converged = rep.converged;
      st.linear_iterations = total_linear_iterations(rep);
      st.seconds = seconds_since(t0);
      run.stats.push_back(std::move(st));
      if (cfg.write_files)
        mesh->write_vtk(cfg.out_dir + "/crack_mesh_" + beta_tag + "_r" + std::to_string(round) + ".vtk");
    }

    run.h_min = std::numeric_limits<double>::infinity();
    for (const Element& el : mesh->elements) run.h_min = std::min(run.h_min, el.h);
    run.tip_distance = std::numeric_limits<double>::infinity();
    for (int e = 0; e < mesh->n_elements(); ++e) {
      if (mesh->elements[static_cast<size_t>(e)].h <= run.h_min * (1.0 + 1e-9))
        run.tip_distance = std::min(run.tip_distance, element_distance(*mesh, e, tip));
    }

    const Vec2 a{0.0, crack.y - 1e-9};
    const Vec2 b{crack.x0, crack.y - 1e-9};
    run.samples = sample_line(u, local.mp, a, b, 100);
    for (const LineSample& s : run.samples) {
      run.max_abs_eps23 = std::max(run.max_abs_eps23, std::abs(s.eps23));
      run.max_abs_eps = std::max(run.max_abs_eps, std::hypot(s.eps13, s.eps23));
    }

    if (cfg.write_files) {
      export_samples_csv(run.samples, cfg.out_dir + "/crack_line_" + beta_tag + ".csv");
      export_vtk(u, local.mp, cfg.out_dir + "/crack_field_" + beta_tag + ".vtk");
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

}  // namespace sldg
