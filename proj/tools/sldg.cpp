// Command-line driver for the convergence studies and the crack experiment.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sldg/experiments.hpp"

namespace {

using nlohmann::json;

json stats_json(const std::vector<sldg::LevelStats>& stats) {
  json arr = json::array();
  for (const sldg::LevelStats& st : stats) {
    arr.push_back({{"label", st.label},
                   {"elements", st.elements},
                   {"ndof", st.ndof},
                   {"picard_iterations", st.picard_iterations},
                   {"picard_converged", st.picard_converged},
                   {"linear_iterations", st.linear_iterations},
                   {"seconds", st.seconds}});
  }
  return arr;
}

json config_json(const sldg::RunConfig& cfg) {
  return {{"alpha", cfg.mp.alpha},
          {"beta", cfg.mp.beta},
          {"mu", cfg.mp.mu},
          {"sigma", cfg.dg.sigma},
          {"gamma", cfg.dg.gamma},
          {"boundary_flux", cfg.dg.boundary_flux},
          {"picard_tol", cfg.picard.tol},
          {"picard_max_iter", cfg.picard.max_iter},
          {"relaxation", cfg.picard.relaxation},
          {"linear_rel_tol", cfg.picard.linear_rel_tol},
          {"degree", cfg.degree},
          {"levels", cfg.levels},
          {"fixed_n", cfg.fixed_n},
          {"p_degrees", cfg.p_degrees},
          {"crack_n", cfg.crack_n},
          {"crack_degree", cfg.crack_degree},
          {"theta", cfg.theta},
          {"depth", cfg.depth},
          {"crack_betas", cfg.crack_betas},
          {"out_dir", cfg.out_dir}};
}

void write_manifest(const sldg::RunConfig& cfg, const std::string& command, const json& body) {
  std::filesystem::create_directories(cfg.out_dir);
  json manifest = {{"command", command}, {"config", config_json(cfg)}};
  manifest.update(body);
  std::ofstream out(cfg.out_dir + "/run_manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + cfg.out_dir + "/run_manifest.json");
}

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

void print_records(const std::vector<sldg::ConvergenceRecord>& records) {
  std::printf("%-12s %8s %14s %8s %14s %8s %12s %12s\n", "level", "ndof", "l2_error", "eoc",
              "energy_err", "eoc", "rel_l2_%", "rel_en_%");
  for (const sldg::ConvergenceRecord& r : records) {
    std::printf("%-12s %8d %14.6e %8s %14.6e %8s %12.4e %12.4e\n", r.level.c_str(), r.ndof,
                r.l2_error, opt_str(r.eoc_l2).c_str(), r.energy_error,
                opt_str(r.eoc_energy).c_str(), r.rel_l2_percent, r.rel_energy_percent);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hp-adaptive interior-penalty DG solver for strain-limiting anti-plane shear"};
  app.set_config("--config", "", "read options from an INI/TOML file");
  app.require_subcommand(1);

  sldg::RunConfig cfg;
  int threads = 0;

  app.add_option("--alpha", cfg.mp.alpha, "model exponent alpha > 0")->capture_default_str();
  app.add_option("--beta", cfg.mp.beta, "strain-limiting parameter beta >= 0")->capture_default_str();
  app.add_option("--mu", cfg.mp.mu, "shear modulus mu > 0")->capture_default_str();
  app.add_option("--sigma", cfg.dg.sigma, "penalty scale sigma > 0")->capture_default_str();
  app.add_option("--gamma", cfg.dg.gamma, "penalty edge-length exponent")->capture_default_str();
  app.add_flag("--boundary-flux,!--no-boundary-flux", cfg.dg.boundary_flux,
               "consistency flux terms on boundary/crack faces (default on)");
  app.add_option("--tol", cfg.picard.tol, "Picard relative increment tolerance")->capture_default_str();
  app.add_option("--max-picard", cfg.picard.max_iter, "Picard iteration cap")->capture_default_str();
  app.add_option("--relax", cfg.picard.relaxation, "Picard relaxation in (0,1]")->capture_default_str();
  app.add_option("--linear-tol", cfg.picard.linear_rel_tol, "linear solver relative tolerance")
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)")
      ->capture_default_str();

  CLI::App* ch = app.add_subcommand("converge-h", "uniform mesh refinement study");
  ch->add_option("--degree", cfg.degree, "polynomial degree")->capture_default_str();
  ch->add_option("--levels", cfg.levels, "mesh sizes n (n x n cells)")
      ->delimiter(',')
      ->capture_default_str();

  CLI::App* cp = app.add_subcommand("converge-p", "degree elevation study on a fixed mesh");
  cp->add_option("--n", cfg.fixed_n, "mesh size n")->capture_default_str();
  cp->add_option("--degrees", cfg.p_degrees, "degree ladder")->delimiter(',')->capture_default_str();

  CLI::App* chp = app.add_subcommand("converge-hp", "simultaneous mesh/degree ladder");
  std::vector<int> hp_ns, hp_ps;
  chp->add_option("--ns", hp_ns, "mesh sizes, zipped with --ps")->delimiter(',');
  chp->add_option("--ps", hp_ps, "degrees, zipped with --ns")->delimiter(',');

  CLI::App* cc = app.add_subcommand("crack", "adaptive crack experiment with a beta sweep");
  cc->add_option("--n", cfg.crack_n, "initial mesh size n")->capture_default_str();
  cc->add_option("--degree", cfg.crack_degree, "polynomial degree")->capture_default_str();
  cc->add_option("--theta", cfg.theta, "marking fraction in [0,1]")->capture_default_str();
  cc->add_option("--depth", cfg.depth, "adaptive refinement rounds")->capture_default_str();
  cc->add_option("--betas", cfg.crack_betas, "beta sweep values")->delimiter(',')->capture_default_str();

  for (CLI::App* sub : {ch, cp, chp, cc}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) omp_set_num_threads(threads);
    const auto t0 = std::chrono::steady_clock::now();
    json body;
    std::string command;

    if (ch->parsed()) {
      command = "converge-h";
      const sldg::SweepResult res = sldg::run_converge_h(cfg);
      print_records(res.records);
      body = {{"levels", stats_json(res.stats)}, {"csv", res.csv_path}};
    } else if (cp->parsed()) {
      command = "converge-p";
      const sldg::SweepResult res = sldg::run_converge_p(cfg);
      print_records(res.records);
      body = {{"levels", stats_json(res.stats)}, {"csv", res.csv_path}};
    } else if (chp->parsed()) {
      command = "converge-hp";
      if (hp_ns.size() != hp_ps.size())
        throw std::invalid_argument("--ns and --ps must have equal length");
      if (!hp_ns.empty()) {
        cfg.hp_rungs.clear();
        for (size_t i = 0; i < hp_ns.size(); ++i) cfg.hp_rungs.emplace_back(hp_ns[i], hp_ps[i]);
      }
      const sldg::SweepResult res = sldg::run_converge_hp(cfg);
      print_records(res.records);
      body = {{"levels", stats_json(res.stats)}, {"csv", res.csv_path}};
    } else {
      command = "crack";
      const sldg::CrackResult res = sldg::run_crack(cfg);
      json runs = json::array();
      std::printf("%-10s %10s %14s %14s %14s\n", "beta", "h_min", "tip_dist", "max|eps23|",
                  "max|eps|");
      for (const sldg::CrackBetaResult& run : res.runs) {
        std::printf("%-10g %10.4e %14.6e %14.6e %14.6e\n", run.beta, run.h_min, run.tip_distance,
                    run.max_abs_eps23, run.max_abs_eps);
        runs.push_back({{"beta", run.beta},
                        {"h_min", run.h_min},
                        {"tip_distance", run.tip_distance},
                        {"max_abs_eps23", run.max_abs_eps23},
                        {"max_abs_eps", run.max_abs_eps},
                        {"rounds", stats_json(run.stats)}});
      }
      body = {{"runs", runs}};
    }

    body["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(cfg, command, body);
    return 0;
  } catch (const std::exception& ex) {
    nlohmann::json err = {{"error", ex.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
}
