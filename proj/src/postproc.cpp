#include "sldg/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "sldg/basis.hpp"
#include "sldg/quadrature.hpp"

namespace sldg {
namespace {

constexpr int kErrorExtraExactness = 4;

std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

// CSV fields here never contain commas, quotes, or newlines, so quoting is
// unnecessary; keep a single choke point anyway.
std::string csv_field(const std::string& s) { return s; }

int find_containing_element(const Mesh& mesh, Vec2 p) {
  for (double tol : {1e-12, 1e-9}) {
    for (int e = 0; e < mesh.n_elements(); ++e) {
      if (element_contains(mesh, e, p, tol)) return e;
    }
  }
  throw std::runtime_error("sample point (" + std::to_string(p.x) + ", " +
                           std::to_string(p.y) + ") lies in no element");
}

}  // namespace

double error_l2(const Solution& u_h, const std::function<double(Vec2)>& exact) {
  if (!exact) throw std::invalid_argument("error_l2: exact function is empty");
  const DgSpace& sp = *u_h.space;
  const Mesh& mesh = *sp.mesh;
  const TriangleRule rule =
      triangle_rule(std::min(20, 2 * sp.max_degree + 3 + kErrorExtraExactness));
  std::map<int, BasisTable> tables;
  for (int e = 0; e < mesh.n_elements(); ++e) tables.try_emplace(sp.degree[e]);
  for (auto& [deg, table] : tables) table = tabulate_basis(deg, rule.points);

  std::vector<double> partial(mesh.n_elements(), 0.0);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const AffineMap& map = mesh.map(e);
    const BasisTable& table = tables.at(sp.degree[e]);
    const int nb = sp.dim(e);
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double uh = 0.0;
      for (int k = 0; k < nb; ++k)
        uh += u_h.coeff[sp.offset[e] + k] * table.val[q * table.N + k];
      const double diff = uh - exact(map.to_physical(rule.points[q]));
      acc += rule.weights[q] * map.detJ * diff * diff;
    }
    partial[e] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return std::sqrt(total);
}

double error_energy(const Solution& u_h, const std::function<double(Vec2)>& exact,
                    const std::function<Vec2(Vec2)>& exact_grad, const DgParams& dg,
                    const std::function<double(Vec2, BoundaryTag)>& g) {
  if (!exact || !exact_grad) throw std::invalid_argument("error_energy: empty exact function");
  BrokenFunction fn;
  fn.grad = [&](int e, Vec2 ref, Vec2 phys) {
    return eval(u_h, e, ref).grad - exact_grad(phys);
  };
  // The exact solution is continuous, so interior jumps of u_h - u equal
  // jumps of u_h; on boundary and crack faces the jump is u_h - g.
  fn.trace = [&](int e, Vec2 ref, Vec2) { return eval(u_h, e, ref).value; };
  fn.boundary_jump = [&](int e, Vec2 ref, Vec2 phys, BoundaryTag tag) {
    return eval(u_h, e, ref).value - g(phys, tag);
  };
  return energy_norm_generic(*u_h.space, dg, fn, kErrorExtraExactness);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size())
    throw std::invalid_argument("eoc: errors and mesh sizes differ in length");
  if (errors.size() < 2) throw std::invalid_argument("eoc: need at least two levels");
  for (double e : errors)
    if (!(e > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
  for (size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0)) throw std::invalid_argument("eoc: mesh sizes must be positive");
    if (i > 0 && !(hs[i] < hs[i - 1]))
      throw std::invalid_argument("eoc: mesh sizes must be strictly decreasing");
  }
  std::vector<double> rates(errors.size() - 1);
  for (size_t i = 0; i + 1 < errors.size(); ++i)
    rates[i] = (std::log(errors[i + 1]) - std::log(errors[i])) / (std::log(hs[i + 1]) - std::log(hs[i]));
  return rates;
}

double relative_percent(double err, double norm) {
  if (!(norm > 0.0)) throw std::invalid_argument("relative_percent: norm must be positive");
  return 100.0 * err / norm;
}

void export_csv(const std::vector<ConvergenceRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "level,ndof,l2_error,energy_error,eoc_l2,eoc_energy,rel_l2_percent,rel_energy_percent\r\n";
  for (const ConvergenceRecord& r : records) {
    out << csv_field(r.level) << ',' << r.ndof << ',' << fmt_sci(r.l2_error) << ','
        << fmt_sci(r.energy_error) << ',' << (r.eoc_l2 ? fmt_sci(*r.eoc_l2) : std::string())
        << ',' << (r.eoc_energy ? fmt_sci(*r.eoc_energy) : std::string()) << ','
        << fmt_sci(r.rel_l2_percent) << ',' << fmt_sci(r.rel_energy_percent) << "\r\n";
  }
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::vector<LineSample> sample_line(const Solution& u, const ModelParams& mp,
                                    Vec2 a, Vec2 b, int count) {
  if (count < 1) throw std::invalid_argument("sample_line: count must be positive");
  const Mesh& mesh = *u.space->mesh;
  std::vector<LineSample> samples(count);
  for (int k = 0; k < count; ++k) {
    Vec2 p = a + ((b - a) * (static_cast<double>(k) / count));
    if (mesh.crack && std::abs(p.y - mesh.crack->y) < 1e-12 && p.x > mesh.crack->x0 - 1e-12 &&
        p.x < mesh.crack->x1 + 1e-12) {
      p.y -= 1e-9;  // sample just below the slit, never on it
    }
    const int e = find_containing_element(mesh, p);
    const EvalResult sv = eval(u, e, mesh.map(e).to_reference(p));
    LineSample& s = samples[k];
    s.p = p;
    s.u = sv.value;
    const Vec2 t = stress_from_gradient(sv.grad);
    const Vec2 eps = strain_from_stress(t, mp);
    s.t13 = t.x;
    s.t23 = t.y;
    s.eps13 = eps.x;
    s.eps23 = eps.y;
  }
  return samples;
}

void export_samples_csv(const std::vector<LineSample>& samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "x,y,u,T13,T23,eps13,eps23\r\n";
  for (const LineSample& s : samples) {
    out << fmt_sci(s.p.x) << ',' << fmt_sci(s.p.y) << ',' << fmt_sci(s.u) << ','
        << fmt_sci(s.t13) << ',' << fmt_sci(s.t23) << ',' << fmt_sci(s.eps13) << ','
        << fmt_sci(s.eps23) << "\r\n";
  }
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

void export_vtk(const Solution& u, const ModelParams& mp, const std::string& path) {
  const DgSpace& sp = *u.space;
  const Mesh& mesh = *sp.mesh;

  struct Node {
    Vec2 p;
    double u, gmag, t13, t23, eps13, eps23;
  };
  std::vector<Node> nodes;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> cell_degree;

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int n = std::max(1, sp.degree[e]);
    const AffineMap& map = mesh.map(e);
    const int base = static_cast<int>(nodes.size());
    // Lattice nodes (i/n, j/n), i + j <= n, indexed row-major by j.
    std::vector<int> row_start(n + 2, 0);
    for (int j = 0; j <= n; ++j) row_start[j + 1] = row_start[j] + (n - j + 1);
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n - j; ++i) {
        const Vec2 ref{static_cast<double>(i) / n, static_cast<double>(j) / n};
        const EvalResult sv = eval(u, e, ref);
        const Vec2 t = stress_from_gradient(sv.grad);
        const Vec2 eps = strain_from_stress(t, mp);
        nodes.push_back({map.to_physical(ref), sv.value, norm(sv.grad), t.x, t.y, eps.x, eps.y});
      }
    }
    auto idx = [&](int i, int j) { return base + row_start[j] + i; };
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n - j; ++i) {
        cells.push_back({idx(i, j), idx(i + 1, j), idx(i, j + 1)});
        cell_degree.push_back(sp.degree[e]);
        if (i + j < n - 1) {
          cells.push_back({idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
          cell_degree.push_back(sp.degree[e]);
        }
      }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# vtk DataFile Version 3.0\n";
  out << "dg solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nodes.size() << " double\n";
  for (const Node& nd : nodes) out << fmt_sci(nd.p.x) << ' ' << fmt_sci(nd.p.y) << " 0.000000000000e+00\n";
  out << "CELLS " << cells.size() << ' ' << 4 * cells.size() << '\n';
  for (const auto& c : cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << cells.size() << '\n';
  for (size_t i = 0; i < cells.size(); ++i) out << "5\n";
  out << "POINT_DATA " << nodes.size() << '\n';
  auto scalars = [&](const char* name, auto&& get) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const Node& nd : nodes) out << fmt_sci(get(nd)) << '\n';
  };
  scalars("u", [](const Node& nd) { return nd.u; });
  scalars("grad_mag", [](const Node& nd) { return nd.gmag; });
  scalars("T13", [](const Node& nd) { return nd.t13; });
  scalars("T23", [](const Node& nd) { return nd.t23; });
  scalars("eps13", [](const Node& nd) { return nd.eps13; });
  scalars("eps23", [](const Node& nd) { return nd.eps23; });
  out << "CELL_DATA " << cells.size() << '\n';
  out << "SCALARS degree int 1\nLOOKUP_TABLE default\n";
  for (int d : cell_degree) out << d << '\n';
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace sldg
