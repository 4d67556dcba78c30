#include "sldg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sldg/quadrature.hpp"

namespace sldg {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(static_cast<size_t>(n));
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k)
      acc += val[static_cast<size_t>(k)] * x[static_cast<size_t>(col[k])];
    y[static_cast<size_t>(r)] = acc;
  }
}

double penalty_weight(const Face& f, const DgSpace& sp, const DgParams& dg) {
  const double np = sp.degree[static_cast<size_t>(f.plus)];
  const double nf = (f.minus >= 0)
                        ? 0.5 * (np + sp.degree[static_cast<size_t>(f.minus)])
                        : np;
  return dg.sigma * nf * nf / std::pow(f.len, dg.gamma);
}

namespace {

int default_volume_exactness(const DgSpace& sp, const DgParams& dg) {
  const int q = dg.volume_exactness > 0 ? dg.volume_exactness
                                        : 2 * sp.max_degree + 3;
  return std::min(q, 20);
}

int default_edge_points(const DgSpace& sp, const DgParams& dg) {
  const int c = dg.edge_points > 0 ? dg.edge_points : sp.max_degree + 2;
  return std::min(c, 20);
}

struct AsmContext {
  const DgSpace& sp;
  const Solution* frozen;
  const ModelParams& mp;
  const DgParams& dg;
  const BoundaryData& bd;
  TriangleRule vrule;
  EdgeRule erule;
  std::map<int, BasisTable> vtab;  // per-degree tables at the volume points
};

AsmContext make_context(const DgSpace& sp, const Solution* frozen,
                        const ModelParams& mp, const DgParams& dg,
                        const BoundaryData& bd) {
  mp.validate();
  if (!(dg.sigma > 0.0)) throw std::invalid_argument("assemble: sigma must be > 0");
  if (!bd.f || !bd.g) throw std::invalid_argument("assemble: boundary data needs f and g");
  if (frozen) {
    const DgSpace& fs = *frozen->space;
    if (fs.mesh->uid != sp.mesh->uid || fs.degree != sp.degree)
      throw std::invalid_argument("assemble: frozen solution lives on a different space");
  }
  AsmContext ctx{sp, frozen, mp, dg, bd, triangle_rule(default_volume_exactness(sp, dg)),
                 edge_rule(default_edge_points(sp, dg)), {}};
  for (int d : sp.degree)
    if (!ctx.vtab.count(d)) ctx.vtab.emplace(d, tabulate_basis(d, ctx.vrule.points));
  return ctx;
}

struct ElemLocal {
  std::vector<double> mat;  // N x N row-major
  std::vector<double> rhs;
};

void element_kernel(const AsmContext& ctx, int e, ElemLocal& out) {
  const DgSpace& sp = ctx.sp;
  const int n = sp.degree[static_cast<size_t>(e)];
  const int N = basis_dimension(n);
  const int off = sp.offset[static_cast<size_t>(e)];
  const AffineMap& map = sp.mesh->map(e);
  const BasisTable& tab = ctx.vtab.at(n);
  out.mat.assign(static_cast<size_t>(N) * N, 0.0);
  out.rhs.assign(static_cast<size_t>(N), 0.0);
  std::vector<Vec2> g(static_cast<size_t>(N));
  const size_t npts = ctx.vrule.points.size();
  for (size_t q = 0; q < npts; ++q) {
    const Vec2* gref = &tab.grad[q * static_cast<size_t>(N)];
    for (int k = 0; k < N; ++k) g[static_cast<size_t>(k)] = map.push_gradient(gref[k]);
    double G;
    if (ctx.frozen) {
      Vec2 gr{0.0, 0.0};
      for (int k = 0; k < N; ++k)
        gr = gr + ctx.frozen->coeff[static_cast<size_t>(off + k)] * gref[k];
      G = coeff_G(norm(map.push_gradient(gr)), ctx.mp);
    } else {
      G = coeff_G(0.0, ctx.mp);
    }
    const double wv = ctx.vrule.weights[q] * map.detJ * G;
    for (int i = 0; i < N; ++i) {
      const Vec2 gi = g[static_cast<size_t>(i)];
      for (int j = 0; j < N; ++j)
        out.mat[static_cast<size_t>(i) * N + j] += wv * dot(gi, g[static_cast<size_t>(j)]);
    }
    const double wf =
        ctx.vrule.weights[q] * map.detJ * ctx.bd.f(map.to_physical(ctx.vrule.points[q]));
    const double* phi = &tab.val[q * static_cast<size_t>(N)];
    for (int i = 0; i < N; ++i) out.rhs[static_cast<size_t>(i)] += wf * phi[i];
  }
}

struct FaceLocal {
  // Blocks indexed (test side, trial side); only pp/rhs_p on boundary faces.
  std::vector<double> pp, pm, mp, mm, rhs_p;
};

struct SideEval {
  int N = 0;
  std::vector<double> v;    // values [pt*N+k]
  std::vector<double> gn;   // physical gradient . face normal
  std::vector<double> G;    // frozen coefficient per point
};

SideEval eval_side(const AsmContext& ctx, int e, const Vec2& r0, const Vec2& r1,
                   const Face& f) {
  const DgSpace& sp = ctx.sp;
  const int n = sp.degree[static_cast<size_t>(e)];
  const int N = basis_dimension(n);
  const int off = sp.offset[static_cast<size_t>(e)];
  const AffineMap& map = sp.mesh->map(e);
  const size_t R = ctx.erule.points.size();
  SideEval s;
  s.N = N;
  s.v.resize(R * static_cast<size_t>(N));
  s.gn.resize(R * static_cast<size_t>(N));
  s.G.resize(R);
  for (size_t r = 0; r < R; ++r) {
    const double t = ctx.erule.points[r];
    const Vec2 ref = r0 + t * (r1 - r0);
    const auto val = basis_eval(n, ref);
    const auto grd = basis_grad(n, ref);
    Vec2 gfrz{0.0, 0.0};
    for (int k = 0; k < N; ++k) {
      s.v[r * static_cast<size_t>(N) + k] = val[k];
      const Vec2 gp = map.push_gradient(grd[k]);
      s.gn[r * static_cast<size_t>(N) + k] = dot(gp, f.normal);
      if (ctx.frozen)
        gfrz = gfrz + ctx.frozen->coeff[static_cast<size_t>(off + k)] * grd[k];
    }
    s.G[r] = ctx.frozen ? coeff_G(norm(map.push_gradient(gfrz)), ctx.mp)
                        : coeff_G(0.0, ctx.mp);
  }
  return s;
}

void face_kernel(const AsmContext& ctx, int fi, FaceLocal& out) {
  const DgSpace& sp = ctx.sp;
  const Face& f = sp.mesh->faces[static_cast<size_t>(fi)];
  const FaceFrame fr = face_quadrature_frame(*sp.mesh, f);
  const double pw = penalty_weight(f, sp, ctx.dg);
  const size_t R = ctx.erule.points.size();

  const SideEval P = eval_side(ctx, f.plus, fr.plus_r0, fr.plus_r1, f);
  const int Np = P.N;
  out.pp.assign(static_cast<size_t>(Np) * Np, 0.0);

  if (f.kind == FaceKind::interior) {
    const SideEval M = eval_side(ctx, f.minus, fr.minus_r0, fr.minus_r1, f);
    const int Nm = M.N;
    out.pm.assign(static_cast<size_t>(Np) * Nm, 0.0);
    out.mp.assign(static_cast<size_t>(Nm) * Np, 0.0);
    out.mm.assign(static_cast<size_t>(Nm) * Nm, 0.0);
    for (size_t r = 0; r < R; ++r) {
      const double w = ctx.erule.weights[r] * f.len;
      const double* vp = &P.v[r * static_cast<size_t>(Np)];
      const double* gp = &P.gn[r * static_cast<size_t>(Np)];
      const double* vm = &M.v[r * static_cast<size_t>(Nm)];
      const double* gm = &M.gn[r * static_cast<size_t>(Nm)];
      const double Gp = P.G[r], Gm = M.G[r];
      for (int i = 0; i < Np; ++i)
        for (int j = 0; j < Np; ++j)
          out.pp[static_cast<size_t>(i) * Np + j] +=
              w * (-0.5 * Gp * (gp[j] * vp[i] + gp[i] * vp[j]) + pw * vp[i] * vp[j]);
      for (int i = 0; i < Np; ++i)
        for (int j = 0; j < Nm; ++j)
          out.pm[static_cast<size_t>(i) * Nm + j] +=
              w * (-0.5 * Gm * gm[j] * vp[i] + 0.5 * Gp * gp[i] * vm[j] -
                   pw * vp[i] * vm[j]);
      for (int i = 0; i < Nm; ++i)
        for (int j = 0; j < Np; ++j)
          out.mp[static_cast<size_t>(i) * Np + j] +=
              w * (0.5 * Gp * gp[j] * vm[i] - 0.5 * Gm * gm[i] * vp[j] -
                   pw * vm[i] * vp[j]);
      for (int i = 0; i < Nm; ++i)
        for (int j = 0; j < Nm; ++j)
          out.mm[static_cast<size_t>(i) * Nm + j] +=
              w * (0.5 * Gm * (gm[j] * vm[i] + gm[i] * vm[j]) + pw * vm[i] * vm[j]);
    }
    return;
  }

  // Boundary/crack face: penalty carries the Dirichlet data; consistency
  // terms only with the boundary_flux variant.
  out.rhs_p.assign(static_cast<size_t>(Np), 0.0);
  for (size_t r = 0; r < R; ++r) {
    const double w = ctx.erule.weights[r] * f.len;
    const double* vp = &P.v[r * static_cast<size_t>(Np)];
    const double* gp = &P.gn[r * static_cast<size_t>(Np)];
    const double Gp = P.G[r];
    const double gval = ctx.bd.g(fr.physical(ctx.erule.points[r]), f.tag);
    for (int i = 0; i < Np; ++i) {
      for (int j = 0; j < Np; ++j) {
        double a = pw * vp[i] * vp[j];
        if (ctx.dg.boundary_flux) a -= Gp * (gp[j] * vp[i] + gp[i] * vp[j]);
        out.pp[static_cast<size_t>(i) * Np + j] += w * a;
      }
      double b = pw * vp[i];
      if (ctx.dg.boundary_flux) b -= Gp * gp[i];
      out.rhs_p[static_cast<size_t>(i)] += w * b * gval;
    }
  }
}

// Sparsity pattern: one dense block per (element, neighbor-or-self) pair.
struct Pattern {
  std::vector<int> rowptr, col;
  std::vector<std::vector<std::pair<int, int>>> blocks;  // elem -> (nbr, prefix)
};

Pattern make_pattern(const DgSpace& sp) {
  const int ne = sp.mesh->n_elements();
  std::vector<std::vector<int>> nbr(static_cast<size_t>(ne));
  for (const Face& f : sp.mesh->faces) {
    if (f.kind != FaceKind::interior) continue;
    nbr[static_cast<size_t>(f.plus)].push_back(f.minus);
    nbr[static_cast<size_t>(f.minus)].push_back(f.plus);
  }
  Pattern pat;
  pat.blocks.resize(static_cast<size_t>(ne));
  pat.rowptr.assign(static_cast<size_t>(sp.total_dofs) + 1, 0);
  for (int e = 0; e < ne; ++e) {
    auto& lst = nbr[static_cast<size_t>(e)];
    lst.push_back(e);
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    int width = 0;
    for (int o : lst) {
      pat.blocks[static_cast<size_t>(e)].push_back({o, width});
      width += sp.dim(o);
    }
    for (int i = 0; i < sp.dim(e); ++i)
      pat.rowptr[static_cast<size_t>(sp.offset[static_cast<size_t>(e)] + i) + 1] = width;
  }
  for (size_t r = 1; r < pat.rowptr.size(); ++r) pat.rowptr[r] += pat.rowptr[r - 1];
  pat.col.resize(static_cast<size_t>(pat.rowptr.back()));
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < sp.dim(e); ++i) {
      int pos = pat.rowptr[static_cast<size_t>(sp.offset[static_cast<size_t>(e)] + i)];
      for (const auto& [o, prefix] : pat.blocks[static_cast<size_t>(e)])
        for (int j = 0; j < sp.dim(o); ++j)
          pat.col[static_cast<size_t>(pos + prefix + j)] = sp.offset[static_cast<size_t>(o)] + j;
    }
  }
  return pat;
}

int block_prefix(const Pattern& pat, int e_test, int e_trial) {
  const auto& lst = pat.blocks[static_cast<size_t>(e_test)];
  auto it = std::lower_bound(lst.begin(), lst.end(), e_trial,
                             [](const std::pair<int, int>& a, int b) { return a.first < b; });
  return it->second;
}

void scatter_block(SparseSystem& sys, const Pattern& pat, const DgSpace& sp,
                   int e_test, int e_trial, const std::vector<double>& block) {
  const int Ni = sp.dim(e_test), Nj = sp.dim(e_trial);
  const int prefix = block_prefix(pat, e_test, e_trial);
  for (int i = 0; i < Ni; ++i) {
    const int row = sp.offset[static_cast<size_t>(e_test)] + i;
    double* dst = &sys.A.val[static_cast<size_t>(pat.rowptr[static_cast<size_t>(row)] + prefix)];
    const double* src = &block[static_cast<size_t>(i) * Nj];
    for (int j = 0; j < Nj; ++j) dst[j] += src[j];
  }
}

void scatter_face(SparseSystem& sys, const Pattern& pat, const DgSpace& sp,
                  const Face& f, const FaceLocal& fl) {
  scatter_block(sys, pat, sp, f.plus, f.plus, fl.pp);
  if (f.kind == FaceKind::interior) {
    scatter_block(sys, pat, sp, f.plus, f.minus, fl.pm);
    scatter_block(sys, pat, sp, f.minus, f.plus, fl.mp);
    scatter_block(sys, pat, sp, f.minus, f.minus, fl.mm);
  } else {
    const int off = sp.offset[static_cast<size_t>(f.plus)];
    for (size_t i = 0; i < fl.rhs_p.size(); ++i)
      sys.b[static_cast<size_t>(off) + i] += fl.rhs_p[i];
  }
}

SparseSystem init_system(const DgSpace& sp, const Pattern& pat) {
  SparseSystem sys;
  sys.A.n = sp.total_dofs;
  sys.A.rowptr = pat.rowptr;
  sys.A.col = pat.col;
  sys.A.val.assign(pat.col.size(), 0.0);
  sys.b.assign(static_cast<size_t>(sp.total_dofs), 0.0);
  return sys;
}

}  // namespace

SparseSystem assemble(const DgSpace& sp, const Solution* frozen, const ModelParams& mp,
                      const DgParams& dg, const BoundaryData& bd) {
  const AsmContext ctx = make_context(sp, frozen, mp, dg, bd);
  const Pattern pat = make_pattern(sp);
  const int ne = sp.mesh->n_elements();
  const int nf = static_cast<int>(sp.mesh->faces.size());

  std::vector<ElemLocal> elocal(static_cast<size_t>(ne));
  std::vector<FaceLocal> flocal(static_cast<size_t>(nf));
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) element_kernel(ctx, e, elocal[static_cast<size_t>(e)]);
#pragma omp parallel for schedule(static)
  for (int fi = 0; fi < nf; ++fi) face_kernel(ctx, fi, flocal[static_cast<size_t>(fi)]);

  // Serial scatter in fixed id order keeps results thread-count independent.
  SparseSystem sys = init_system(sp, pat);
  for (int e = 0; e < ne; ++e) {
    scatter_block(sys, pat, sp, e, e, elocal[static_cast<size_t>(e)].mat);
    const int off = sp.offset[static_cast<size_t>(e)];
    const auto& rhs = elocal[static_cast<size_t>(e)].rhs;
    for (size_t i = 0; i < rhs.size(); ++i) sys.b[static_cast<size_t>(off) + i] += rhs[i];
  }
  for (int fi = 0; fi < nf; ++fi)
    scatter_face(sys, pat, sp, sp.mesh->faces[static_cast<size_t>(fi)],
                 flocal[static_cast<size_t>(fi)]);
  return sys;
}

SparseSystem assemble_serial(const DgSpace& sp, const Solution* frozen,
                             const ModelParams& mp, const DgParams& dg,
                             const BoundaryData& bd) {
  const AsmContext ctx = make_context(sp, frozen, mp, dg, bd);
  const Pattern pat = make_pattern(sp);
  SparseSystem sys = init_system(sp, pat);
  ElemLocal el;
  FaceLocal fl;
  for (int e = 0; e < sp.mesh->n_elements(); ++e) {
    element_kernel(ctx, e, el);
    scatter_block(sys, pat, sp, e, e, el.mat);
    const int off = sp.offset[static_cast<size_t>(e)];
    for (size_t i = 0; i < el.rhs.size(); ++i) sys.b[static_cast<size_t>(off) + i] += el.rhs[i];
  }
  for (int fi = 0; fi < static_cast<int>(sp.mesh->faces.size()); ++fi) {
    face_kernel(ctx, fi, fl);
    scatter_face(sys, pat, sp, sp.mesh->faces[static_cast<size_t>(fi)], fl);
  }
  return sys;
}

double energy_norm_generic(const DgSpace& sp, const DgParams& dg,
                           const BrokenFunction& v, int extra_exactness) {
  const TriangleRule vrule =
      triangle_rule(std::min(20, 2 * sp.max_degree + 3 + extra_exactness));
  const EdgeRule erule =
      edge_rule(std::min(20, sp.max_degree + 2 + (extra_exactness + 1) / 2));
  const Mesh& mesh = *sp.mesh;
  const int ne = mesh.n_elements();
  const int nf = static_cast<int>(mesh.faces.size());

  std::vector<double> epart(static_cast<size_t>(ne), 0.0);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) {
    const AffineMap& map = mesh.map(e);
    double acc = 0.0;
    for (size_t q = 0; q < vrule.points.size(); ++q) {
      const Vec2 r = vrule.points[q];
      const Vec2 g = v.grad(e, r, map.to_physical(r));
      acc += vrule.weights[q] * map.detJ * dot(g, g);
    }
    epart[static_cast<size_t>(e)] = acc;
  }

  std::vector<double> fpart(static_cast<size_t>(nf), 0.0);
#pragma omp parallel for schedule(static)
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[static_cast<size_t>(fi)];
    const FaceFrame fr = face_quadrature_frame(mesh, f);
    const double pw = penalty_weight(f, sp, dg);
    double acc = 0.0;
    for (size_t r = 0; r < erule.points.size(); ++r) {
      const double t = erule.points[r];
      const Vec2 phys = fr.physical(t);
      double jump;
      if (f.kind == FaceKind::interior)
        jump = v.trace(f.plus, fr.plus_ref(t), phys) -
               v.trace(f.minus, fr.minus_ref(t), phys);
      else
        jump = v.boundary_jump(f.plus, fr.plus_ref(t), phys, f.tag);
      acc += erule.weights[r] * f.len * pw * jump * jump;
    }
    fpart[static_cast<size_t>(fi)] = acc;
  }

  double total = 0.0;
  for (double x : epart) total += x;
  for (double x : fpart) total += x;
  return std::sqrt(total);
}

double energy_norm(const Solution& v, const DgParams& dg,
                   const std::function<double(Vec2, BoundaryTag)>& g) {
  const DgSpace& sp = *v.space;
  BrokenFunction bf;
  bf.grad = [&](int e, Vec2 r, Vec2) { return eval(v, e, r).grad; };
  bf.trace = [&](int e, Vec2 r, Vec2) { return eval(v, e, r).value; };
  bf.boundary_jump = [&](int e, Vec2 r, Vec2 phys, BoundaryTag tag) {
    const double t = eval(v, e, r).value;
    return g ? (t - g(phys, tag)) : t;
  };
  return energy_norm_generic(sp, dg, bf, 0);
}

}  // namespace sldg
