#include "fraclab/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/reduce.hpp"

namespace fraclab {

KernelTable make_kernel_table(const Grid& g, double expo) {
  KernelTable t;
  t.n = g.n;
  t.dim = g.dim;
  t.expo = expo;
  if (g.dim == 1) {
    t.w.assign(g.n, 0.0);
    for (int m = 1; m < g.n; ++m) t.w[m] = std::pow(g.torus_dist(m), -expo);
  } else {
    t.w.assign(static_cast<std::size_t>(g.n) * g.n, 0.0);
    for (int my = 0; my < g.n; ++my)
      for (int mx = 0; mx < g.n; ++mx) {
        if (mx == 0 && my == 0) continue;
        t.w[static_cast<std::size_t>(my) * g.n + mx] =
            std::pow(g.torus_dist(mx, my), -expo);
      }
  }
  return t;
}

namespace {

inline double slice(const double* u, const double* phi, const double* w,
                    std::size_t len, double ui, double phii, RowKind kind,
                    const kernels::PowSpec& p) {
  switch (kind) {
    case RowKind::pair:
      return kernels::pair_row(u, phi, w, len, ui, phii, p);
    case RowKind::phi:
      return kernels::phi_row(u, w, len, ui, p);
    case RowKind::diff_pow:
      return kernels::diff_pow_row(u, w, len, ui, p);
  }
  return 0.0;
}

}  // namespace

double row_over_runs(const KernelTable& table, const Grid& g,
                     const std::vector<IndexRun>& runs, const double* u,
                     const double* phi, std::size_t i, bool upper_only,
                     RowKind kind, const kernels::PowSpec& p) {
  const int n = g.n;
  const double ui = u[i];
  const double phii = phi ? phi[i] : 0.0;
  const long ix = static_cast<long>(i % n);
  const long iy = g.dim == 2 ? static_cast<long>(i / n) : 0;

  double acc = 0.0;
  for (const IndexRun& r : runs) {
    std::size_t jb = r.begin;
    const std::size_t je = r.end;
    if (upper_only) {
      if (je <= i + 1) continue;
      jb = std::max(jb, i + 1);
    }
    if (jb >= je) continue;

    const long jy = g.dim == 2 ? static_cast<long>(jb / n) : 0;
    const long my = ((jy - iy) % n + n) % n;
    const double* wrow = table.row(static_cast<int>(my));
    const long xb = static_cast<long>(jb) - (g.dim == 2 ? jy * n : 0);
    long m0 = ((xb - ix) % n + n) % n;
    std::size_t len = je - jb;
    std::size_t off = 0;
    // the wrapped x-separation is contiguous except for one wrap at n
    while (len > 0) {
      const std::size_t piece = std::min<std::size_t>(len, n - m0);
      acc += slice(u + jb + off, phi ? phi + jb + off : nullptr, wrow + m0,
                   piece, ui, phii, kind, p);
      off += piece;
      len -= piece;
      m0 = 0;
    }
  }
  return acc;
}

namespace {

std::vector<std::size_t> run_points(const std::vector<IndexRun>& runs) {
  std::vector<std::size_t> pts;
  pts.reserve(runs_point_count(runs));
  for (const auto& r : runs)
    for (std::size_t i = r.begin; i < r.end; ++i) pts.push_back(i);
  return pts;
}

}  // namespace

double pair_sum_upper(const KernelTable& table, const Grid& g,
                      const std::vector<IndexRun>& runs, const double* u,
                      const double* phi, RowKind kind,
                      const kernels::PowSpec& p) {
  const auto pts = run_points(runs);
  return parallel_reduce(pts.size(), [&](std::size_t k) {
    return row_over_runs(table, g, runs, u, phi, pts[k], true, kind, p);
  });
}

double cross_pair_sum(const KernelTable& table, const Grid& g,
                      const std::vector<IndexRun>& runs_a,
                      const std::vector<IndexRun>& runs_b, const double* u,
                      const double* phi, RowKind kind,
                      const kernels::PowSpec& p) {
  const auto pts = run_points(runs_a);
  return parallel_reduce(pts.size(), [&](std::size_t k) {
    return row_over_runs(table, g, runs_b, u, phi, pts[k], false, kind, p);
  });
}

std::vector<IndexRun> runs_difference(const std::vector<IndexRun>& a,
                                      const std::vector<IndexRun>& b) {
  std::vector<IndexRun> out;
  std::size_t bi = 0;
  for (IndexRun r : a) {
    std::size_t cur = r.begin;
    while (cur < r.end) {
      while (bi < b.size() && b[bi].end <= cur) ++bi;
      if (bi == b.size() || b[bi].begin >= r.end) {
        out.push_back({cur, r.end});
        break;
      }
      if (b[bi].begin > cur) out.push_back({cur, b[bi].begin});
      cur = std::max(cur, b[bi].end);
    }
  }
  return out;
}

double abs_pow_integral(const Grid& g, const std::vector<IndexRun>& runs,
                        const double* u, double shift,
                        const kernels::PowSpec& p) {
  std::vector<double> parts(runs.size());
  for (std::size_t k = 0; k < runs.size(); ++k)
    parts[k] = kernels::abs_pow_sum(u + runs[k].begin,
                                    runs[k].end - runs[k].begin, shift, p);
  return pairwise_sum(parts) * g.cell_volume();
}

SeminormResult gagliardo_seminorm(const SampledFunction& u, const Domain& d,
                                  double s, double p) {
  if (!(s > 0.0 && s < 1.0)) throw invalid_input("gagliardo: s must lie in (0,1)");
  if (!(p >= 1.0)) throw invalid_input("gagliardo: p must lie in [1,inf)");
  d.validate(u.grid);
  const Grid& g = u.grid;
  const auto runs = domain_runs(d, g);
  if (runs_point_count(runs) == 0) throw invalid_input("gagliardo: empty domain");

  const KernelTable table = make_kernel_table(g, g.dim + s * p);
  const auto pw = kernels::make_pow(p);
  const double* uv = u.values.data();
  // p >= 2 shares the row kernel with the p-Laplacian pairing so that
  // pairing(u,u) reproduces value_pow_p bit for bit
  const double half =
      p >= 2.0 ? pair_sum_upper(table, g, runs, uv, uv, RowKind::pair, pw)
               : pair_sum_upper(table, g, runs, uv, nullptr, RowKind::diff_pow, pw);
  const double h2 = g.cell_volume() * g.cell_volume();
  const double pow_p = 2.0 * half * h2;

  SeminormResult r;
  r.value_pow_p = pow_p;
  r.value = pow_p <= 0.0 ? 0.0 : std::pow(pow_p, 1.0 / p);
  r.s = s;
  r.p = p;
  r.domain = d;
  r.grid_resolution = g.n;
  return r;
}

PoincareReport poincare_check(const SampledFunction& u, const Box& b,
                              double lambda, double t, double p) {
  if (!(lambda >= 1.0)) throw invalid_input("poincare: lambda must be >= 1");
  const Grid& g = u.grid;
  const Box lb = b.scaled(lambda, g.dim);
  for (int a = 0; a < g.dim; ++a) {
    if (lb.lo[a] < 0.0 || lb.hi[a] > g.length)
      throw invalid_input("poincare: lambda*B exceeds the torus box");
  }
  const Domain lbd = Domain::of_box(lb);
  lbd.validate(g);

  const double m = mean_value(u, Domain::of_box(b));
  const auto runs = domain_runs(lbd, g);
  const auto pw = kernels::make_pow(p);
  PoincareReport rep;
  rep.scaled_box = lb;
  rep.lhs = abs_pow_integral(g, runs, u.values.data(), m, pw);
  const SeminormResult sn = gagliardo_seminorm(u, lbd, t, p);
  rep.rhs = std::pow(lambda, g.dim + t * p) * std::pow(b.diam(g.dim), t * p) *
            sn.value_pow_p;
  rep.ratio = rep.rhs == 0.0 ? (rep.lhs == 0.0 ? 0.0
                                               : std::numeric_limits<double>::infinity())
                             : rep.lhs / rep.rhs;
  return rep;
}

SeminormSplitReport localized_seminorm_split(const SampledFunction& u,
                                             const std::vector<Box>& cover,
                                             const Domain& d, double s,
                                             double eps, double p) {
  if (cover.empty()) throw invalid_input("seminorm split: empty cover");
  if (!(eps >= 0.0 && s + eps < 1.0))
    throw invalid_input("seminorm split: need eps >= 0 and s + eps < 1");
  const Grid& g = u.grid;
  d.validate(g);
  const auto druns = domain_runs(d, g);
  const auto pw = kernels::make_pow(p);
  const KernelTable table = make_kernel_table(g, g.dim + (s + eps) * p);
  const double h2 = g.cell_volume() * g.cell_volume();
  const double* uv = u.values.data();

  SeminormSplitReport rep;
  rep.base = gagliardo_seminorm(u, d, s, p).value_pow_p;
  for (const Box& bk : cover) {
    const Box b2 = bk.scaled(2.0, g.dim);
    const Domain b2d = Domain::of_box(b2);
    b2d.validate(g);
    const auto b2runs = domain_runs(b2d, g);
    for (const auto& r : b2runs)
      for (std::size_t i = r.begin; i < r.end; ++i)
        if (!d.contains(g, i))
          throw invalid_input("seminorm split: doubled cover box leaves the domain");

    rep.covered += gagliardo_seminorm(u, b2d, s + eps, p).value_pow_p;

    const auto bruns = domain_runs(Domain::of_box(bk), g);
    const auto outer = runs_difference(druns, b2runs);
    const double tail_k =
        cross_pair_sum(table, g, bruns, outer, uv, nullptr, RowKind::diff_pow, pw) * h2;
    rep.tail_per_box.push_back(tail_k);
    rep.tail += tail_k;
    const double ck = rep.base == 0.0
                          ? 0.0
                          : tail_k * std::pow(bk.diam(g.dim), eps * p) / rep.base;
    rep.constant_per_box.push_back(ck);
    rep.max_constant = std::max(rep.max_constant, ck);
  }
  return rep;
}

}  // namespace fraclab
