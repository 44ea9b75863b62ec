#include "fraclab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/reduce.hpp"

namespace fraclab {

void DirichletProblem::validate() const {
  const Grid& gr = f.grid;
  if (!(gr == g.grid)) throw invalid_input("problem: f and g live on different grids");
  omega.validate(gr);
  params.validate_basic(gr.dim);
  if (!(params.s > 0.0 && params.s < 1.0 && params.p >= 2.0))
    throw invalid_input("problem: needs s in (0,1) and p in [2,inf)");
  if (runs_point_count(domain_runs(omega, gr)) >= gr.size())
    throw invalid_input("problem: Omega must be strictly inside the torus box");
  f.check_finite();
  g.check_finite();
}

namespace {

struct Workspace {
  Grid grid;
  std::vector<IndexRun> runs;
  std::vector<std::size_t> pts;
  KernelTable table;
  kernels::PowSpec pw;
  std::vector<double> f_tilde;  // mean-free forcing on Omega (0 outside)
  double f_mean = 0.0;
  double h_dim = 0.0;
  double h_2dim = 0.0;
};

Workspace make_workspace(const DirichletProblem& prob) {
  Workspace w;
  w.grid = prob.f.grid;
  w.runs = domain_runs(prob.omega, w.grid);
  for (const auto& r : w.runs)
    for (std::size_t i = r.begin; i < r.end; ++i) w.pts.push_back(i);
  w.table = make_kernel_table(w.grid, w.grid.dim + prob.params.s * prob.params.p);
  w.pw = kernels::make_pow(prob.params.p);
  w.h_dim = w.grid.cell_volume();
  w.h_2dim = w.h_dim * w.h_dim;
  w.f_mean = mean_value(prob.f, prob.omega);
  w.f_tilde.assign(w.grid.size(), 0.0);
  for (std::size_t i : w.pts) w.f_tilde[i] = prob.f.values[i] - w.f_mean;
  return w;
}

double energy_ws(const Workspace& w, const DirichletProblem& prob,
                 const std::vector<double>& u) {
  const double half = pair_sum_upper(w.table, w.grid, w.runs, u.data(), u.data(),
                                     RowKind::pair, w.pw);
  const double semi_p = 2.0 * half * w.h_2dim;
  double fu = 0.0;
  for (std::size_t i : w.pts) fu += w.f_tilde[i] * u[i];
  return semi_p / prob.params.p - fu * w.h_dim;
}

// gradient wrt the interior values; also returns the RMS nodewise residual
double gradient_ws(const Workspace& w, const std::vector<double>& u,
                   std::vector<double>& grad) {
  const std::size_t m = w.pts.size();
  grad.resize(m);
  const std::vector<double> rows = parallel_map(m, [&](std::size_t k) {
    return row_over_runs(w.table, w.grid, w.runs, u.data(), nullptr, w.pts[k],
                         false, RowKind::phi, w.pw);
  });
  double ss = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    grad[k] = 2.0 * rows[k] * w.h_2dim - w.f_tilde[w.pts[k]] * w.h_dim;
    ss += grad[k] * grad[k];
  }
  // grad_i = h^dim (operator value - f_i); report the O(1) residual RMS
  return std::sqrt(ss / static_cast<double>(m)) / w.h_dim;
}

void check_exterior(const SampledFunction& u, const DirichletProblem& prob) {
  const Grid& gr = prob.f.grid;
  for (std::size_t i = 0; i < gr.size(); ++i) {
    if (!prob.omega.contains(gr, i) && u.values[i] != prob.g.values[i])
      throw invalid_input("energy: iterate violates the exterior constraint");
  }
}

}  // namespace

double energy(const SampledFunction& u, const DirichletProblem& prob) {
  prob.validate();
  if (!(u.grid == prob.f.grid))
    throw invalid_input("energy: u lives on a different grid");
  check_exterior(u, prob);
  const Workspace w = make_workspace(prob);
  return energy_ws(w, prob, u.values);
}

SolverState solve(const DirichletProblem& prob, double tol, int max_iter,
                  const SolveOptions& opts) {
  prob.validate();
  if (!(tol > 0.0)) throw invalid_input("solve: tol must be > 0");
  if (max_iter < 0) throw invalid_input("solve: max_iter must be >= 0");

  const Workspace w = make_workspace(prob);
  SolverState st;
  st.u = prob.g;  // exterior frozen; interior starts from the exterior datum
  st.f_mean_removed = w.f_mean;

  std::vector<double> u = st.u.values;
  std::vector<double> grad;
  double e = energy_ws(w, prob, u);
  st.energy_history.push_back(e);
  double step = 1.0;

  for (int it = 0; it < max_iter; ++it) {
    st.grad_norm = gradient_ws(w, u, grad);
    if (st.grad_norm <= tol) {
      st.converged = true;
      break;
    }
    double g2 = 0.0;
    for (double v : grad) g2 += v * v;

    // Armijo backtracking, warm-started from twice the previous step
    step *= 2.0;
    std::vector<double> trial = u;
    bool accepted = false;
    for (int bt = 0; bt < 200; ++bt) {
      for (std::size_t k = 0; k < w.pts.size(); ++k)
        trial[w.pts[k]] = u[w.pts[k]] - step * grad[k];
      const double et = energy_ws(w, prob, trial);
      if (et <= e - 1e-4 * step * g2) {
        u.swap(trial);
        e = et;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at rounding level
    st.iteration = it + 1;
    st.energy_history.push_back(e);
  }
  if (!st.converged) st.grad_norm = gradient_ws(w, u, grad);
  if (st.grad_norm <= tol) st.converged = true;

  st.u.values = u;
  st.energy = e;

  // residual functional r[phi] = pairing(u,phi,Omega) - integral f phi over a
  // unit-seminorm dictionary supported in Omega
  const auto dict = test_dictionary(w.grid, prob.omega, prob.params.s,
                                    prob.params.p, opts.dual_dictionary_m,
                                    opts.dual_seed);
  st.dual_residual = dictionary_sup(dict, [&](const SampledFunction& phi) {
    const double pr =
        plap_pairing(st.u, phi, prob.omega, prob.params.s, prob.params.p).value;
    double fphi = 0.0;
    for (std::size_t i : w.pts) fphi += w.f_tilde[i] * phi.values[i];
    return pr - fphi * w.h_dim;
  });
  return st;
}

LocalizeInfo localize_info(const Grid& g, const Domain& omega1,
                           const Domain& omega2) {
  omega1.validate(g);
  omega2.validate(g);
  LocalizeInfo info;
  double gap = g.length;  // +inf surrogate when Omega2 covers everything
  bool any_outside = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (omega2.contains(g, i)) continue;
    any_outside = true;
    std::array<double, 2> x{g.coord(static_cast<int>(i % g.n)),
                            g.dim == 2 ? g.coord(static_cast<int>(i / g.n)) : 0.0};
    gap = std::min(gap, omega1.distance(g, x));
  }
  if (any_outside && gap < 2.0 * g.h() - 1e-12)
    throw invalid_input("localize: margin between Omega1 and Omega2 is below 2 cells");
  info.gap = any_outside ? gap : g.length;
  info.cutoff_lipschitz = (15.0 / 8.0) / info.gap;
  return info;
}

SampledFunction localize(const SampledFunction& u, const Domain& omega1,
                         const Domain& omega2) {
  const Grid& g = u.grid;
  const LocalizeInfo info = localize_info(g, omega1, omega2);
  const double m = mean_value(u, omega1);
  SampledFunction out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::array<double, 2> x{g.coord(static_cast<int>(i % g.n)),
                            g.dim == 2 ? g.coord(static_cast<int>(i / g.n)) : 0.0};
    const double eta = smooth_step_quintic(1.0 - omega1.distance(g, x) / info.gap);
    out.values[i] = eta * (u.values[i] - m);
  }
  return out;
}

CaccioppoliReport caccioppoli_check(const SampledFunction& u, const Box& b,
                                    double s, double p, double delta,
                                    int dictionary_m, std::uint64_t seed) {
  if (!(delta > 0.0)) throw invalid_input("caccioppoli: delta must be > 0");
  const Grid& g = u.grid;
  const Box b4 = b.scaled(4.0, g.dim);
  for (int a = 0; a < g.dim; ++a)
    if (b4.lo[a] < 0.0 || b4.hi[a] > g.length)
      throw invalid_input("caccioppoli: 4B exceeds the torus box");
  const Domain db = Domain::of_box(b);
  const Domain d2 = Domain::of_box(b.scaled(2.0, g.dim));
  const Domain d4 = Domain::of_box(b4);

  const double pprime = p / (p - 1.0);
  CaccioppoliReport rep;
  rep.lhs = gagliardo_seminorm(u, db, s, p).value_pow_p;
  rep.part_fine = std::pow(delta, p) * gagliardo_seminorm(u, d4, s, p).value_pow_p;

  const auto dict = test_dictionary(g, d2, s, p, dictionary_m, seed);
  rep.dual_sup = dictionary_sup(dict, [&](const SampledFunction& phi) {
    return plap_pairing(u, phi, d4, s, p).value;
  });
  rep.part_dual = std::pow(delta, -pprime) * std::pow(rep.dual_sup, pprime);

  const double mean_b = mean_value(u, db);
  const auto runs4 = domain_runs(d4, g);
  const double lower = abs_pow_integral(g, runs4, u.values.data(), mean_b,
                                        kernels::make_pow(p));
  rep.part_lower =
      std::pow(delta, -pprime) * std::pow(b.diam(g.dim), -s * p) * lower;

  const double denom = rep.part_dual + rep.part_lower;
  const double excess = rep.lhs - rep.part_fine;
  rep.constant = denom > 0.0 ? std::max(0.0, excess / denom) : 0.0;
  return rep;
}

std::vector<ProbeRow> differentiability_probe(const DirichletProblem& prob,
                                              const SampledFunction& u,
                                              const Domain& omega1,
                                              const std::vector<double>& eps_list,
                                              int dictionary_m,
                                              std::uint64_t seed) {
  prob.validate();
  const Grid& g = u.grid;
  omega1.validate(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (omega1.contains(g, i) && !prob.omega.contains(g, i))
      throw invalid_input("probe: Omega1 must lie inside Omega");

  const double s = prob.params.s, p = prob.params.p;
  const double base = gagliardo_seminorm(u, prob.omega, s, p).value;
  const double h_dim = g.cell_volume();
  const double f_mean = mean_value(prob.f, prob.omega);
  const auto runs = domain_runs(prob.omega, g);

  std::vector<ProbeRow> rows;
  for (double eps : eps_list) {
    if (!(eps > 0.0 && s + eps < 1.0))
      throw invalid_input("probe: eps must satisfy 0 < eps and s + eps < 1");
    const double t_dual = s - eps * (p - 1.0);
    if (!(t_dual > 0.0))
      throw invalid_input("probe: s - eps (p-1) must stay positive");
    ProbeRow row;
    row.eps = eps;
    row.base_seminorm = base;
    row.seminorm_high = gagliardo_seminorm(u, omega1, s + eps, p).value;
    const auto dict = test_dictionary(g, prob.omega, t_dual, p, dictionary_m, seed);
    row.f_dual = dictionary_sup(dict, [&](const SampledFunction& phi) {
      double acc = 0.0;
      for (const auto& r : runs)
        for (std::size_t i = r.begin; i < r.end; ++i)
          acc += (prob.f.values[i] - f_mean) * phi.values[i];
      return acc * h_dim;
    });
    row.implied_c = row.seminorm_high / (row.f_dual + row.base_seminorm);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fraclab
