#include "fraclab/commutator.hpp"

#include <cmath>

#include "fraclab/reduce.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

double CommutatorConfig::resolved_t(int dim) const {
  return t != 0.0 ? t : 0.5 * (dim - eps * p);
}

void CommutatorConfig::validate(int dim) const {
  if (!(s > 0.0 && s < 1.0)) throw invalid_input("commutator: s must lie in (0,1)");
  if (!(p >= 2.0)) throw invalid_input("commutator: p must lie in [2,inf)");
  if (!(eps >= 0.0)) throw invalid_input("commutator: eps must be >= 0");
  if (!(s + eps < 1.0)) throw invalid_input("commutator: s + eps must stay below 1");
  const double tt = resolved_t(dim);
  if (!(tt > 0.0 && tt < dim))
    throw invalid_input("commutator: internal exponent t must lie in (0,dim)");
  if (!(tt + eps * p < dim))
    throw invalid_input("commutator: kernel admissibility needs t + eps*p < dim");
}

double torus_point_dist(const Grid& g, const std::array<double, 2>& a,
                        const std::array<double, 2>& b) {
  double acc = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    double d = std::abs(a[ax] - b[ax]);
    d = std::min(d, g.length - d);
    acc += d * d;
  }
  return std::sqrt(acc);
}

namespace {
void check_distinct(double dxy, double dxz, double dyz, const char* who) {
  if (!(dxy > 0.0 && dxz > 0.0 && dyz > 0.0))
    throw invalid_input(std::string(who) + ": points must be pairwise distinct");
}
}  // namespace

double kappa_eps(const Grid& g, const std::array<double, 2>& x,
                 const std::array<double, 2>& y, const std::array<double, 2>& z,
                 double t, double eps, double p) {
  const double dxy = torus_point_dist(g, x, y);
  const double dxz = torus_point_dist(g, x, z);
  const double dyz = torus_point_dist(g, y, z);
  check_distinct(dxy, dxz, dyz, "kappa_eps");
  const int n = g.dim;
  const double base = std::pow(dxz, t - n) - std::pow(dyz, t - n);
  if (eps == 0.0) return base - base;  // kappa_0 vanishes identically
  const double shifted =
      (std::pow(dxz, t + eps * p - n) - std::pow(dyz, t + eps * p - n)) /
      std::pow(dxy, eps * p);
  return shifted - base;
}

double k_delta(const Grid& g, const std::array<double, 2>& x,
               const std::array<double, 2>& y, const std::array<double, 2>& z,
               double t, double delta, double p) {
  const double dxy = torus_point_dist(g, x, y);
  const double dxz = torus_point_dist(g, x, z);
  const double dyz = torus_point_dist(g, y, z);
  check_distinct(dxy, dxz, dyz, "k_delta");
  const int n = g.dim;
  return p * (std::pow(dxz, t + delta * p - n) * std::log(dxz / dxy) -
              std::pow(dyz, t + delta * p - n) * std::log(dyz / dxy));
}

double k_log(const Grid& g, const std::array<double, 2>& x,
             const std::array<double, 2>& y, const std::array<double, 2>& z,
             double alpha) {
  const double dxy = torus_point_dist(g, x, y);
  const double dxz = torus_point_dist(g, x, z);
  const double dyz = torus_point_dist(g, y, z);
  check_distinct(dxy, dxz, dyz, "k_log");
  const int n = g.dim;
  return std::pow(dxz, alpha - n) * std::log(dxz / dxy) -
         std::pow(dyz, alpha - n) * std::log(dyz / dxy);
}

namespace {

void check_support(const SampledFunction& phi, const Domain& b) {
  double peak = 0.0;
  for (double v : phi.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    if (std::abs(phi.values[i]) > 1e-14 * peak && !b.contains(phi.grid, i))
      throw invalid_input("commutator: phi is not supported inside B");
  }
}

double analytic_c(int dim, double t, double eps, double p) {
  if (eps == 0.0) return 1.0;
  return gamma_factor(dim, t) / gamma_factor(dim, t + eps * p);
}

struct ProbePair {
  SampledFunction u, phi;
};

// fixed 4-pair probe family used only for calibration; held-out functions in
// the scaling tests must not come from here
std::vector<ProbePair> calibration_probes(const Grid& g, const Domain& b,
                                          std::uint64_t seed) {
  std::vector<ProbePair> pairs;
  const Box& box = b.boxes.front();
  for (int k = 0; k < 4; ++k) {
    ProbePair pp;
    pp.u = make_preset("random_trig", g,
                       {{"seed", static_cast<double>(seed + k)}, {"kmax", 6.0}});
    const double shrink = 0.55 + 0.1 * k;
    PresetParams prm;
    prm["lo"] = box.center(0) - 0.5 * shrink * box.width(0);
    prm["hi"] = box.center(0) + 0.5 * shrink * box.width(0);
    prm["sigma"] = box.width(0) * (0.08 + 0.03 * k);
    if (g.dim == 2) {
      prm["lo1"] = box.center(1) - 0.5 * shrink * box.width(1);
      prm["hi1"] = box.center(1) + 0.5 * shrink * box.width(1);
    }
    pp.phi = make_preset("gaussian_bump", g, prm);
    pairs.push_back(std::move(pp));
  }
  return pairs;
}

}  // namespace

double calibrate_c(const Grid& g, const Domain& b, const CommutatorConfig& cfg) {
  cfg.validate(g.dim);
  if (cfg.eps == 0.0) return 1.0;
  const auto probes = calibration_probes(g, b, cfg.calibration_seed);
  double num = 0.0, den = 0.0;
  for (const auto& pp : probes) {
    const double a =
        plap_pairing(pp.u, pp.phi, b, cfg.s + cfg.eps, cfg.p).value;
    const SampledFunction lphi = frac_laplacian(pp.phi, cfg.eps * cfg.p);
    const double bb = plap_pairing(pp.u, lphi, b, cfg.s, cfg.p).value;
    num += a * bb;
    den += bb * bb;
  }
  if (den == 0.0) return analytic_c(g.dim, cfg.resolved_t(g.dim), cfg.eps, cfg.p);
  return num / den;
}

CommutatorResult commutator_R(const SampledFunction& u, const SampledFunction& phi,
                              const Domain& b, const CommutatorConfig& cfg) {
  const Grid& g = u.grid;
  cfg.validate(g.dim);
  b.validate(g);
  check_support(phi, b);

  CommutatorResult out;
  out.t = cfg.resolved_t(g.dim);
  out.pairing_high = plap_pairing(u, phi, b, cfg.s + cfg.eps, cfg.p).value;
  if (cfg.eps == 0.0) {
    // L^0 acts as the identity on the mean-free part and pairings ignore
    // constants, so both terms coincide exactly
    out.c_value = 1.0;
    out.pairing_shifted = out.pairing_high;
    out.value = 0.0;
    return out;
  }
  out.c_value = cfg.c_mode == CMode::analytic
                    ? analytic_c(g.dim, out.t, cfg.eps, cfg.p)
                    : calibrate_c(g, b, cfg);
  const SampledFunction lphi = frac_laplacian(phi, cfg.eps * cfg.p);
  out.pairing_shifted = plap_pairing(u, lphi, b, cfg.s, cfg.p).value;
  out.value = out.pairing_high - out.c_value * out.pairing_shifted;
  return out;
}

// --- logarithmic potential ---------------------------------------------------

void LogKernelParams::validate(int dim) const {
  if (!(alpha > 0.0 && alpha < dim))
    throw invalid_input("log potential: alpha must lie in (0,dim)");
  if (!(beta > 0.0 && beta < dim))
    throw invalid_input("log potential: beta must lie in (0,dim)");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw invalid_input("log potential: gamma must lie in (0,1)");
  if (!(s() > 0.0 && s() < 1.0))
    throw invalid_input("log potential: s = gamma + beta - alpha must lie in (0,1)");
}

double log_potential_A(const SampledFunction& phi, const LogKernelParams& prm,
                       double p) {
  const Grid& g = phi.grid;
  if (g.dim != 1) throw invalid_input("log potential: only dim = 1 is supported");
  if (!(p > 1.0)) throw invalid_input("log potential: p must lie in (1,inf)");
  prm.validate(g.dim);

  const int n = g.n;
  const double h = g.h();
  const std::vector<double>& gz = frac_laplacian(phi, prm.beta).values;

  // separation tables: kernel values depend only on the wrapped separation
  std::vector<double> pw(n, 0.0), lg(n, 0.0), aw(n, 0.0), wgam(n, 0.0);
  for (int m = 1; m < n; ++m) {
    const double d = g.torus_dist(m);
    pw[m] = std::pow(d, prm.alpha - 1.0);
    lg[m] = std::log(d);
    aw[m] = pw[m] * lg[m];
    wgam[m] = std::pow(d, -(1.0 + prm.gamma * p));
  }

  // correlations S_A(x) = sum_{z != x} pw(d(x,z)) log d(x,z) g(z) h, same for S_P
  std::vector<double> sa(n), sp(n);
  parallel_chunks(n, [&](std::size_t bgn, std::size_t end) {
    for (std::size_t i = bgn; i < end; ++i) {
      double a = kernels::dot(gz.data() + i, aw.data(), n - i) +
                 kernels::dot(gz.data(), aw.data() + (n - i), i);
      double b = kernels::dot(gz.data() + i, pw.data(), n - i) +
                 kernels::dot(gz.data(), pw.data() + (n - i), i);
      sa[i] = a * h;
      sp[i] = b * h;
    }
  });

  const auto pws = kernels::make_pow(p);
  const double total = parallel_reduce(n, [&](std::size_t xi) {
    const long x = static_cast<long>(xi);
    double acc = 0.0;
    for (long y = x + 1; y < n; ++y) {
      const int m = static_cast<int>(y - x);
      const double inner_a = (sa[x] - aw[m] * gz[y] * h) - (sa[y] - aw[m] * gz[x] * h);
      const double inner_p = (sp[x] - pw[m] * gz[y] * h) - (sp[y] - pw[m] * gz[x] * h);
      const double tval = inner_a - lg[m] * inner_p;
      acc += kernels::abs_pow(tval, pws) * wgam[m];
    }
    return acc;
  });
  // x != y counts ordered pairs: the integrand is |T|^p-symmetric
  const double apow = 2.0 * total * h * h;
  return std::pow(apow, 1.0 / p);
}

double log_potential_A_reference(const SampledFunction& phi,
                                 const LogKernelParams& prm, double p) {
  const Grid& g = phi.grid;
  if (g.dim != 1) throw invalid_input("log potential: only dim = 1 is supported");
  prm.validate(g.dim);
  const int n = g.n;
  const double h = g.h();
  const std::vector<double>& gz = frac_laplacian(phi, prm.beta).values;
  const auto pws = kernels::make_pow(p);

  const double total = parallel_reduce(n, [&](std::size_t xi) {
    const int x = static_cast<int>(xi);
    const std::array<double, 2> xp{g.coord(x), 0.0};
    double acc = 0.0;
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      const std::array<double, 2> yp{g.coord(y), 0.0};
      double t = 0.0;
      for (int z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        t += k_log(g, xp, yp, {g.coord(z), 0.0}, prm.alpha) * gz[z];
      }
      t *= h;
      acc += kernels::abs_pow(t, pws) *
             std::pow(g.torus_dist(y - x), -(1.0 + prm.gamma * p));
    }
    return acc;
  });
  return std::pow(total * h * h, 1.0 / p);
}

// --- sweep -------------------------------------------------------------------

SlopeFit fit_loglog_slope(const std::vector<double>& x,
                          const std::vector<double>& y) {
  SlopeFit fit;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return fit;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0)) return fit;  // undefined
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::abs(y[i]));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - my - fit.slope * (lx[i] - mx);
    ss += r * r;
  }
  fit.stderr_slope = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  fit.defined = true;
  return fit;
}

SweepResult eps_sweep_experiment(const SampledFunction& u,
                                 const SampledFunction& phi, const Domain& b,
                                 double s, double p,
                                 const std::vector<double>& eps_list,
                                 CMode c_mode) {
  if (eps_list.empty()) throw invalid_input("eps sweep: empty eps list");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i - 1]))
      throw invalid_input("eps sweep: eps list must be strictly increasing");

  SweepResult out;
  std::vector<double> xs, ys;
  for (double eps : eps_list) {
    CommutatorConfig cfg;
    cfg.s = s;
    cfg.p = p;
    cfg.eps = eps;
    cfg.c_mode = c_mode;
    const CommutatorResult r = commutator_R(u, phi, b, cfg);
    SweepRow row;
    row.eps = eps;
    row.r_value = r.value;
    row.c_value = r.c_value;
    row.t = r.t;
    row.u_seminorm = gagliardo_seminorm(u, b, s + eps, p).value;
    row.phi_seminorm =
        gagliardo_seminorm(phi, Domain::full(u.grid), s + eps, p).value;
    const double denom = eps * std::pow(row.u_seminorm, p - 1.0) * row.phi_seminorm;
    row.normalized_ratio = denom > 0.0 ? std::abs(r.value) / denom : 0.0;
    out.rows.push_back(row);
    xs.push_back(eps);
    ys.push_back(r.value);
  }
  const SlopeFit fit = fit_loglog_slope(xs, ys);
  out.slope_defined = fit.defined;
  out.slope = fit.slope;
  out.slope_stderr = fit.stderr_slope;
  return out;
}

}  // namespace fraclab
