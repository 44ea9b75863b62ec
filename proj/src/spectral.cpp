#include "fraclab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

#include "fraclab/reduce.hpp"
#include "fraclab/simd_kernels.hpp"
#include "fraclab/sobolev.hpp"

namespace fraclab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/** Half-complex spectrum of a real grid function (r2c layout). */
struct Spectrum {
  Grid grid;
  std::vector<std::complex<double>> c;  // 1D: n/2+1; 2D: n x (n/2+1)

  std::size_t count() const {
    const std::size_t half = static_cast<std::size_t>(grid.n) / 2 + 1;
    return grid.dim == 1 ? half : static_cast<std::size_t>(grid.n) * half;
  }

  /** |xi| for the stored coefficient index. */
  double xi_abs(std::size_t idx) const {
    const double base = 2.0 * M_PI / grid.length;
    const std::size_t half = static_cast<std::size_t>(grid.n) / 2 + 1;
    if (grid.dim == 1) return base * static_cast<double>(idx);
    const long ky_raw = static_cast<long>(idx / half);
    const long kx = static_cast<long>(idx % half);
    const long ky = ky_raw <= grid.n / 2 ? ky_raw : ky_raw - grid.n;
    return base * std::hypot(static_cast<double>(kx), static_cast<double>(ky));
  }
};

Spectrum forward(const SampledFunction& f) {
  Spectrum s;
  s.grid = f.grid;
  s.c.resize(s.count());
  const int n = f.grid.n;
  std::vector<double> in(f.values);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (f.grid.dim == 1) {
      plan = fftw_plan_dft_r2c_1d(n, in.data(),
                                  reinterpret_cast<fftw_complex*>(s.c.data()),
                                  FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_dft_r2c_2d(n, n, in.data(),
                                  reinterpret_cast<fftw_complex*>(s.c.data()),
                                  FFTW_ESTIMATE);
    }
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return s;
}

SampledFunction inverse(const Spectrum& s) {
  SampledFunction f(s.grid);
  const int n = s.grid.n;
  std::vector<std::complex<double>> c(s.c);  // c2r destroys its input
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (s.grid.dim == 1) {
      plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(c.data()),
                                  f.values.data(), FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(c.data()),
                                  f.values.data(), FFTW_ESTIMATE);
    }
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(s.grid.size());
  for (double& v : f.values) v *= scale;
  return f;
}

SampledFunction apply_symbol_spec(const Spectrum& s,
                                  const std::function<double(double)>& sym,
                                  double zero_mode) {
  Spectrum t = s;
  for (std::size_t i = 0; i < t.c.size(); ++i) {
    const double r = t.xi_abs(i);
    t.c[i] *= (r == 0.0) ? zero_mode : sym(r);
  }
  return inverse(t);
}

}  // namespace

SampledFunction apply_symbol(const SampledFunction& f,
                             const std::function<double(double)>& sym,
                             double zero_mode) {
  f.check_finite();
  return apply_symbol_spec(forward(f), sym, zero_mode);
}

SampledFunction frac_laplacian(const SampledFunction& f, double t) {
  if (!(t > 0.0 && t <= 2.0))
    throw invalid_input("frac_laplacian: order t must lie in (0,2]");
  return apply_symbol(f, [t](double r) { return std::pow(r, t); }, 0.0);
}

RieszResult riesz_potential(const SampledFunction& g, double t) {
  if (!(t > 0.0 && t < g.grid.dim))
    throw invalid_input("riesz_potential: order t must lie in (0,dim)");
  RieszResult out;
  out.subtracted_mean = mean_value(g, Domain::full(g.grid));
  out.value = apply_symbol(g, [t](double r) { return std::pow(r, -t); }, 0.0);
  return out;
}

double riesz_constant(int dim, double t) {
  return std::tgamma(0.5 * (dim - t)) /
         (std::pow(2.0, t) * std::pow(M_PI, 0.5 * dim) * std::tgamma(0.5 * t));
}

double gamma_factor(int dim, double t) {
  return std::pow(M_PI, 0.5 * dim) * std::pow(2.0, t) * std::tgamma(0.5 * t) /
         std::tgamma(0.5 * (dim - t));
}

RieszResult riesz_potential_realspace(const SampledFunction& g, double t) {
  const Grid& gr = g.grid;
  if (!(t > 0.0 && t < gr.dim))
    throw invalid_input("riesz_potential: order t must lie in (0,dim)");
  RieszResult out;
  out.subtracted_mean = mean_value(g, Domain::full(gr));
  std::vector<double> gz(g.values);
  for (double& v : gz) v -= out.subtracted_mean;

  const KernelTable table = make_kernel_table(gr, gr.dim - t);  // d^{t-dim}
  const double c = riesz_constant(gr.dim, t) * gr.cell_volume();
  const int n = gr.n;
  out.value = SampledFunction(gr);

  if (gr.dim == 1) {
    parallel_chunks(gr.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const double* w = table.w.data();
        double acc = kernels::dot(gz.data() + i, w, n - i);
        acc += kernels::dot(gz.data(), w + (n - i), i);
        out.value.values[i] = c * acc;
      }
    });
  } else {
    parallel_chunks(gr.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const long ix = static_cast<long>(i % n);
        const long iy = static_cast<long>(i / n);
        double acc = 0.0;
        for (long jy = 0; jy < n; ++jy) {
          const double* w = table.row(static_cast<int>(((jy - iy) % n + n) % n));
          const double* grow = gz.data() + jy * n;
          acc += kernels::dot(grow + ix, w, n - ix);
          acc += kernels::dot(grow, w + (n - ix), ix);
        }
        out.value.values[i] = c * acc;
      }
    });
  }
  return out;
}

double lp_norm(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw invalid_input("lp_norm: p must be >= 1");
  const auto pw = kernels::make_pow(p);
  const double s =
      kernels::abs_pow_sum(f.values.data(), f.values.size(), 0.0, pw) *
      f.grid.cell_volume();
  return std::pow(s, 1.0 / p);
}

double FilterBank::chi(double r) { return smooth_step_cinf(2.0 - r); }

double FilterBank::profile(double r) { return chi(r) - chi(2.0 * r); }

FilterBank FilterBank::for_grid(const Grid& g) {
  const double base = 2.0 * M_PI / g.length;
  const double xi_min = base;
  const double xi_max = base * (g.n / 2) * std::sqrt(static_cast<double>(g.dim));
  FilterBank b;
  b.j_min = static_cast<int>(std::floor(std::log2(xi_min)));
  b.j_max = static_cast<int>(std::ceil(std::log2(xi_max)));
  return b;
}

void FilterBank::validate(const Grid& g) const {
  if (j_max < j_min) throw invalid_input("filter bank: empty level range");
  const FilterBank ref = for_grid(g);
  if (j_min > ref.j_min || j_max < ref.j_max)
    throw invalid_input("filter bank: levels do not cover the grid frequencies");
}

LpDecomposition lp_project(const SampledFunction& f, const FilterBank& bank) {
  bank.validate(f.grid);
  const Spectrum spec = forward(f);
  LpDecomposition out;
  for (int j = bank.j_min; j <= bank.j_max; ++j) {
    const double scale = std::pow(2.0, -j);
    out.pieces.emplace(
        j, apply_symbol_spec(
               spec, [&](double r) { return FilterBank::profile(r * scale); }, 0.0));
  }
  out.residual = apply_symbol_spec(
      spec,
      [&](double r) {
        double covered = 0.0;
        for (int j = bank.j_min; j <= bank.j_max; ++j)
          covered += bank.level_filter(j, r);
        return 1.0 - covered;
      },
      1.0);
  return out;
}

double triebel_norm(const SampledFunction& f, double s, double p,
                    const FilterBank& bank) {
  if (!(s > 0.0 && s < 1.0)) throw invalid_input("triebel_norm: s must lie in (0,1)");
  if (!(p > 1.0)) throw invalid_input("triebel_norm: p must lie in (1,inf)");
  const LpDecomposition dec = lp_project(f, bank);
  const auto pw = kernels::make_pow(p);
  double acc = 0.0;
  for (const auto& [j, fj] : dec.pieces) {
    const double norm_p =
        kernels::abs_pow_sum(fj.values.data(), fj.values.size(), 0.0, pw) *
        f.grid.cell_volume();
    acc += std::pow(2.0, j * s * p) * norm_p;
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace fraclab
