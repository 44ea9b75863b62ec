#ifndef FRACLAB_SPECTRAL_HPP
#define FRACLAB_SPECTRAL_HPP

#include <cmath>
#include <functional>
#include <map>

#include "fraclab/grid.hpp"

namespace fraclab {

/** F^{-1}( sym(|xi|) F f ) on the torus frequencies xi = 2 pi k / L.
 * The zero mode is set to zero_mode * mean(f) * size. */
SampledFunction apply_symbol(const SampledFunction& f,
                             const std::function<double(double)>& sym,
                             double zero_mode);

/** Order-t fractional Laplacian, Fourier symbol |xi|^t, zero mode -> 0.
 * t in (0,2]. The classical (-Delta)^s is order t = 2s here. */
SampledFunction frac_laplacian(const SampledFunction& f, double t);

struct RieszResult {
  SampledFunction value;
  double subtracted_mean = 0.0;  // mean removed from the input
};

/** Riesz potential of order t in (0,dim): symbol |xi|^{-t} on the mean-free
 * part of g; the removed mean is reported. */
RieszResult riesz_potential(const SampledFunction& g, double t);

/** Real-space variant c(dim,t) sum_z d(x,z)^{t-dim} g(z) h^dim (mean removed
 * first, z = x excluded). Kept for cross-validation against the spectral
 * route; the difference is the periodization error of the kernel. */
RieszResult riesz_potential_realspace(const SampledFunction& g, double t);

/** Riesz kernel normalization Gamma((dim-t)/2) / (2^t pi^{dim/2} Gamma(t/2)). */
double riesz_constant(int dim, double t);
/** Its reciprocal pi^{dim/2} 2^t Gamma(t/2) / Gamma((dim-t)/2). */
double gamma_factor(int dim, double t);

/** Grid L^p norm (sum |f_i|^p h^dim)^{1/p}. */
double lp_norm(const SampledFunction& f, double p);

/** Dyadic filter bank. The profile is chi(r) - chi(2r) for an exactly
 * compactly supported C^inf step chi, so sum_j profile(r/2^j) telescopes to 1
 * for every r in [2^{j_min}, 2^{j_max}]. */
struct FilterBank {
  int j_min = 0;
  int j_max = -1;

  static double chi(double r);      // 1 on r<=1, 0 on r>=2, C^inf monotone
  static double profile(double r);  // chi(r) - chi(2r), supported in [1/2,2]

  double level_filter(int j, double xi_abs) const {
    return profile(xi_abs * std::pow(2.0, -j));
  }

  /** Levels covering every nonzero frequency representable on the grid. */
  static FilterBank for_grid(const Grid& g);

  void validate(const Grid& g) const;
};

struct LpDecomposition {
  std::map<int, SampledFunction> pieces;  // level j -> band-passed function
  SampledFunction residual;               // uncovered frequencies plus the mean
};

/** Littlewood-Paley projections f_j = F^{-1}(profile(|xi|/2^j) F f). The
 * residual is formed spectrally from 1 - sum_j profile, so the reconstruction
 * sum_j f_j + residual = f is a real check, not an identity by construction. */
LpDecomposition lp_project(const SampledFunction& f, const FilterBank& bank);

/** ( sum_j 2^{jsp} ||f_j||_p^p )^{1/p} over the bank's levels. */
double triebel_norm(const SampledFunction& f, double s, double p,
                    const FilterBank& bank);

}  // namespace fraclab

#endif
