#ifndef FRACLAB_COMMUTATOR_HPP
#define FRACLAB_COMMUTATOR_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/pairing.hpp"

namespace fraclab {

enum class CMode { analytic, calibrated };

/** Configuration of the nonlinear commutator
 *   R(u,phi) = pairing_{s+eps}(u, phi) - c * pairing_s(u, L^{eps p} phi),
 * where L^{eps p} is the order-(eps p) fractional Laplacian. The internal
 * Riesz exponent t parametrizes the analytic constant
 *   c = gamma(dim,t) / gamma(dim,t+eps p),  gamma(n,t) = pi^{n/2} 2^t
 *   Gamma(t/2) / Gamma((n-t)/2),
 * which tends to 1 as eps -> 0. */
struct CommutatorConfig {
  double s = 0.5;
  double p = 2.0;
  double eps = 0.0;
  double t = 0.0;  // 0 requests the default (dim - eps*p)/2
  CMode c_mode = CMode::analytic;
  std::uint64_t calibration_seed = 2024;

  double resolved_t(int dim) const;
  void validate(int dim) const;
};

/** Torus distance between arbitrary points (not necessarily nodes). */
double torus_point_dist(const Grid& g, const std::array<double, 2>& a,
                        const std::array<double, 2>& b);

/** Commutator kernel
 *   kappa_eps = (|x-z|^{t+eps p-n} - |y-z|^{t+eps p-n}) / |x-y|^{eps p}
 *               - (|x-z|^{t-n} - |y-z|^{t-n}),
 * identically zero at eps = 0. All distances are torus distances. */
double kappa_eps(const Grid& g, const std::array<double, 2>& x,
                 const std::array<double, 2>& y, const std::array<double, 2>& z,
                 double t, double eps, double p);

/** k_delta = |x-y|^{delta p} d/d(delta) kappa_delta
 *          = p ( |x-z|^{t+delta p-n} log(|x-z|/|x-y|)
 *               - |y-z|^{t+delta p-n} log(|y-z|/|x-y|) ). */
double k_delta(const Grid& g, const std::array<double, 2>& x,
               const std::array<double, 2>& y, const std::array<double, 2>& z,
               double t, double delta, double p);

/** Logarithmic potential kernel with exponent alpha:
 *   k = |x-z|^{alpha-n} log(|x-z|/|x-y|) - |y-z|^{alpha-n} log(|y-z|/|x-y|). */
double k_log(const Grid& g, const std::array<double, 2>& x,
             const std::array<double, 2>& y, const std::array<double, 2>& z,
             double alpha);

struct CommutatorResult {
  double value = 0.0;           // R(u, phi)
  double pairing_high = 0.0;    // order s+eps pairing of (u, phi)
  double pairing_shifted = 0.0; // order s pairing of (u, L^{eps p} phi)
  double c_value = 1.0;
  double t = 0.0;
};

CommutatorResult commutator_R(const SampledFunction& u, const SampledFunction& phi,
                              const Domain& b, const CommutatorConfig& cfg);

/** Least-squares calibration of c on a fixed 4-pair probe family at the given
 * eps (minimizes the summed squared commutator over the probes). */
double calibrate_c(const Grid& g, const Domain& b, const CommutatorConfig& cfg);

// --- logarithmic potential functional -------------------------------------

struct LogKernelParams {
  double alpha = 0.5;
  double beta = 0.6;
  double gamma = 0.4;
  double s() const { return gamma + beta - alpha; }
  void validate(int dim) const;
};

/** A(phi) = ( sum_{x != y} | sum_{z not in {x,y}} k(x,y,z) L^beta phi(z) h |^p
 *            d(x,y)^{-1-gamma p} h^2 )^{1/p},  1D only.
 * Evaluated by an exact separable reorganization of the triple sum (O(N^2)). */
double log_potential_A(const SampledFunction& phi, const LogKernelParams& prm,
                       double p);

/** Direct triple-sum reference evaluation, O(N^3); equivalence-tested against
 * the separable path. */
double log_potential_A_reference(const SampledFunction& phi,
                                 const LogKernelParams& prm, double p);

// --- scaling experiment -----------------------------------------------------

struct SweepRow {
  double eps = 0.0;
  double r_value = 0.0;
  double u_seminorm = 0.0;    // [u]_{W^{s+eps,p}(B)}
  double phi_seminorm = 0.0;  // [phi]_{W^{s+eps,p}(torus)}
  double normalized_ratio = 0.0;
  double c_value = 1.0;
  double t = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool slope_defined = false;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

SweepResult eps_sweep_experiment(const SampledFunction& u,
                                 const SampledFunction& phi, const Domain& b,
                                 double s, double p,
                                 const std::vector<double>& eps_list,
                                 CMode c_mode);

/** Slope of log|y| vs log(x) with standard error; defined only when all y
 * are nonzero. */
struct SlopeFit {
  bool defined = false;
  double slope = 0.0;
  double stderr_slope = 0.0;
};
SlopeFit fit_loglog_slope(const std::vector<double>& x,
                          const std::vector<double>& y);

}  // namespace fraclab

#endif
