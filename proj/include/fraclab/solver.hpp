#ifndef FRACLAB_SOLVER_HPP
#define FRACLAB_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/pairing.hpp"

namespace fraclab {

/** Variational problem: minimize E(u) = (1/p)[u]^p_{W^{s,p}(Omega)} -
 * integral_Omega f u over functions equal to g outside Omega. The forcing is
 * projected to zero mean over Omega (the regional energy is blind to adding
 * constants on Omega, so a mean component would make E unbounded below); the
 * removed mean is reported. */
struct DirichletProblem {
  Domain omega;
  SampledFunction f;
  SampledFunction g;
  FracParams params;

  void validate() const;
};

struct SolverState {
  SampledFunction u;
  double energy = 0.0;
  double dual_residual = 0.0;
  int iteration = 0;
  bool converged = false;
  double grad_norm = 0.0;     // RMS nodewise residual, the stopping quantity
  double f_mean_removed = 0.0;
  std::vector<double> energy_history;  // energy after each accepted step
};

struct SolveOptions {
  int dual_dictionary_m = 32;
  std::uint64_t dual_seed = 7;
};

/** Energy functional; u must match g bit-exactly outside Omega. */
double energy(const SampledFunction& u, const DirichletProblem& prob);

/** Backtracking gradient descent on the interior values. Stops when the RMS
 * nodewise residual falls below tol or after max_iter accepted steps.
 * Non-convergence is reported in the state, not thrown. */
SolverState solve(const DirichletProblem& prob, double tol, int max_iter,
                  const SolveOptions& opts = {});

/** Cutoff localization: eta (u - (u)_{Omega1}) with a quintic-smoothstep eta
 * that is exactly 1 on Omega1 and exactly 0 outside Omega2. */
SampledFunction localize(const SampledFunction& u, const Domain& omega1,
                         const Domain& omega2);

struct LocalizeInfo {
  double gap = 0.0;               // distance from Omega1 to the complement of Omega2
  double cutoff_lipschitz = 0.0;  // Lipschitz constant of the cutoff profile
};
LocalizeInfo localize_info(const Grid& g, const Domain& omega1,
                           const Domain& omega2);

struct CaccioppoliReport {
  double lhs = 0.0;        // [u]^p_{W^{s,p}(B)}
  double part_fine = 0.0;  // delta^p [u]^p_{W^{s,p}(4B)}
  double part_dual = 0.0;  // delta^{-p'} (sup_phi pairing)^{p/(p-1)}
  double part_lower = 0.0; // delta^{-p'} diam(B)^{-sp} int_{4B} |u-(u)_B|^p
  double dual_sup = 0.0;
  double constant = 0.0;   // smallest C with lhs <= part_fine + C (rest)
};

/** Interior seminorm vs pairing dual bound plus lower-order term; the sup is
 * a dictionary lower bound, so the reported constant is an upper estimate. */
CaccioppoliReport caccioppoli_check(const SampledFunction& u, const Box& b,
                                    double s, double p, double delta,
                                    int dictionary_m = 32,
                                    std::uint64_t seed = 11);

struct ProbeRow {
  double eps = 0.0;
  double seminorm_high = 0.0;  // [u]_{W^{s+eps,p}(Omega1)}
  double f_dual = 0.0;         // dictionary estimate of ||f|| in the shifted dual
  double base_seminorm = 0.0;  // [u]_{W^{s,p}(Omega)}
  double implied_c = 0.0;      // seminorm_high / (f_dual + base_seminorm)
};

std::vector<ProbeRow> differentiability_probe(const DirichletProblem& prob,
                                              const SampledFunction& u,
                                              const Domain& omega1,
                                              const std::vector<double>& eps_list,
                                              int dictionary_m = 32,
                                              std::uint64_t seed = 13);

}  // namespace fraclab

#endif
