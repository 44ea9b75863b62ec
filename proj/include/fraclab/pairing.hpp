#ifndef FRACLAB_PAIRING_HPP
#define FRACLAB_PAIRING_HPP

#include <array>
#include <cstdint>
#include <functional>

#include "fraclab/grid.hpp"
#include "fraclab/sobolev.hpp"

namespace fraclab {

struct PairingValue {
  double value = 0.0;
  double s = 0.0;
  double p = 0.0;
  Domain domain;
};

/** Distributional p-Laplacian pairing over D:
 *   sum_{i != j in D} |u_i-u_j|^{p-2}(u_i-u_j)(phi_i-phi_j)
 *                     d(x_i,x_j)^{-dim-sp} h^{2 dim},
 * diagonal excluded; s in (0,1), p in [2,inf). */
PairingValue plap_pairing(const SampledFunction& u, const SampledFunction& phi,
                          const Domain& d, double s, double p);

/** Generalized operator with pluggable kernel and nonlinearity. The kernel is
 * symmetrized to (K(x,y)+K(y,x))/2 before use. */
struct OperatorSpec {
  std::function<double(double)> nonlinearity;  // Phi(t)
  std::function<double(const std::array<double, 2>&, const std::array<double, 2>&)>
      kernel;  // K(x,y), points as torus coordinates
  double c_op = 1.0;
  double s = 0.5;
  double p = 2.0;
  bool plap_exact = false;  // exact specialization, shares the plap code path

  /** The exact p-Laplacian instance (Phi(t)=|t|^{p-2}t, K=d^{-dim-sp}). */
  static OperatorSpec plap(double s, double p);

  /** Checks the comparability bounds on a seeded probe set; throws
   * invalid_input naming the offending sample. */
  void verify_probes(const Grid& g, std::uint64_t seed = 17) const;
};

PairingValue general_pairing(const SampledFunction& u, const SampledFunction& phi,
                             const Domain& d, const OperatorSpec& spec);

/** Deterministic dictionary description for dual-norm lower bounds. */
struct TestSpace {
  double t = 0.5;         // seminorm order of the normalization
  int m = 32;             // dictionary size
  std::uint64_t seed = 1;
};

/** m compactly supported (plain and trig-modulated) bumps inside D, each
 * normalized to unit W^{t,p} seminorm on the full torus. A dictionary of
 * size m is a prefix of any larger one with the same seed. */
std::vector<SampledFunction> test_dictionary(const Grid& g, const Domain& d,
                                             double t, double p, int m,
                                             std::uint64_t seed);

/** max_phi |plap_pairing(u, phi, D, s, p)| over the dictionary; a lower
 * bound on the dual norm, nondecreasing in m. */
double dual_norm_estimate(const SampledFunction& u, const Domain& d, double s,
                          double p, const TestSpace& space);

/** sup |fn(phi)| over an explicit dictionary (shared by the solver checks). */
double dictionary_sup(const std::vector<SampledFunction>& dict,
                      const std::function<double(const SampledFunction&)>& fn);

}  // namespace fraclab

#endif
