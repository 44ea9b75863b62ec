#ifndef FRACLAB_SOBOLEV_HPP
#define FRACLAB_SOBOLEV_HPP

#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/simd_kernels.hpp"

namespace fraclab {

/** Tabulated singular weight w(i,j) = d(x_i,x_j)^(-expo) on the torus,
 * indexed by the wrapped separation. The diagonal entry is 0, which excludes
 * i = j from every sum that uses the table. */
struct KernelTable {
  int n = 0;
  int dim = 1;
  double expo = 0.0;
  std::vector<double> w;  // size n (1D) or n*n (2D)

  const double* row(int my_wrapped) const {
    return dim == 1 ? w.data() : w.data() + static_cast<std::size_t>(my_wrapped) * n;
  }
};

KernelTable make_kernel_table(const Grid& g, double expo);

enum class RowKind {
  pair,      // phi_p(u_i - u_j) (phi_i - phi_j) w
  phi,       // phi_p(u_i - u_j) w
  diff_pow,  // |u_i - u_j|^p w
};

/** Sum of the row terms of point i against all domain points j (j > i only
 * when upper_only). Accumulation order is fixed by the index order. */
double row_over_runs(const KernelTable& table, const Grid& g,
                     const std::vector<IndexRun>& runs, const double* u,
                     const double* phi, std::size_t i, bool upper_only,
                     RowKind kind, const kernels::PowSpec& p);

/** Sum over unordered pairs {i,j} of the domain, i < j. Deterministic for
 * any thread count (per-row values combined by fixed tree reduction). */
double pair_sum_upper(const KernelTable& table, const Grid& g,
                      const std::vector<IndexRun>& runs, const double* u,
                      const double* phi, RowKind kind,
                      const kernels::PowSpec& p);

/** Sum over pairs (i,j) with i in runs_a, j in runs_b (disjoint sets,
 * each pair counted once). */
double cross_pair_sum(const KernelTable& table, const Grid& g,
                      const std::vector<IndexRun>& runs_a,
                      const std::vector<IndexRun>& runs_b, const double* u,
                      const double* phi, RowKind kind,
                      const kernels::PowSpec& p);

/** Set difference of sorted run lists (a minus b). */
std::vector<IndexRun> runs_difference(const std::vector<IndexRun>& a,
                                      const std::vector<IndexRun>& b);

/** Grid L^p integral of |u - shift|^p over the runs. */
double abs_pow_integral(const Grid& g, const std::vector<IndexRun>& runs,
                        const double* u, double shift,
                        const kernels::PowSpec& p);

// --- operations -----------------------------------------------------------

struct SeminormResult {
  double value = 0.0;        // the seminorm itself
  double value_pow_p = 0.0;  // the p-th power exactly as accumulated
  double s = 0.0;
  double p = 0.0;
  Domain domain;
  int grid_resolution = 0;
};

/** Discrete Gagliardo seminorm over D with the torus metric, diagonal
 * excluded. s in (0,1), p in [1,inf). */
SeminormResult gagliardo_seminorm(const SampledFunction& u, const Domain& d,
                                  double s, double p);

struct PoincareReport {
  double lhs = 0.0;    // integral over lambda*B of |u - (u)_B|^p
  double rhs = 0.0;    // lambda^{dim+tp} diam(B)^{tp} [u]_{W^{t,p}(lambda B)}^p
  double ratio = 0.0;  // lhs / rhs (0 when both vanish)
  Box scaled_box;
};

PoincareReport poincare_check(const SampledFunction& u, const Box& b,
                              double lambda, double t, double p);

struct SeminormSplitReport {
  double covered = 0.0;  // sum_k [u]^p_{W^{s+eps,p}(2B_k)}
  double tail = 0.0;     // sum_k of the cross terms B_k x (D \ 2B_k)
  double base = 0.0;     // [u]^p_{W^{s,p}(D)}
  std::vector<double> tail_per_box;
  std::vector<double> constant_per_box;  // tail_k * diam_k^{eps p} / base
  double max_constant = 0.0;
};

SeminormSplitReport localized_seminorm_split(const SampledFunction& u,
                                             const std::vector<Box>& cover,
                                             const Domain& d, double s,
                                             double eps, double p);

}  // namespace fraclab

#endif
