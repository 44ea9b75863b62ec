#ifndef FRACLAB_SIMD_KERNELS_HPP
#define FRACLAB_SIMD_KERNELS_HPP

#include <cstddef>
#include <string>

namespace fraclab::kernels {

enum class Isa { scalar, avx2, neon };

bool isa_available(Isa isa);
Isa active_isa();
/** Forces a kernel implementation (tests, benchmarking). Throws
 * std::runtime_error if the requested ISA is not available. */
void force_isa(Isa isa);
void clear_forced_isa();
std::string isa_name(Isa isa);

/** Exponent with a precomputed integer classification. Integer exponents
 * take the multiply-only path (vectorizable); fractional ones go through
 * std::pow on the scalar path. */
struct PowSpec {
  double p = 2.0;
  int ip = 2;
  bool is_int = true;
};
PowSpec make_pow(double p);

// phi_p(t) = |t|^{p-2} t, the odd monotone nonlinearity of the p-pairing
double phi_p(double t, const PowSpec& p);
// |t|^p with the same integer fast path as phi_p
double abs_pow(double t, const PowSpec& p);

/* Row kernels. All sums run over k in [0,n); the weight array w is read
 * contiguously. Results are deterministic for a fixed ISA. */

/** sum_k phi_p(ui - u[k]) * (phii - phi[k]) * w[k] */
double pair_row(const double* u, const double* phi, const double* w,
                std::size_t n, double ui, double phii, const PowSpec& p);

/** sum_k phi_p(ui - u[k]) * w[k] */
double phi_row(const double* u, const double* w, std::size_t n, double ui,
               const PowSpec& p);

/** sum_k |ui - u[k]|^p * w[k] */
double diff_pow_row(const double* u, const double* w, std::size_t n, double ui,
                    const PowSpec& p);

/** sum_k |a[k] - shift|^p */
double abs_pow_sum(const double* a, std::size_t n, double shift,
                   const PowSpec& p);

/** sum_k a[k] * b[k] */
double dot(const double* a, const double* b, std::size_t n);

// scalar reference implementations, always available (equivalence tests)
namespace scalar {
double pair_row(const double* u, const double* phi, const double* w,
                std::size_t n, double ui, double phii, const PowSpec& p);
double phi_row(const double* u, const double* w, std::size_t n, double ui,
               const PowSpec& p);
double diff_pow_row(const double* u, const double* w, std::size_t n, double ui,
                    const PowSpec& p);
double abs_pow_sum(const double* a, std::size_t n, double shift,
                   const PowSpec& p);
double dot(const double* a, const double* b, std::size_t n);
}  // namespace scalar

}  // namespace fraclab::kernels

#endif
