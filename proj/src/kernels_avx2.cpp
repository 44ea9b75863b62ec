// AVX2/FMA variants of the row kernels. Compiled only on x86 with the
// matching flags; selected at runtime after a cpuid check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "fraclab/simd_kernels.hpp"

namespace fraclab::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// |a|^m by squaring, same multiplication order as the scalar reference
inline __m256d pow_abs_int_pd(__m256d a, int m) {
  __m256d r = _mm256_set1_pd(1.0);
  __m256d b = a;
  while (m > 0) {
    if (m & 1) r = _mm256_mul_pd(r, b);
    b = _mm256_mul_pd(b, b);
    m >>= 1;
  }
  return r;
}

inline double hsum_fixed(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

}  // namespace

double pair_row(const double* u, const double* phi, const double* w,
                std::size_t n, double ui, double phii, const PowSpec& p) {
  const int m = p.ip - 2;
  const __m256d vui = _mm256_set1_pd(ui);
  const __m256d vphii = _mm256_set1_pd(phii);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(vui, _mm256_loadu_pd(u + k));
    const __m256d dphi = _mm256_sub_pd(vphii, _mm256_loadu_pd(phi + k));
    const __m256d f = _mm256_mul_pd(pow_abs_int_pd(abs_pd(d), m), d);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(f, dphi), _mm256_loadu_pd(w + k), acc);
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += phi_p(ui - u[k], p) * (phii - phi[k]) * w[k];
  return hsum_fixed(acc) + tail;
}

double phi_row(const double* u, const double* w, std::size_t n, double ui,
               const PowSpec& p) {
  const int m = p.ip - 2;
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(vui, _mm256_loadu_pd(u + k));
    const __m256d f = _mm256_mul_pd(pow_abs_int_pd(abs_pd(d), m), d);
    acc = _mm256_fmadd_pd(f, _mm256_loadu_pd(w + k), acc);
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += phi_p(ui - u[k], p) * w[k];
  return hsum_fixed(acc) + tail;
}

double diff_pow_row(const double* u, const double* w, std::size_t n, double ui,
                    const PowSpec& p) {
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = abs_pd(_mm256_sub_pd(vui, _mm256_loadu_pd(u + k)));
    acc = _mm256_fmadd_pd(pow_abs_int_pd(d, p.ip), _mm256_loadu_pd(w + k), acc);
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += abs_pow(ui - u[k], p) * w[k];
  return hsum_fixed(acc) + tail;
}

double abs_pow_sum(const double* a, std::size_t n, double shift,
                   const PowSpec& p) {
  const __m256d vs = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + k), vs));
    acc = _mm256_add_pd(acc, pow_abs_int_pd(d, p.ip));
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += abs_pow(a[k] - shift, p);
  return hsum_fixed(acc) + tail;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc);
  double tail = 0.0;
  for (; k < n; ++k) tail += a[k] * b[k];
  return hsum_fixed(acc) + tail;
}

}  // namespace fraclab::kernels::avx2
