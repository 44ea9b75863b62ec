// NEON variants of the row kernels (aarch64). Mirrors kernels_avx2.cpp with
// 2-wide float64 lanes.

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "fraclab/simd_kernels.hpp"

namespace fraclab::kernels::neon {

namespace {

inline float64x2_t pow_abs_int_f64(float64x2_t a, int m) {
  float64x2_t r = vdupq_n_f64(1.0);
  float64x2_t b = a;
  while (m > 0) {
    if (m & 1) r = vmulq_f64(r, b);
    b = vmulq_f64(b, b);
    m >>= 1;
  }
  return r;
}

inline double hsum_fixed(float64x2_t acc) {
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

}  // namespace

double pair_row(const double* u, const double* phi, const double* w,
                std::size_t n, double ui, double phii, const PowSpec& p) {
  const int m = p.ip - 2;
  const float64x2_t vui = vdupq_n_f64(ui);
  const float64x2_t vphii = vdupq_n_f64(phii);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t d = vsubq_f64(vui, vld1q_f64(u + k));
    const float64x2_t dphi = vsubq_f64(vphii, vld1q_f64(phi + k));
    const float64x2_t f = vmulq_f64(pow_abs_int_f64(vabsq_f64(d), m), d);
    acc = vfmaq_f64(acc, vmulq_f64(f, dphi), vld1q_f64(w + k));
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += phi_p(ui - u[k], p) * (phii - phi[k]) * w[k];
  return hsum_fixed(acc) + tail;
}

double phi_row(const double* u, const double* w, std::size_t n, double ui,
               const PowSpec& p) {
  const int m = p.ip - 2;
  const float64x2_t vui = vdupq_n_f64(ui);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t d = vsubq_f64(vui, vld1q_f64(u + k));
    const float64x2_t f = vmulq_f64(pow_abs_int_f64(vabsq_f64(d), m), d);
    acc = vfmaq_f64(acc, f, vld1q_f64(w + k));
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += phi_p(ui - u[k], p) * w[k];
  return hsum_fixed(acc) + tail;
}

double diff_pow_row(const double* u, const double* w, std::size_t n, double ui,
                    const PowSpec& p) {
  const float64x2_t vui = vdupq_n_f64(ui);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t d = vabsq_f64(vsubq_f64(vui, vld1q_f64(u + k)));
    acc = vfmaq_f64(acc, pow_abs_int_f64(d, p.ip), vld1q_f64(w + k));
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += abs_pow(ui - u[k], p) * w[k];
  return hsum_fixed(acc) + tail;
}

double abs_pow_sum(const double* a, std::size_t n, double shift,
                   const PowSpec& p) {
  const float64x2_t vs = vdupq_n_f64(shift);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + k), vs));
    acc = vaddq_f64(acc, pow_abs_int_f64(d, p.ip));
  }
  double tail = 0.0;
  for (; k < n; ++k) tail += abs_pow(a[k] - shift, p);
  return hsum_fixed(acc) + tail;
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + k), vld1q_f64(b + k));
  double tail = 0.0;
  for (; k < n; ++k) tail += a[k] * b[k];
  return hsum_fixed(acc) + tail;
}

}  // namespace fraclab::kernels::neon
