#include "fraclab/simd_kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace fraclab::kernels {

// implemented in kernels_avx2.cpp / kernels_neon.cpp when compiled in
#if FRACLAB_KERNELS_AVX2
namespace avx2 {
double pair_row(const double*, const double*, const double*, std::size_t, double,
                double, const PowSpec&);
double phi_row(const double*, const double*, std::size_t, double, const PowSpec&);
double diff_pow_row(const double*, const double*, std::size_t, double, const PowSpec&);
double abs_pow_sum(const double*, std::size_t, double, const PowSpec&);
double dot(const double*, const double*, std::size_t);
}  // namespace avx2
#endif
#if FRACLAB_KERNELS_NEON
namespace neon {
double pair_row(const double*, const double*, const double*, std::size_t, double,
                double, const PowSpec&);
double phi_row(const double*, const double*, std::size_t, double, const PowSpec&);
double diff_pow_row(const double*, const double*, std::size_t, double, const PowSpec&);
double abs_pow_sum(const double*, std::size_t, double, const PowSpec&);
double dot(const double*, const double*, std::size_t);
}  // namespace neon
#endif

namespace {
std::atomic<int> g_forced{-1};

Isa detect_isa() {
#if FRACLAB_KERNELS_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::avx2;
#endif
#if FRACLAB_KERNELS_NEON
  return Isa::neon;
#endif
  return Isa::scalar;
}
}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if FRACLAB_KERNELS_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if FRACLAB_KERNELS_NEON
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  const int f = g_forced.load();
  if (f >= 0) return static_cast<Isa>(f);
  static const Isa detected = detect_isa();
  return detected;
}

void force_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::runtime_error("kernel ISA '" + isa_name(isa) + "' not available");
  g_forced.store(static_cast<int>(isa));
}

void clear_forced_isa() { g_forced.store(-1); }

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

PowSpec make_pow(double p) {
  PowSpec s;
  s.p = p;
  const double r = std::nearbyint(p);
  s.is_int = std::abs(p - r) == 0.0 && r >= 1.0 && r <= 64.0;
  s.ip = s.is_int ? static_cast<int>(r) : 0;
  return s;
}

namespace {
// |a|^m by squaring; same multiplication order as the vector kernels
inline double pow_abs_int(double a, int m) {
  double r = 1.0, b = a;
  while (m > 0) {
    if (m & 1) r *= b;
    b *= b;
    m >>= 1;
  }
  return r;
}
}  // namespace

double phi_p(double t, const PowSpec& p) {
  if (p.is_int) return pow_abs_int(std::abs(t), p.ip - 2) * t;
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), p.p - 2.0) * t;
}

double abs_pow(double t, const PowSpec& p) {
  if (p.is_int) return pow_abs_int(std::abs(t), p.ip);
  return std::pow(std::abs(t), p.p);
}

namespace scalar {

double pair_row(const double* u, const double* phi, const double* w,
                std::size_t n, double ui, double phii, const PowSpec& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += phi_p(ui - u[k], p) * (phii - phi[k]) * w[k];
  return acc;
}

double phi_row(const double* u, const double* w, std::size_t n, double ui,
               const PowSpec& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += phi_p(ui - u[k], p) * w[k];
  return acc;
}

double diff_pow_row(const double* u, const double* w, std::size_t n, double ui,
                    const PowSpec& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += abs_pow(ui - u[k], p) * w[k];
  return acc;
}

double abs_pow_sum(const double* a, std::size_t n, double shift,
                   const PowSpec& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += abs_pow(a[k] - shift, p);
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace scalar

// Dispatchers. Vector paths exist only for integer exponents (p >= 2 for the
// phi kernels); everything else is handled by the scalar reference.

double pair_row(const double* u, const double* phi, const double* w,
                std::size_t n, double ui, double phii, const PowSpec& p) {
#if FRACLAB_KERNELS_AVX2
  if (active_isa() == Isa::avx2 && p.is_int && p.ip >= 2)
    return avx2::pair_row(u, phi, w, n, ui, phii, p);
#endif
#if FRACLAB_KERNELS_NEON
  if (active_isa() == Isa::neon && p.is_int && p.ip >= 2)
    return neon::pair_row(u, phi, w, n, ui, phii, p);
#endif
  return scalar::pair_row(u, phi, w, n, ui, phii, p);
}

double phi_row(const double* u, const double* w, std::size_t n, double ui,
               const PowSpec& p) {
#if FRACLAB_KERNELS_AVX2
  if (active_isa() == Isa::avx2 && p.is_int && p.ip >= 2)
    return avx2::phi_row(u, w, n, ui, p);
#endif
#if FRACLAB_KERNELS_NEON
  if (active_isa() == Isa::neon && p.is_int && p.ip >= 2)
    return neon::phi_row(u, w, n, ui, p);
#endif
  return scalar::phi_row(u, w, n, ui, p);
}

double diff_pow_row(const double* u, const double* w, std::size_t n, double ui,
                    const PowSpec& p) {
#if FRACLAB_KERNELS_AVX2
  if (active_isa() == Isa::avx2 && p.is_int)
    return avx2::diff_pow_row(u, w, n, ui, p);
#endif
#if FRACLAB_KERNELS_NEON
  if (active_isa() == Isa::neon && p.is_int)
    return neon::diff_pow_row(u, w, n, ui, p);
#endif
  return scalar::diff_pow_row(u, w, n, ui, p);
}

double abs_pow_sum(const double* a, std::size_t n, double shift,
                   const PowSpec& p) {
#if FRACLAB_KERNELS_AVX2
  if (active_isa() == Isa::avx2 && p.is_int)
    return avx2::abs_pow_sum(a, n, shift, p);
#endif
#if FRACLAB_KERNELS_NEON
  if (active_isa() == Isa::neon && p.is_int)
    return neon::abs_pow_sum(a, n, shift, p);
#endif
  return scalar::abs_pow_sum(a, n, shift, p);
}

double dot(const double* a, const double* b, std::size_t n) {
#if FRACLAB_KERNELS_AVX2
  if (active_isa() == Isa::avx2) return avx2::dot(a, b, n);
#endif
#if FRACLAB_KERNELS_NEON
  if (active_isa() == Isa::neon) return neon::dot(a, b, n);
#endif
  return scalar::dot(a, b, n);
}

}  // namespace fraclab::kernels
