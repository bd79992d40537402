#include "rnbpg/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define RNBPG_X64 1
#include <immintrin.h>
#endif

namespace rnbpg::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double squared_norm_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void soft_threshold_scalar(const double* u, double tau, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = u[i];
    z[i] = v > tau ? v - tau : (v < -tau ? v + tau : 0.0);
  }
}

#if RNBPG_X64

__attribute__((target("avx2,fma"))) double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swap = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(double alpha, const double* x,
                                                   double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) double squared_norm_avx2(const double* a,
                                                             std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d v0 = _mm256_loadu_pd(a + i);
    __m256d v1 = _mm256_loadu_pd(a + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

__attribute__((target("avx2"))) void soft_threshold_avx2(const double* u, double tau,
                                                         double* z, std::size_t n) {
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(u + i);
    __m256d mag = _mm256_andnot_pd(sign_mask, v);
    __m256d shr = _mm256_max_pd(_mm256_sub_pd(mag, vtau), zero);
    __m256d sgn = _mm256_and_pd(sign_mask, v);
    // mask the sign back in only where shrinkage survives, so clamped lanes
    // come out +0.0 exactly like the scalar path
    __m256d keep = _mm256_cmp_pd(mag, vtau, _CMP_GT_OQ);
    _mm256_storeu_pd(z + i, _mm256_and_pd(_mm256_or_pd(shr, sgn), keep));
  }
  for (; i < n; ++i) {
    double v = u[i];
    z[i] = v > tau ? v - tau : (v < -tau ? v + tau : 0.0);
  }
}

bool cpu_has_avx2_fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // RNBPG_X64

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
  Backend backend;
};

constexpr Ops kScalarOps = {dot_scalar, axpy_scalar, squared_norm_scalar,
                            soft_threshold_scalar, Backend::scalar};

#if RNBPG_X64
constexpr Ops kAvx2Ops = {dot_avx2, axpy_avx2, squared_norm_avx2,
                          soft_threshold_avx2, Backend::avx2};
#endif

const Ops* resolve() {
#if RNBPG_X64
  const char* env = std::getenv("RNBPG_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &kScalarOps;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2_fma()) return &kAvx2Ops;
    return &kScalarOps;
  }
  if (cpu_has_avx2_fma()) return &kAvx2Ops;
#endif
  return &kScalarOps;
}

const Ops* g_active = nullptr;

const Ops& active() {
  if (g_active == nullptr) g_active = resolve();
  return *g_active;
}

}  // namespace

Backend active_backend() { return active().backend; }

bool avx2_available() {
#if RNBPG_X64
  return cpu_has_avx2_fma();
#else
  return false;
#endif
}

void force_backend(Backend b) {
#if RNBPG_X64
  if (b == Backend::avx2 && cpu_has_avx2_fma()) {
    g_active = &kAvx2Ops;
    return;
  }
#endif
  (void)b;
  g_active = &kScalarOps;
}

double dot(const double* a, const double* b, std::size_t n) {
  return n == 0 ? 0.0 : active().dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  if (alpha == 0.0 || n == 0) return;
  active().axpy(alpha, x, y, n);
}

double squared_norm(const double* a, std::size_t n) {
  return n == 0 ? 0.0 : active().squared_norm(a, n);
}

void soft_threshold(const double* u, double tau, double* z, std::size_t n) {
  if (n == 0) return;
  active().soft_threshold(u, tau, z, n);
}

}  // namespace rnbpg::kernels
