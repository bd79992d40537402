#pragma once

#include <cstddef>

// Dense inner-loop kernels. Scalar reference implementations plus AVX2+FMA
// variants picked once at startup from CPUID; RNBPG_KERNELS=scalar|avx2
// overrides. Each backend uses a fixed reduction order, so results are
// bit-reproducible for a given backend, and backends agree to rounding
// (covered by the equivalence tests).
namespace rnbpg::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool avx2_available();
void force_backend(Backend b);  // test hook; ignored request falls back to scalar

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x; exact no-op when alpha == 0
double squared_norm(const double* a, std::size_t n);
void soft_threshold(const double* u, double tau, double* z, std::size_t n);

}  // namespace rnbpg::kernels
