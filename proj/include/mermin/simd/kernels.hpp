#pragma once
// Data-parallel inner loops used by the dense complex algebra.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant compiled with function-level target attributes. The variant is
// picked once at startup from CPUID; MERMIN_SIMD=scalar|avx2|auto in the
// environment overrides the choice. Variants agree to rounding, not bitwise.

#include <complex>
#include <cstddef>
#include <string_view>

namespace mermin::simd {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

struct KernelTable {
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // out(m x n) = a(m x k) * b(k x n), row-major, out must not alias a or b
  void (*cgemm)(const cplx* a, const cplx* b, cplx* out, std::size_t m, std::size_t k,
                std::size_t n);
  // y += alpha * x
  void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
};

const KernelTable& kernels();
const KernelTable& kernels(Backend backend);

Backend active_backend() noexcept;
bool backend_available(Backend backend) noexcept;
std::string_view backend_name(Backend backend) noexcept;

// Process-wide override, used by the equivalence tests and benchmarks.
void force_backend(Backend backend);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void cgemm(const cplx* a, const cplx* b, cplx* out, std::size_t m, std::size_t k, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
}  // namespace scalar

#if defined(MERMIN_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void cgemm(const cplx* a, const cplx* b, cplx* out, std::size_t m, std::size_t k, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace mermin::simd
