#include "mermin/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "mermin/error.hpp"

namespace mermin::simd {

namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::cgemm, &scalar::caxpy};
#if defined(MERMIN_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::cgemm, &avx2::caxpy};
#endif

bool cpu_has_avx2() noexcept {
#if defined(MERMIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  const char* env = std::getenv("MERMIN_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return Backend::scalar;
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool backend_available(Backend backend) noexcept {
  return backend == Backend::scalar || cpu_has_avx2();
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable& kernels(Backend backend) {
#if defined(MERMIN_HAVE_AVX2)
  if (backend == Backend::avx2) return kAvx2Table;
#else
  (void)backend;
#endif
  return kScalarTable;
}

const KernelTable& kernels() { return kernels(current().load(std::memory_order_relaxed)); }

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void force_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw Error(ErrorKind::InvalidArgument,
                "SIMD backend " + std::string(backend_name(backend)) + " not available on this CPU");
  }
  current().store(backend, std::memory_order_relaxed);
}

}  // namespace mermin::simd
