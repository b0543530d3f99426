#include <doctest.h>

#include <random>
#include <vector>

#include "mermin/qalg.hpp"
#include "mermin/simd/kernels.hpp"
#include "support.hpp"

using namespace mermin;
using simd::Backend;

namespace {

std::vector<double> random_reals(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

std::vector<simd::cplx> random_complex(std::mt19937_64& rng, std::size_t n) {
  std::vector<simd::cplx> v(n);
  for (auto& x : v) x = test::gaussian_c(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels against hand-written loops") {
  std::mt19937_64 rng(1);
  const auto x = random_reals(rng, 37);
  const auto y = random_reals(rng, 37);
  double expect = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) expect += x[i] * y[i];
  CHECK(simd::scalar::dot(x.data(), y.data(), x.size()) == doctest::Approx(expect).epsilon(1e-14));

  const ComplexMatrix a = test::random_matrix(rng, 5, 3);
  const ComplexMatrix b = test::random_matrix(rng, 3, 7);
  ComplexMatrix out(5, 7);
  simd::scalar::cgemm(a.data(), b.data(), out.data(), 5, 3, 7);
  CHECK(out.max_abs_diff(test::naive_mul(a, b)) < 1e-13);
}

TEST_CASE("avx2 kernels match scalar reference") {
  if (!simd::backend_available(Backend::avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
    return;
  }
  const auto& ref = simd::kernels(Backend::scalar);
  const auto& vec = simd::kernels(Backend::avx2);
  std::mt19937_64 rng(2);

  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 64u, 128u, 129u}) {
    const auto x = random_reals(rng, n);
    const auto y = random_reals(rng, n);
    const double r = ref.dot(x.data(), y.data(), n);
    const double v = vec.dot(x.data(), y.data(), n);
    CHECK(std::abs(r - v) <= 1e-13 * (1.0 + std::abs(r)));

    const auto cx = random_complex(rng, n);
    auto cy1 = random_complex(rng, n);
    auto cy2 = cy1;
    const simd::cplx alpha{0.3, -1.7};
    ref.caxpy(alpha, cx.data(), cy1.data(), n);
    vec.caxpy(alpha, cx.data(), cy2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(cy1[i] - cy2[i]) < 1e-14);
  }

  for (auto [m, k, n] : std::vector<std::array<std::size_t, 3>>{
           {1, 1, 1}, {2, 2, 2}, {8, 8, 8}, {3, 5, 7}, {8, 2, 1}, {1, 8, 9}, {4, 4, 3}}) {
    const ComplexMatrix a = test::random_matrix(rng, m, k);
    const ComplexMatrix b = test::random_matrix(rng, k, n);
    ComplexMatrix o1(m, n), o2(m, n);
    ref.cgemm(a.data(), b.data(), o1.data(), m, k, n);
    vec.cgemm(a.data(), b.data(), o2.data(), m, k, n);
    CHECK(o1.max_abs_diff(o2) < 1e-13);
  }
}

TEST_CASE("forcing a backend changes results only by rounding") {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = test::random_state(rng);
  const ComplexMatrix obs = kron3(pauli(1), pauli(2), pauli(3));
  const Backend before = simd::active_backend();

  simd::force_backend(Backend::scalar);
  const double e_scalar = expectation(rho, obs);
  const ComplexMatrix p_scalar = rho.matrix() * obs;
  if (simd::backend_available(Backend::avx2)) {
    simd::force_backend(Backend::avx2);
    CHECK(simd::active_backend() == Backend::avx2);
    CHECK(expectation(rho, obs) == doctest::Approx(e_scalar).epsilon(1e-13));
    CHECK((rho.matrix() * obs).max_abs_diff(p_scalar) < 1e-13);
  }
  simd::force_backend(before);
  CHECK(simd::backend_name(Backend::scalar) == "scalar");
}
