#pragma once
// Shared helpers for the unit tests: seeded random states and filters, plus
// naive loop-based linear algebra that does not go through the SIMD kernels.

#include <cmath>
#include <complex>
#include <random>

#include "mermin/filtering.hpp"
#include "mermin/qalg.hpp"

namespace mermin::test {

using cplx = std::complex<double>;

inline cplx gaussian_c(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = gaussian_c(rng);
  return m;
}

inline ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline ComplexMatrix naive_adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline cplx naive_trace(const ComplexMatrix& a) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

inline ComplexMatrix naive_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Random state of the given rank: G G^dagger / Tr with Gaussian G (8 x rank).
inline DensityMatrix random_state(std::mt19937_64& rng, std::size_t rank = 8) {
  const ComplexMatrix g = random_matrix(rng, 8, rank);
  ComplexMatrix rho = naive_mul(g, naive_adjoint(g));
  rho *= 1.0 / naive_trace(rho).real();
  return validate_density(rho);
}

inline DensityMatrix random_state_any_rank(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> rank(1, 8);
  return random_state(rng, rank(rng));
}

inline ComplexMatrix random_unitary2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  return LocalFilter::from_angles(1.0, u(rng), u(rng), u(rng)).unitary();
}

// Positive definite 2x2 with a random eigenbasis and spectrum in [0.05, 3].
inline ComplexMatrix random_filter_raw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> s(0.05, 3.0);
  const ComplexMatrix u = random_unitary2(rng);
  const ComplexMatrix d = ComplexMatrix::diagonal({s(rng), s(rng)});
  return naive_mul(naive_mul(u, d), naive_adjoint(u));
}

inline FilterTriple random_filter_triple(std::mt19937_64& rng) {
  return {filter_normal_form(random_filter_raw(rng)), filter_normal_form(random_filter_raw(rng)),
          filter_normal_form(random_filter_raw(rng))};
}

// sigma_i (x) sigma_j (x) sigma_k expectation by explicit 8x8 products.
inline double naive_correlation(const DensityMatrix& rho, int i, int j, int k) {
  const ComplexMatrix op =
      naive_kron(naive_kron(pauli(i + 1), pauli(j + 1)), pauli(k + 1));
  return naive_trace(naive_mul(op, rho.matrix())).real();
}

}  // namespace mermin::test
