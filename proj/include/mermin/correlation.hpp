#pragma once
// Three-party Pauli correlation tensor and the unfiltered Mermin bound.
//
// Indices are 0-based in code (0 = x, 1 = y, 2 = z).

#include <array>

#include "mermin/qalg.hpp"

namespace mermin {

// Two singular values closer than this (relative to max(1, lambda_1)) form a
// degenerate pair.
inline constexpr double kDegeneracyTol = 1e-7;

// t(i, j, k) = Tr[rho (sigma_i (x) sigma_j (x) sigma_k)]
struct CorrelationTensor {
  std::array<double, 27> t{};

  double& operator()(int i, int j, int k) { return t[9 * i + 3 * j + k]; }
  double operator()(int i, int j, int k) const { return t[9 * i + 3 * j + k]; }
};

// 3x9 matrix with rows indexed by the middle party j and column 3i + k, so a
// product vector a (x) c has component a_i c_k at column 3i + k.
struct FoldedCorrelation {
  std::array<std::array<double, 9>, 3> m{};
};

struct SingularTriple {
  std::array<double, 3> values{};                   // descending
  std::array<std::array<double, 9>, 2> right{};     // unit right vectors for values[0], values[1]
};

struct PairBound {
  double value = 0.0;        // 2 sqrt(2) times the level of the degenerate pair
  bool pair_is_max = false;  // the pair is (lambda_1, lambda_2) and dominates lambda_3
  double degeneracy_gap = 0.0;  // lambda_1 - lambda_2
};

CorrelationTensor correlation_tensor(const DensityMatrix& rho);
// Same contraction on an arbitrary Hermitian 8x8 operator (no state checks).
CorrelationTensor correlation_tensor(const ComplexMatrix& rho);

FoldedCorrelation fold(const CorrelationTensor& t);
CorrelationTensor unfold(const FoldedCorrelation& f);

// Singular values of the 3x9 matrix from the eigenvalues of its 3x3 Gram matrix.
SingularTriple singular_triple(const FoldedCorrelation& m);

// 2 sqrt(2) lambda_1.
double mermin_bound(const DensityMatrix& rho);
double mermin_bound(const SingularTriple& s);

PairBound pair_bound(const DensityMatrix& rho);
PairBound pair_bound(const SingularTriple& s);

// Singular values of the 3x9 matrix via the 9x9 Gram matrix m^T m. Used as an
// independent route in tests.
std::array<double, 3> singular_values_wide_gram(const FoldedCorrelation& m);

}  // namespace mermin
