#include "mermin/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "mermin/error.hpp"

namespace mermin {

namespace {

// sigma_i (x) sigma_j (x) sigma_k for every (i, j, k), built once.
const std::array<ComplexMatrix, 27>& pauli_strings() {
  static const auto strings = [] {
    std::array<ComplexMatrix, 27> out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          out[9 * i + 3 * j + k] = kron3(pauli(i + 1), pauli(j + 1), pauli(k + 1));
    return out;
  }();
  return strings;
}

// 2 sqrt(2) lambda written as 2 sqrt(2 lambda^2), exact for lambda^2 = 2.
double twice_root2_times(double lambda_sq) { return 2.0 * std::sqrt(2.0 * lambda_sq); }

bool degenerate(double hi, double lo, double scale) {
  return hi - lo <= kDegeneracyTol * std::max(1.0, scale);
}

}  // namespace

CorrelationTensor correlation_tensor(const ComplexMatrix& rho) {
  if (rho.rows() != 8 || rho.cols() != 8) {
    throw Error(ErrorKind::DimensionMismatch, "correlation tensor needs an 8x8 operator");
  }
  CorrelationTensor t;
  const auto& strings = pauli_strings();
  for (std::size_t n = 0; n < 27; ++n) t.t[n] = expectation_unchecked(rho, strings[n]);
  return t;
}

CorrelationTensor correlation_tensor(const DensityMatrix& rho) {
  return correlation_tensor(rho.matrix());
}

FoldedCorrelation fold(const CorrelationTensor& t) {
  FoldedCorrelation f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) f.m[j][3 * i + k] = t(i, j, k);
  return f;
}

CorrelationTensor unfold(const FoldedCorrelation& f) {
  CorrelationTensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) t(i, j, k) = f.m[j][3 * i + k];
  return t;
}

SingularTriple singular_triple(const FoldedCorrelation& f) {
  ComplexMatrix gram(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int n = 0; n < 9; ++n) s += f.m[r][n] * f.m[c][n];
      gram(r, c) = s;
    }
  const EigenSystem es = eig_hermitian(gram);

  SingularTriple out;
  for (int k = 0; k < 3; ++k) out.values[k] = std::sqrt(std::max(0.0, es.values[2 - k]));
  // Right vector v = m^T u / lambda; eigenvectors of a real symmetric matrix
  // come out of the complex solver with a common phase, so rotate it away.
  for (int k = 0; k < 2; ++k) {
    const int col = 2 - k;
    cplx phase = 1.0;
    for (int r = 0; r < 3; ++r) {
      if (std::abs(es.vectors(r, col)) > 1e-8) {
        phase = std::abs(es.vectors(r, col)) / es.vectors(r, col);
        break;
      }
    }
    std::array<double, 3> u{};
    for (int r = 0; r < 3; ++r) u[r] = (es.vectors(r, col) * phase).real();
    double norm = 0.0;
    for (int n = 0; n < 9; ++n) {
      double s = 0.0;
      for (int r = 0; r < 3; ++r) s += f.m[r][n] * u[r];
      out.right[k][n] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    if (norm > 1e-14) {
      for (double& x : out.right[k]) x /= norm;
    } else {
      out.right[k].fill(0.0);
    }
  }
  return out;
}

double mermin_bound(const SingularTriple& s) {
  return twice_root2_times(s.values[0] * s.values[0]);
}

double mermin_bound(const DensityMatrix& rho) {
  return mermin_bound(singular_triple(fold(correlation_tensor(rho))));
}

PairBound pair_bound(const SingularTriple& s) {
  const auto& v = s.values;
  PairBound out;
  out.degeneracy_gap = v[0] - v[1];
  if (degenerate(v[0], v[1], v[0])) {
    out.value = twice_root2_times(v[1] * v[1]);
    out.pair_is_max = true;
  } else if (degenerate(v[1], v[2], v[0])) {
    out.value = twice_root2_times(v[2] * v[2]);
    out.pair_is_max = false;
  } else {
    // No degenerate pair: report the untight 2 sqrt(2) lambda_2 level.
    out.value = twice_root2_times(v[1] * v[1]);
    out.pair_is_max = false;
  }
  return out;
}

PairBound pair_bound(const DensityMatrix& rho) {
  return pair_bound(singular_triple(fold(correlation_tensor(rho))));
}

std::array<double, 3> singular_values_wide_gram(const FoldedCorrelation& f) {
  ComplexMatrix gram(9, 9);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += f.m[j][r] * f.m[j][c];
      gram(r, c) = s;
    }
  const EigenSystem es = eig_hermitian(gram);
  return {std::sqrt(std::max(0.0, es.values[8])), std::sqrt(std::max(0.0, es.values[7])),
          std::sqrt(std::max(0.0, es.values[6]))};
}

}  // namespace mermin
