#pragma once
// Small dense complex algebra for three-qubit states.
//
// Qubit order is A (most significant), B, C (least significant): the basis
// state |abc> sits at index 4a + 2b + c.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace mermin {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnitVectorTol = 1e-9;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::initializer_list<cplx> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  std::size_t size() const noexcept { return data_.size(); }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  // Largest |entry| of (this - other).
  double max_abs_diff(const ComplexMatrix& other) const;
  bool is_hermitian(double tol = kHermitianTol) const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// Unit Bloch vector k parameterising the dichotomic observable k . sigma.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const noexcept;
  // Rescales (x, y, z) to unit length; throws on the zero vector.
  static BlochVector normalized(double x, double y, double z);
  std::array<double, 3> as_array() const noexcept { return {x, y, z}; }
};

// sigma_1, sigma_2, sigma_3 for i = 1, 2, 3.
const ComplexMatrix& pauli(int i);
ComplexMatrix bloch_observable(const BlochVector& v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c);

// a * m * a^dagger
ComplexMatrix sandwich(const ComplexMatrix& a, const ComplexMatrix& m);

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

EigenSystem eig_hermitian(const ComplexMatrix& h);

// Validated 8x8 three-qubit state. Only validate_density() constructs one.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return mat_(r, c); }
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {}
  friend DensityMatrix validate_density(ComplexMatrix mat);

  ComplexMatrix mat_;
};

// Checks Hermiticity, unit trace and positivity (in that order). The
// Hermitian part is kept, so round-off asymmetry below tolerance is removed.
DensityMatrix validate_density(ComplexMatrix mat);

// Re Tr[obs * rho] for Hermitian obs.
double expectation(const DensityMatrix& rho, const ComplexMatrix& obs);
// Same contraction without the Hermiticity check; callers guarantee it.
double expectation_unchecked(const ComplexMatrix& rho, const ComplexMatrix& obs);

}  // namespace mermin
