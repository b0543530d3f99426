#include "mermin/qalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mermin/error.hpp"
#include "mermin/simd/kernels.hpp"

namespace mermin {

namespace {

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + " of " + shape(a) + " and " + shape(b));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<cplx> entries) {
  ComplexMatrix m(entries.size(), entries.size());
  std::size_t i = 0;
  for (const cplx& e : entries) {
    m(i, i) = e;
    ++i;
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) throw Error(ErrorKind::DimensionMismatch, "trace of " + shape(*this));
  cplx t{};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  require_same_shape(*this, other, "difference");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  return worst;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_shape(*this, rhs, "sum");
  simd::kernels().caxpy(1.0, rhs.data(), data(), data_.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_shape(*this, rhs, "difference");
  simd::kernels().caxpy(-1.0, rhs.data(), data(), data_.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "product of " + shape(lhs) + " and " + shape(rhs));
  }
  ComplexMatrix out(lhs.rows(), rhs.cols());
  simd::kernels().cgemm(lhs.data(), rhs.data(), out.data(), lhs.rows(), lhs.cols(), rhs.cols());
  return out;
}

double BlochVector::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::NotUnitVector, "cannot normalise a zero or non-finite vector");
  }
  return {x / n, y / n, z / n};
}

const ComplexMatrix& pauli(int i) {
  static const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  static const ComplexMatrix sy{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}};
  static const ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
  switch (i) {
    case 1: return sx;
    case 2: return sy;
    case 3: return sz;
    default:
      throw Error(ErrorKind::InvalidArgument,
                  "Pauli index must be 1, 2 or 3, got " + std::to_string(i));
  }
}

ComplexMatrix bloch_observable(const BlochVector& v) {
  const double n = v.norm();
  if (!(std::abs(n - 1.0) <= kUnitVectorTol)) {
    throw Error(ErrorKind::NotUnitVector, "Bloch vector norm " + std::to_string(n));
  }
  return ComplexMatrix{{v.z, cplx(v.x, -v.y)}, {cplx(v.x, v.y), -v.z}};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cplx s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

ComplexMatrix kron3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  for (const ComplexMatrix* m : {&a, &b, &c}) {
    if (m->rows() != 2 || m->cols() != 2) {
      throw Error(ErrorKind::DimensionMismatch, "kron3 expects 2x2 factors, got " + shape(*m));
    }
  }
  return kron(kron(a, b), c);
}

ComplexMatrix sandwich(const ComplexMatrix& a, const ComplexMatrix& m) {
  return a * m * a.adjoint();
}

namespace {

EigenSystem eig_2x2(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const cplx b = h(0, 1);
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double radius = std::hypot(half, std::abs(b));

  EigenSystem es{{mean - radius, mean + radius}, ComplexMatrix(2, 2)};
  if (std::abs(b) == 0.0) {
    // Already diagonal: sort the basis vectors.
    const bool swap = a > d;
    es.vectors(swap ? 1 : 0, 0) = 1.0;
    es.vectors(swap ? 0 : 1, 1) = 1.0;
    return es;
  }
  // Eigenvector for lambda: (b, lambda - a), taking the larger-magnitude form.
  for (int k = 0; k < 2; ++k) {
    const double lambda = es.values[k];
    cplx v0 = b;
    cplx v1 = lambda - a;
    const cplx w0 = lambda - d;
    const cplx w1 = std::conj(b);
    if (std::norm(w0) + std::norm(w1) > std::norm(v0) + std::norm(v1)) {
      v0 = w0;
      v1 = w1;
    }
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    es.vectors(0, k) = v0 / n;
    es.vectors(1, k) = v1 / n;
  }
  return es;
}

double off_diagonal_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c)
      if (r != c) s += std::norm(h(r, c));
  return std::sqrt(s);
}

// Cyclic complex Jacobi. Each pivot first rotates the (p, q) entry real with
// the phase diag(1, conj(u)) and then applies the real symmetric rotation.
EigenSystem eig_jacobi(ComplexMatrix h) {
  const std::size_t n = h.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) scale += std::norm(h.data()[i]);
  const double threshold = 1e-12 * std::max(1.0, std::sqrt(scale));

  for (int sweep = 0; sweep < 100 && off_diagonal_norm(h) > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx hpq = h(p, q);
        const double mag = std::abs(hpq);
        if (mag < 1e-300) continue;
        const cplx u = hpq / mag;
        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx gqp = -s * std::conj(u);
        const cplx gqq = c * std::conj(u);
        // H <- H G
        for (std::size_t k = 0; k < n; ++k) {
          const cplx hkp = h(k, p);
          const cplx hkq = h(k, q);
          h(k, p) = hkp * c + hkq * gqp;
          h(k, q) = hkp * s + hkq * gqq;
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * c + vkq * gqp;
          v(k, q) = vkp * s + vkq * gqq;
        }
        // H <- G^dagger H
        for (std::size_t k = 0; k < n; ++k) {
          const cplx hpk = h(p, k);
          const cplx hqk = h(q, k);
          h(p, k) = c * hpk + std::conj(gqp) * hqk;
          h(q, k) = s * hpk + std::conj(gqq) * hqk;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return h(i, i).real() < h(j, j).real();
  });
  EigenSystem es{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = h(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) es.vectors(r, k) = v(r, order[k]);
  }
  return es;
}

}  // namespace

EigenSystem eig_hermitian(const ComplexMatrix& h) {
  if (!h.is_square() || h.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "eig_hermitian of " + shape(h));
  }
  if (!h.is_hermitian(kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian, "eig_hermitian input is not Hermitian");
  }
  if (h.rows() == 1) return {{h(0, 0).real()}, ComplexMatrix::identity(1)};
  if (h.rows() == 2) return eig_2x2(h);
  return eig_jacobi(h);
}

double DensityMatrix::purity() const { return expectation_unchecked(mat_, mat_); }

DensityMatrix validate_density(ComplexMatrix mat) {
  if (mat.rows() != 8 || mat.cols() != 8) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be 8x8, got " + shape(mat));
  }
  if (!mat.all_finite()) throw Error(ErrorKind::InvalidArgument, "density matrix has NaN/Inf");

  const double asym = mat.max_abs_diff(mat.adjoint());
  if (asym > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "max |rho - rho^dagger| = " + std::to_string(asym));
  }
  ComplexMatrix herm = (mat + mat.adjoint()) * cplx(0.5);
  const double trace_err = std::abs(herm.trace() - 1.0);
  if (trace_err > kTraceTol) {
    throw Error(ErrorKind::NotUnitTrace,
                "trace = " + std::to_string(herm.trace().real()) +
                    " (|Tr - 1| = " + std::to_string(trace_err) + ")");
  }
  const double min_eig = eig_hermitian(herm).values.front();
  if (min_eig < -kPsdTol) {
    throw Error(ErrorKind::NotPSD, "minimum eigenvalue = " + std::to_string(min_eig));
  }
  return DensityMatrix(std::move(herm));
}

double expectation_unchecked(const ComplexMatrix& rho, const ComplexMatrix& obs) {
  if (rho.rows() != obs.cols() || rho.cols() != obs.rows() || !rho.is_square()) {
    throw Error(ErrorKind::DimensionMismatch,
                "expectation of " + shape(obs) + " in " + shape(rho));
  }
  // For Hermitian obs, Re Tr[obs rho] = sum_ij Re(rho_ij conj(obs_ij)), which
  // is a plain dot product over the interleaved (re, im) storage.
  return simd::kernels().dot(reinterpret_cast<const double*>(rho.data()),
                             reinterpret_cast<const double*>(obs.data()), 2 * rho.size());
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& obs) {
  if (!obs.is_hermitian(kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian, "observable is not Hermitian");
  }
  return expectation_unchecked(rho.matrix(), obs);
}

}  // namespace mermin
