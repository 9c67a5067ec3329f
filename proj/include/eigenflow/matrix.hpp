#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <utility>
#include <vector>

#include "eigenflow/defaults.hpp"
#include "eigenflow/errors.hpp"

namespace eigenflow {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. Value type: every transform in
/// the library returns a fresh matrix and never mutates its arguments.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// rows x cols zero matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_)
      throw Error(Errc::ShapeError, "entry count does not match rows*cols");
  }

  static ComplexMatrix identity(std::size_t d) {
    ComplexMatrix I(d, d);
    for (std::size_t i = 0; i < d; ++i) I(i, i) = 1.0;
    return I;
  }

  static ComplexMatrix diagonal(const std::vector<cplx>& diag) {
    ComplexMatrix D(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) D(i, i) = diag[i];
    return D;
  }

  /// Brace construction: ComplexMatrix::from_rows({{1, 2}, {3, 4}}).
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    ComplexMatrix M(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw Error(Errc::ShapeError, "ragged row list");
      std::size_t j = 0;
      for (const cplx& v : row) M(i, j++) = v;
      ++i;
    }
    return M;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return a_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::vector<cplx>& data() const noexcept { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix B(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) B(j, i) = std::conj((*this)(i, j));
    return B;
  }

  bool is_finite() const noexcept {
    for (const cplx& v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B) {
    require_same_shape(A, B);
    ComplexMatrix C = A;
    for (std::size_t k = 0; k < C.a_.size(); ++k) C.a_[k] += B.a_[k];
    return C;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B) {
    require_same_shape(A, B);
    ComplexMatrix C = A;
    for (std::size_t k = 0; k < C.a_.size(); ++k) C.a_[k] -= B.a_[k];
    return C;
  }

  friend ComplexMatrix operator*(const cplx& s, const ComplexMatrix& A) {
    ComplexMatrix C = A;
    for (cplx& v : C.a_) v *= s;
    return C;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& A, const cplx& s) { return s * A; }
  friend ComplexMatrix operator*(double s, const ComplexMatrix& A) { return cplx(s, 0.0) * A; }
  friend ComplexMatrix operator*(const ComplexMatrix& A, double s) { return cplx(s, 0.0) * A; }

  friend ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.cols_ != B.rows_)
      throw Error(Errc::ShapeError, "inner dimensions do not match");
    ComplexMatrix C(A.rows_, B.cols_);
    for (std::size_t i = 0; i < A.rows_; ++i) {
      for (std::size_t k = 0; k < A.cols_; ++k) {
        const cplx aik = A(i, k);
        if (aik == cplx(0.0, 0.0)) continue;
        const cplx* brow = &B.a_[k * B.cols_];
        cplx* crow = &C.a_[i * C.cols_];
        for (std::size_t j = 0; j < B.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return C;
  }

 private:
  static void require_same_shape(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows_ != B.rows_ || A.cols_ != B.cols_)
      throw Error(Errc::ShapeError, "shapes do not match");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> a_;
};

/// Frobenius norm (entrywise l2). Zero for empty matrices.
inline double frobenius_norm(const ComplexMatrix& A) {
  double s = 0.0;
  for (const cplx& v : A.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline cplx trace(const ComplexMatrix& A) {
  if (!A.is_square()) throw Error(Errc::NonSquare, "trace needs a square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i) t += A(i, i);
  return t;
}

enum class MatrixClass { Hermitian, Normal, Unitary, General };

/// Tolerance-based structure detection. Returns every class whose defect
/// passes at relative tolerance `tol` (Hermitian implies Normal by the
/// commutator test passing as well); {General} when nothing matches or the
/// matrix is not square.
inline std::set<MatrixClass> classify(const ComplexMatrix& A,
                                      double tol = defaults::kClassTol) {
  std::set<MatrixClass> out;
  if (!A.is_square() || A.empty()) {
    out.insert(MatrixClass::General);
    return out;
  }
  const double nf = frobenius_norm(A);
  const ComplexMatrix Ah = A.adjoint();
  // Hermitian defect ||A - A*|| against ||A||.
  if (frobenius_norm(A - Ah) <= tol * nf) out.insert(MatrixClass::Hermitian);
  // Commutator defect ||A*A - AA*|| against ||A||^2.
  const ComplexMatrix G = Ah * A;
  if (frobenius_norm(G - A * Ah) <= tol * nf * nf) out.insert(MatrixClass::Normal);
  // Unitary defect ||A*A - I|| against max(1, ||A||^2).
  const double uscale = std::max(1.0, nf * nf);
  if (frobenius_norm(G - ComplexMatrix::identity(A.rows())) <= tol * uscale)
    out.insert(MatrixClass::Unitary);
  if (out.empty()) out.insert(MatrixClass::General);
  return out;
}

inline bool is_hermitian(const ComplexMatrix& A, double tol = defaults::kClassTol) {
  return classify(A, tol).count(MatrixClass::Hermitian) > 0;
}

inline bool is_normal_matrix(const ComplexMatrix& A, double tol = defaults::kClassTol) {
  return classify(A, tol).count(MatrixClass::Normal) > 0;
}

/// A - (tr A / d) I. The result has exactly zero trace up to rounding and
/// the map is a linear projection: applying it twice is a no-op.
inline ComplexMatrix traceless_part(const ComplexMatrix& A) {
  if (!A.is_square()) throw Error(Errc::NonSquare, "traceless part needs a square matrix");
  if (A.empty()) return A;
  const cplx shift = trace(A) / static_cast<double>(A.rows());
  ComplexMatrix B = A;
  for (std::size_t i = 0; i < A.rows(); ++i) B(i, i) -= shift;
  return B;
}

/// A / ||A||_F. Throws ZeroMatrix on the zero matrix.
inline ComplexMatrix normalize(const ComplexMatrix& A) {
  const double n = frobenius_norm(A);
  if (n == 0.0) throw Error(Errc::ZeroMatrix, "cannot normalize the zero matrix");
  return (1.0 / n) * A;
}

}  // namespace eigenflow
