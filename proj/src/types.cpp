#include "staglab/types.hpp"

#include <cmath>

namespace staglab {

ComplexDenseMatrix::ComplexDenseMatrix(
    std::initializer_list<std::initializer_list<Complex>> m) {
  rows_ = m.size();
  cols_ = rows_ ? m.begin()->size() : 0;
  data_.assign(rows_ * cols_, Complex(0.0, 0.0));
  index_t i = 0;
  for (const auto& row : m) {
    if (row.size() != cols_) {
      throw DimensionError("ragged initializer for ComplexDenseMatrix");
    }
    index_t j = 0;
    for (const auto& v : row) {
      (*this)(i, j) = v;
      ++j;
    }
    ++i;
  }
}

ComplexVector ComplexDenseMatrix::col(index_t j) const {
  if (j >= cols_) throw IndexError("column index out of range");
  ComplexVector v(rows_);
  for (index_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexDenseMatrix::set_col(index_t j, const ComplexVector& v) {
  if (j >= cols_) throw IndexError("column index out of range");
  if (v.size() != rows_) throw DimensionError("column length mismatch");
  for (index_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexDenseMatrix ComplexDenseMatrix::identity(index_t n) {
  ComplexDenseMatrix I(n, n);
  for (index_t i = 0; i < n; ++i) I(i, i) = Complex(1.0, 0.0);
  return I;
}

double norm2(const ComplexVector& v) {
  // Two-pass scaled sum to avoid overflow; sizes here are small.
  double maxabs = 0.0;
  for (index_t i = 0; i < v.size(); ++i)
    maxabs = std::max(maxabs, std::abs(v[i]));
  if (maxabs == 0.0) return 0.0;
  double s = 0.0;
  for (index_t i = 0; i < v.size(); ++i) {
    const double re = v[i].real() / maxabs;
    const double im = v[i].imag() / maxabs;
    s += re * re + im * im;
  }
  return maxabs * std::sqrt(s);
}

Complex dot(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  Complex s(0.0, 0.0);
  for (index_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector add: length mismatch");
  ComplexVector r(a.size());
  for (index_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sub: length mismatch");
  ComplexVector r(a.size());
  for (index_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

ComplexVector operator*(Complex s, const ComplexVector& v) {
  ComplexVector r(v.size());
  for (index_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

void axpy(Complex s, const ComplexVector& x, ComplexVector& y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (index_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

void scale(ComplexVector& v, Complex s) {
  for (index_t i = 0; i < v.size(); ++i) v[i] *= s;
}

ComplexVector matvec(const ComplexDenseMatrix& A, const ComplexVector& x) {
  if (A.cols() != x.size()) throw DimensionError("matvec: shape mismatch");
  ComplexVector y(A.rows());
  for (index_t j = 0; j < A.cols(); ++j) {
    const Complex xj = x[j];
    for (index_t i = 0; i < A.rows(); ++i) y[i] += A(i, j) * xj;
  }
  return y;
}

ComplexDenseMatrix matmul(const ComplexDenseMatrix& A,
                          const ComplexDenseMatrix& B) {
  if (A.cols() != B.rows()) throw DimensionError("matmul: shape mismatch");
  ComplexDenseMatrix C(A.rows(), B.cols());
  for (index_t j = 0; j < B.cols(); ++j) {
    for (index_t k = 0; k < A.cols(); ++k) {
      const Complex bkj = B(k, j);
      if (bkj == Complex(0.0, 0.0)) continue;
      for (index_t i = 0; i < A.rows(); ++i) C(i, j) += A(i, k) * bkj;
    }
  }
  return C;
}

ComplexDenseMatrix adjoint(const ComplexDenseMatrix& A) {
  ComplexDenseMatrix AH(A.cols(), A.rows());
  for (index_t j = 0; j < A.cols(); ++j)
    for (index_t i = 0; i < A.rows(); ++i) AH(j, i) = std::conj(A(i, j));
  return AH;
}

double frobenius_norm(const ComplexDenseMatrix& A) {
  double s = 0.0;
  for (index_t j = 0; j < A.cols(); ++j)
    for (index_t i = 0; i < A.rows(); ++i) s += std::norm(A(i, j));
  return std::sqrt(s);
}

bool all_finite(const ComplexVector& v) {
  for (index_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      return false;
  return true;
}

bool all_finite(const ComplexDenseMatrix& A) {
  for (index_t j = 0; j < A.cols(); ++j)
    for (index_t i = 0; i < A.rows(); ++i)
      if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag()))
        return false;
  return true;
}

}  // namespace staglab
