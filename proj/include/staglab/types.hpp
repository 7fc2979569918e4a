#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace staglab {

using Complex = std::complex<double>;
using index_t = std::size_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Shape or structural violation of an input (mismatched sizes,
/// non-Hessenberg input where one is required, invalid generator size).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Index outside the valid iteration/entry range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Zero or sub-threshold diagonal entry in a triangular solve.
class SingularTriangularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// det(beta*A - alpha*B) vanishes identically; the pencil has no
/// well-defined eigenvalues.
class DegeneratePencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requested on an infinite eigenvalue pair that is only
/// defined for finite ones.
class InfinitePairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-hand side is exactly zero.
class ZeroRhsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Krylov process asked to step past the operator dimension or after a
/// breakdown.
class ExhaustedSpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A check was invoked on a state that contradicts its preconditions
/// (e.g. e_m*y ~ 0 on a step not flagged as stagnated).
class InconsistentStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An oracle is unavailable because its input is numerically
/// ill-conditioned; not a solver failure.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An instance generator could not satisfy its constraints within the
/// retry budget.
class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offence.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Filesystem failure (unreadable/unwritable path).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dense complex vector
// ---------------------------------------------------------------------------

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(index_t n) : data_(n, Complex(0.0, 0.0)) {}
  ComplexVector(std::initializer_list<Complex> init) : data_(init) {}
  explicit ComplexVector(std::vector<Complex> entries)
      : data_(std::move(entries)) {}

  index_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Complex& operator[](index_t i) { return data_[i]; }
  const Complex& operator[](index_t i) const { return data_[i]; }

  const std::vector<Complex>& entries() const { return data_; }
  std::vector<Complex>& entries() { return data_; }

  /// e_j of the given length (0-based j).
  static ComplexVector unit(index_t n, index_t j) {
    ComplexVector e(n);
    e[j] = Complex(1.0, 0.0);
    return e;
  }

 private:
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// Dense complex matrix, column-major
// ---------------------------------------------------------------------------

class ComplexDenseMatrix {
 public:
  ComplexDenseMatrix() = default;
  ComplexDenseMatrix(index_t rows, index_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  /// Row-major initializer, e.g. {{1,2},{3,4}}.
  ComplexDenseMatrix(std::initializer_list<std::initializer_list<Complex>> m);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }

  Complex& operator()(index_t i, index_t j) { return data_[j * rows_ + i]; }
  const Complex& operator()(index_t i, index_t j) const {
    return data_[j * rows_ + i];
  }

  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  ComplexVector col(index_t j) const;
  void set_col(index_t j, const ComplexVector& v);

  static ComplexDenseMatrix identity(index_t n);

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// Basic algebra
// ---------------------------------------------------------------------------

double norm2(const ComplexVector& v);

/// Conjugate-first inner product <x, y> = x^* y.
Complex dot(const ComplexVector& x, const ComplexVector& y);

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(Complex s, const ComplexVector& v);

/// y += s*x.
void axpy(Complex s, const ComplexVector& x, ComplexVector& y);

void scale(ComplexVector& v, Complex s);

ComplexVector matvec(const ComplexDenseMatrix& A, const ComplexVector& x);
ComplexDenseMatrix matmul(const ComplexDenseMatrix& A,
                          const ComplexDenseMatrix& B);
ComplexDenseMatrix adjoint(const ComplexDenseMatrix& A);
double frobenius_norm(const ComplexDenseMatrix& A);

/// True when every entry is finite (no NaN/Inf).
bool all_finite(const ComplexVector& v);
bool all_finite(const ComplexDenseMatrix& A);

}  // namespace staglab
