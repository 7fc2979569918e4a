#include "staglab/lapack.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace staglab::lapack {

namespace {

lapack_complex_double* lp(Complex* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}

}  // namespace

GevResult ggev(const ComplexDenseMatrix& A, const ComplexDenseMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw DimensionError("ggev: square matrices of equal order required");
  }
  const lapack_int n = static_cast<lapack_int>(A.rows());
  GevResult out;
  out.alpha.resize(A.rows());
  out.beta.resize(A.rows());
  out.right_vectors = ComplexDenseMatrix(A.rows(), A.rows());
  if (n == 0) return out;

  ComplexDenseMatrix a = A;  // zggev overwrites
  ComplexDenseMatrix b = B;
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'V', n, lp(a.data()), n, lp(b.data()), n,
      lp(out.alpha.data()), lp(out.beta.data()), nullptr, n,
      lp(out.right_vectors.data()), n);
  if (info != 0) {
    throw DegeneratePencilError("zggev failed, info = " +
                                std::to_string(info));
  }
  return out;
}

SvdResult svd(const ComplexDenseMatrix& M) {
  const lapack_int m = static_cast<lapack_int>(M.rows());
  const lapack_int n = static_cast<lapack_int>(M.cols());
  SvdResult out;
  out.sigma.resize(std::min(M.rows(), M.cols()));
  out.u = ComplexDenseMatrix(M.rows(), M.rows());
  out.vh = ComplexDenseMatrix(M.cols(), M.cols());
  if (m == 0 || n == 0) return out;

  ComplexDenseMatrix a = M;
  std::vector<double> superb(std::max<index_t>(1, out.sigma.size()));
  const lapack_int info = LAPACKE_zgesvd(
      LAPACK_COL_MAJOR, 'A', 'A', m, n, lp(a.data()), m, out.sigma.data(),
      lp(out.u.data()), m, lp(out.vh.data()), n, superb.data());
  if (info != 0) {
    throw std::runtime_error("zgesvd failed, info = " + std::to_string(info));
  }
  return out;
}

std::vector<Complex> eigenvalues(const ComplexDenseMatrix& A) {
  if (A.rows() != A.cols()) {
    throw DimensionError("eigenvalues: square matrix required");
  }
  const lapack_int n = static_cast<lapack_int>(A.rows());
  std::vector<Complex> w(A.rows());
  if (n == 0) return w;

  ComplexDenseMatrix a = A;
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(a.data()), n,
                    lp(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw std::runtime_error("zgeev failed, info = " + std::to_string(info));
  }
  return w;
}

}  // namespace staglab::lapack
