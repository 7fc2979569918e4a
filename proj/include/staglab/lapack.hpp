#pragma once

#include "staglab/types.hpp"

namespace staglab::lapack {

struct GevResult {
  std::vector<Complex> alpha;
  std::vector<Complex> beta;
  ComplexDenseMatrix right_vectors;  // column j pairs with (alpha[j], beta[j])
};

/// QZ solve of the pencil beta*A*u = alpha*B*u (LAPACK zggev).
/// Never inverts B; singular B yields pairs with beta = 0.
GevResult ggev(const ComplexDenseMatrix& A, const ComplexDenseMatrix& B);

struct SvdResult {
  std::vector<double> sigma;  // descending
  ComplexDenseMatrix u;       // m x m
  ComplexDenseMatrix vh;      // n x n, V^*
};

/// Full singular value decomposition M = U diag(sigma) V^* (LAPACK zgesvd).
SvdResult svd(const ComplexDenseMatrix& M);

/// Eigenvalues of a general complex square matrix (LAPACK zgeev).
std::vector<Complex> eigenvalues(const ComplexDenseMatrix& A);

}  // namespace staglab::lapack
