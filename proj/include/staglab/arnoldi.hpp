#pragma once

#include <functional>
#include <vector>

#include "staglab/numeric.hpp"
#include "staglab/types.hpp"

namespace staglab {

/// Matrix-vector action; inputs are never aliased with outputs.
using LinearOperator = std::function<ComplexVector(const ComplexVector&)>;

/// Wraps a dense matrix as a LinearOperator.
LinearOperator dense_operator(ComplexDenseMatrix a);

/// Incremental Arnoldi factorization A V_m = V_{m+1} Htilde_m with
/// orthonormal basis columns and a real positive subdiagonal. Built by
/// modified Gram-Schmidt plus one full reorthogonalization pass per
/// step. A value type: arnoldi_step consumes a state and returns a new
/// one.
struct ArnoldiDecomposition {
  LinearOperator apply_a;
  Thresholds thresholds;
  index_t operator_dim = 0;
  index_t steps = 0;
  ComplexVector b;                  // original right-hand side
  double beta = 0.0;                // |b|
  std::vector<ComplexVector> basis; // v_1 .. v_{steps+1} (v_{steps+1} absent
                                    // after a lucky breakdown)
  std::vector<ComplexVector> hcols; // column j holds entries h(0..j+1, j)
  bool breakdown = false;

  /// n x k matrix of the first k basis vectors.
  ComplexDenseMatrix basis_matrix(index_t k) const;
  /// (m+1) x m extended Hessenberg block for iteration m <= steps.
  ComplexDenseMatrix hessenberg_ext(index_t m) const;
  /// m x m leading Hessenberg block.
  ComplexDenseMatrix hessenberg(index_t m) const;
  /// h_{m+1,m}; zero at the breakdown step.
  double subdiag(index_t m) const;
};

/// Starts the factorization: steps = 0, basis = {b/|b|}.
ArnoldiDecomposition arnoldi_init(LinearOperator apply_a,
                                  const ComplexVector& b,
                                  const Thresholds& thr = {});

/// Extends the factorization by one step. A lucky breakdown
/// (h_{m+1,m} <= eps_b * |A v_m|) sets the flag and appends no new
/// basis vector; the exact solution then lies in the current Krylov
/// subspace.
ArnoldiDecomposition arnoldi_step(const ArnoldiDecomposition& state);

}  // namespace staglab
