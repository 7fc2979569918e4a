#include "staglab/arnoldi.hpp"

#include <cmath>
#include <utility>

namespace staglab {

LinearOperator dense_operator(ComplexDenseMatrix a) {
  return [a = std::move(a)](const ComplexVector& x) { return matvec(a, x); };
}

ComplexDenseMatrix ArnoldiDecomposition::basis_matrix(index_t k) const {
  if (k > basis.size()) throw IndexError("basis_matrix: not enough vectors");
  ComplexDenseMatrix v(operator_dim, k);
  for (index_t j = 0; j < k; ++j) v.set_col(j, basis[j]);
  return v;
}

ComplexDenseMatrix ArnoldiDecomposition::hessenberg_ext(index_t m) const {
  if (m < 1 || m > steps) throw IndexError("hessenberg_ext: m out of range");
  ComplexDenseMatrix h(m + 1, m);
  for (index_t j = 0; j < m; ++j) {
    const index_t top = std::min<index_t>(j + 2, m + 1);
    for (index_t i = 0; i < top; ++i) h(i, j) = hcols[j][i];
  }
  return h;
}

ComplexDenseMatrix ArnoldiDecomposition::hessenberg(index_t m) const {
  if (m < 1 || m > steps) throw IndexError("hessenberg: m out of range");
  ComplexDenseMatrix h(m, m);
  for (index_t j = 0; j < m; ++j) {
    const index_t top = std::min<index_t>(j + 2, m);
    for (index_t i = 0; i < top; ++i) h(i, j) = hcols[j][i];
  }
  return h;
}

double ArnoldiDecomposition::subdiag(index_t m) const {
  if (m < 1 || m > steps) throw IndexError("subdiag: m out of range");
  return hcols[m - 1][m].real();
}

ArnoldiDecomposition arnoldi_init(LinearOperator apply_a,
                                  const ComplexVector& b,
                                  const Thresholds& thr) {
  if (!all_finite(b)) throw DimensionError("arnoldi_init: non-finite entries");
  const double beta = norm2(b);
  if (beta == 0.0) throw ZeroRhsError("arnoldi_init: zero right-hand side");

  ArnoldiDecomposition d;
  d.apply_a = std::move(apply_a);
  d.thresholds = thr;
  d.operator_dim = b.size();
  d.b = b;
  d.beta = beta;
  ComplexVector v1 = b;
  scale(v1, Complex(1.0 / beta, 0.0));
  d.basis.push_back(std::move(v1));
  return d;
}

ArnoldiDecomposition arnoldi_step(const ArnoldiDecomposition& state) {
  if (state.breakdown) {
    throw ExhaustedSpaceError("arnoldi_step: factorization already broke down");
  }
  if (state.steps >= state.operator_dim) {
    throw ExhaustedSpaceError("arnoldi_step: Krylov space exhausted");
  }

  ArnoldiDecomposition next = state;
  const ComplexVector& vm = next.basis.back();
  ComplexVector w = next.apply_a(vm);
  if (w.size() != next.operator_dim) {
    throw DimensionError("arnoldi_step: operator changed the vector length");
  }
  const double norm_av = norm2(w);

  ComplexVector hcol(next.steps + 2);
  for (index_t j = 0; j <= next.steps; ++j) {
    const Complex hj = dot(next.basis[j], w);
    axpy(-hj, next.basis[j], w);
    hcol[j] = hj;
  }
  // One full second pass; the later singularity diagnostics assume the
  // basis stays orthonormal to near machine precision.
  for (index_t j = 0; j <= next.steps; ++j) {
    const Complex dj = dot(next.basis[j], w);
    axpy(-dj, next.basis[j], w);
    hcol[j] += dj;
  }

  const double hnorm = norm2(w);
  if (hnorm <= next.thresholds.eps_b * norm_av) {
    next.breakdown = true;
    hcol[next.steps + 1] = Complex(0.0, 0.0);
  } else {
    hcol[next.steps + 1] = Complex(hnorm, 0.0);
    scale(w, Complex(1.0 / hnorm, 0.0));
    next.basis.push_back(std::move(w));
  }
  next.hcols.push_back(std::move(hcol));
  next.steps += 1;
  return next;
}

}  // namespace staglab
