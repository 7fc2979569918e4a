#include "staglab/harmonic.hpp"

#include <cmath>

#include "staglab/lapack.hpp"

namespace staglab {

std::vector<HarmonicPair> harmonic_pairs(const ArnoldiDecomposition& decomp,
                                         index_t m, const Thresholds& thr) {
  if (m < 1 || m > decomp.steps) {
    throw IndexError("harmonic_pairs: m out of range");
  }
  const ComplexDenseMatrix h = decomp.hessenberg(m);
  const double hsub = decomp.subdiag(m);

  ComplexDenseMatrix amat = matmul(adjoint(h), h);
  amat(m - 1, m - 1) += Complex(hsub * hsub, 0.0);
  const ComplexDenseMatrix bmat = adjoint(h);

  std::vector<PencilEigenPair> raw = solve_pencil(amat, bmat, thr);

  std::vector<HarmonicPair> pairs;
  pairs.reserve(raw.size());
  for (PencilEigenPair& p : raw) {
    HarmonicPair hp;
    hp.u_last = p.vector[m - 1];
    hp.pencil = std::move(p);
    if (hp.finite()) {
      hp.harmonic_residual =
          harmonic_residual_vector(decomp, hp.sigma(), hp.u(), m);
    }
    pairs.push_back(std::move(hp));
  }
  return pairs;
}

ComplexVector harmonic_residual_vector(const ArnoldiDecomposition& decomp,
                                       Complex sigma, const ComplexVector& u,
                                       index_t m) {
  if (m < 1 || m > decomp.steps) {
    throw IndexError("harmonic_residual_vector: m out of range");
  }
  if (u.size() != m) {
    throw DimensionError("harmonic_residual_vector: u must have length m");
  }
  const ComplexDenseMatrix htilde = decomp.hessenberg_ext(m);
  const ComplexVector t = matvec(htilde, u);  // length m+1

  ComplexVector r(decomp.operator_dim);
  const index_t cols = std::min<index_t>(m + 1, decomp.basis.size());
  for (index_t j = 0; j < cols; ++j) axpy(t[j], decomp.basis[j], r);
  for (index_t j = 0; j < m; ++j) axpy(-sigma * u[j], decomp.basis[j], r);
  return r;
}

ComplexVector harmonic_residual_vector(const ArnoldiDecomposition& decomp,
                                       const HarmonicPair& pair, index_t m) {
  if (!pair.finite()) {
    throw InfinitePairError(
        "harmonic_residual_vector: no residual vector for an infinite pair");
  }
  return harmonic_residual_vector(decomp, pair.sigma(), pair.u(), m);
}

std::vector<Complex> residual_polynomial_roots(const GmresState& state,
                                               index_t m) {
  if (m < 1 || m > state.steps()) {
    throw IndexError("residual_polynomial_roots: m out of range");
  }
  const index_t n = state.arnoldi.operator_dim;

  // Krylov matrix [b, Ab, ..., A^{m-1} b].
  ComplexDenseMatrix krylov(n, m);
  ComplexVector col = state.arnoldi.b;
  krylov.set_col(0, col);
  for (index_t j = 1; j < m; ++j) {
    col = state.arnoldi.apply_a(col);
    krylov.set_col(j, col);
  }
  const double cond = condition_estimate(krylov);
  if (!(cond <= 1e8)) {
    throw ConditioningError(
        "residual_polynomial_roots: Krylov basis condition exceeds 1e8");
  }

  // x_m in the Krylov power basis.
  const ComplexVector& y = state.y_at(m);
  ComplexVector x(n);
  for (index_t j = 0; j < m; ++j) axpy(y[j], state.arnoldi.basis[j], x);
  const ComplexVector c = householder_ls(krylov, x);

  // p(z) = 1 - c_0 z - c_1 z^2 - ... - c_{m-1} z^m. Trailing
  // coefficients below roundoff scale are dropped; the corresponding
  // roots are the infinite harmonic Ritz values.
  double cmax = 1.0;
  for (index_t k = 0; k < m; ++k) cmax = std::max(cmax, std::abs(c[k]));
  index_t degree = m;
  while (degree > 0 && std::abs(c[degree - 1]) <= 1e-13 * cmax) --degree;
  if (degree == 0) return {};

  // Companion matrix of the monic form of p.
  const Complex lead = -c[degree - 1];
  ComplexDenseMatrix comp(degree, degree);
  for (index_t i = 1; i < degree; ++i) comp(i, i - 1) = Complex(1.0, 0.0);
  comp(0, degree - 1) = -Complex(1.0, 0.0) / lead;
  for (index_t k = 1; k < degree; ++k) {
    comp(k, degree - 1) = -(-c[k - 1]) / lead;
  }
  return lapack::eigenvalues(comp);
}

}  // namespace staglab
