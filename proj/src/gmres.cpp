#include "staglab/gmres.hpp"

#include <cmath>

namespace staglab {

const ComplexVector& GmresState::y_at(index_t m) const {
  if (m < 1 || m > y_history.size()) throw IndexError("y_at: m out of range");
  return y_history[m - 1];
}

ComplexDenseMatrix GmresState::upper_triangular(index_t m) const {
  if (m < 1 || m > r_cols.size()) {
    throw IndexError("upper_triangular: m out of range");
  }
  ComplexDenseMatrix r(m, m);
  for (index_t j = 0; j < m; ++j)
    for (index_t i = 0; i <= j; ++i) r(i, j) = r_cols[j][i];
  return r;
}

GmresState gmres_init(LinearOperator apply_a, const ComplexVector& b,
                      const Thresholds& thr) {
  GmresState s;
  s.arnoldi = arnoldi_init(std::move(apply_a), b, thr);
  s.transformed_rhs = ComplexVector(1);
  s.transformed_rhs[0] = Complex(s.arnoldi.beta, 0.0);
  s.resnorm_history.push_back(s.arnoldi.beta);
  return s;
}

std::pair<GmresState, IterationRecord> gmres_advance(const GmresState& state) {
  if (state.terminal) {
    throw ExhaustedSpaceError("gmres_advance: state is terminal");
  }

  GmresState next = state;
  next.arnoldi = arnoldi_step(state.arnoldi);
  const index_t m = next.arnoldi.steps;

  // Rotate the new Hessenberg column by the stored rotations, then
  // generate one new rotation to zero its subdiagonal entry.
  ComplexVector col = next.arnoldi.hcols[m - 1];  // length m+1
  for (index_t k = 0; k + 1 < m; ++k) {
    apply_givens(next.rotations[k], col[k], col[k + 1]);
  }
  const GivensRotation rot = make_givens(col[m - 1], col[m]);
  apply_givens(rot, col[m - 1], col[m]);
  next.rotations.push_back(rot);

  ComplexVector rcol(m);
  for (index_t i = 0; i < m; ++i) rcol[i] = col[i];
  next.r_cols.push_back(std::move(rcol));

  ComplexVector g(m + 1);
  for (index_t i = 0; i < m; ++i) g[i] = next.transformed_rhs[i];
  g[m] = Complex(0.0, 0.0);
  apply_givens(rot, g[m - 1], g[m]);
  next.transformed_rhs = g;

  ComplexVector gtop(m);
  for (index_t i = 0; i < m; ++i) gtop[i] = g[i];
  ComplexVector y = back_substitute(next.upper_triangular(m), gtop);

  const double resnorm = std::abs(g[m]);
  next.resnorm_history.push_back(resnorm);
  next.y_history.push_back(y);

  if (next.arnoldi.breakdown || resnorm <= 1e-12 * next.beta()) {
    next.terminal = true;
  }

  IterationRecord rec;
  rec.m = m;
  rec.y = std::move(y);
  rec.resnorm = resnorm;
  rec.em_y = rec.y[m - 1];
  return {std::move(next), std::move(rec)};
}

ComplexVector materialize_residual(const GmresState& state, index_t m) {
  if (m > state.steps()) throw IndexError("materialize_residual: m out of range");
  if (m == 0) return state.arnoldi.b;

  const ComplexVector& y = state.y_at(m);
  ComplexVector x(state.arnoldi.operator_dim);
  for (index_t j = 0; j < m; ++j) axpy(y[j], state.arnoldi.basis[j], x);
  const ComplexVector ax = state.arnoldi.apply_a(x);
  return state.arnoldi.b - ax;
}

double nested_ls_consistency(const GmresState& state, index_t m) {
  if (m < 2 || m > state.steps()) {
    throw IndexError("nested_ls_consistency: need 2 <= m <= steps");
  }
  // The projector (I - e_m e_m^*) zeroes the last coefficient, so the
  // projected problem reduces to a least squares over A V_{m-1}.
  const index_t n = state.arnoldi.operator_dim;
  ComplexDenseMatrix av(n, m - 1);
  for (index_t j = 0; j + 1 < m; ++j) {
    av.set_col(j, state.arnoldi.apply_a(state.arnoldi.basis[j]));
  }
  const ComplexVector z = householder_ls(av, state.arnoldi.b);
  return norm2(z - state.y_at(m - 1));
}

}  // namespace staglab
