#include "staglab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace staglab {

namespace {

/// A V_m, column by column through the stored operator.
ComplexDenseMatrix apply_to_basis(const GmresState& state, index_t m) {
  const index_t n = state.arnoldi.operator_dim;
  ComplexDenseMatrix av(n, m);
  for (index_t j = 0; j < m; ++j) {
    av.set_col(j, state.arnoldi.apply_a(state.arnoldi.basis[j]));
  }
  return av;
}

bool av_columns_independent(const ComplexDenseMatrix& av, double norm_scale,
                            const Thresholds& thr) {
  const ColumnSvd svd = jacobi_svd(av);
  return svd.sigma.back() > thr.eps_z * norm_scale;
}

double gap_at(const GmresState& state, index_t m) {
  const double rm1 = state.resnorm_history[m - 1];
  const double rm = state.resnorm_history[m];
  return rm1 * rm1 - rm * rm;
}

/// sin of the angle between unit-scale directions of x and y.
double subspace_angle(const ComplexVector& x, const ComplexVector& y) {
  const double nx = norm2(x);
  const double ny = norm2(y);
  if (nx == 0.0 || ny == 0.0) return std::numbers::pi_v<double> / 2.0;
  ComplexVector xs = x;
  scale(xs, Complex(1.0 / nx, 0.0));
  ComplexVector ys = y;
  scale(ys, Complex(1.0 / ny, 0.0));
  const Complex overlap = dot(ys, xs);
  ComplexVector orth = xs;
  axpy(-overlap, ys, orth);
  const double s = std::min(1.0, norm2(orth));
  return std::asin(s);
}

}  // namespace

Complex compute_k(const GmresState& state, index_t m) {
  if (m < 1 || m > state.steps()) throw IndexError("compute_k: m out of range");
  const ComplexVector avm = state.arnoldi.apply_a(state.arnoldi.basis[m - 1]);
  const ComplexVector rm1 = materialize_residual(state, m - 1);
  return dot(avm, rm1);
}

GapIdentityResult gap_identity_check(const GmresState& state, index_t m,
                                     const Thresholds& thr) {
  if (m < 1 || m > state.steps()) {
    throw IndexError("gap_identity_check: m out of range");
  }
  GapIdentityResult out;
  const ComplexDenseMatrix av = apply_to_basis(state, m);
  if (!av_columns_independent(av, frobenius_norm(av), thr)) {
    out.applicable = false;
    return out;
  }
  out.applicable = true;
  const Complex k = compute_k(state, m);
  const Complex em_y = state.y_at(m)[m - 1];
  // Over C the inner product with r_0 conjugates the scalar: the real
  // gap equals conj(K) e_m^* y.
  const Complex rhs = std::conj(k) * em_y;
  out.error = std::abs(Complex(gap_at(state, m), 0.0) - rhs);
  out.imag_part = rhs.imag();
  return out;
}

ResidualDifferenceResult residual_difference_identity(const GmresState& state,
                                                      index_t m,
                                                      const Thresholds& thr) {
  if (m < 1 || m > state.steps()) {
    throw IndexError("residual_difference_identity: m out of range");
  }
  ResidualDifferenceResult out;
  const ComplexDenseMatrix av = apply_to_basis(state, m);
  if (!av_columns_independent(av, frobenius_norm(av), thr)) {
    out.applicable = false;
    return out;
  }
  out.applicable = true;

  const Complex k = compute_k(state, m);
  const ComplexDenseMatrix gram = matmul(adjoint(av), av);
  const ComplexVector t = solve_square(gram, ComplexVector::unit(m, m - 1));
  ComplexVector rhs = matvec(av, t);
  scale(rhs, k);

  const ComplexVector diff =
      materialize_residual(state, m - 1) - materialize_residual(state, m);
  out.error = norm2(diff - rhs);
  return out;
}

StagnationReport stagnation_report(const GmresState& state,
                                   const std::vector<HarmonicPair>& pairs,
                                   index_t m, const Thresholds& thr) {
  if (m < 1 || m > state.steps()) {
    throw IndexError("stagnation_report: m out of range");
  }
  StagnationReport rep;
  rep.m = m;

  const double beta = state.beta();
  const ComplexVector rm1 = materialize_residual(state, m - 1);
  const double norm_rm1 = norm2(rm1);
  if (norm_rm1 <= 1e-12 * beta) {
    rep.applicable = false;
    return rep;
  }

  const ComplexDenseMatrix h = state.arnoldi.hessenberg(m);
  rep.k = compute_k(state, m);
  rep.em_y = state.y_at(m)[m - 1];
  rep.sigma_min_h = smallest_singular_triplet(h).sigma_min;
  rep.gap = gap_at(state, m);
  rep.gap_identity = gap_identity_check(state, m, thr);

  for (const HarmonicPair& p : pairs) {
    if (p.finite()) rep.finite_pairs_em_u.push_back(p.u_last);
  }

  const double htilde_f = frobenius_norm(state.arnoldi.hessenberg_ext(m));
  rep.scale_k = htilde_f * norm_rm1;
  rep.scale_y = std::max(norm2(state.y_at(m)),
                         beta / std::max(htilde_f, 1e-300));
  rep.scale_h = htilde_f;

  double max_em_u = 0.0;
  for (const Complex& c : rep.finite_pairs_em_u) {
    max_em_u = std::max(max_em_u, std::abs(c));
  }

  rep.k_zero = std::abs(rep.k) <= thr.eps_z * rep.scale_k;
  rep.em_y_zero = std::abs(rep.em_y) <= thr.eps_z * rep.scale_y;
  rep.h_singular = rep.sigma_min_h <= thr.eps_z * rep.scale_h;
  rep.em_u_zero = max_em_u <= thr.eps_z;

  rep.stagnated = std::abs(rep.gap) <= thr.eps_s * beta * beta;
  rep.predicates_consistent = (rep.k_zero == rep.em_y_zero) &&
                              (rep.em_y_zero == rep.h_singular) &&
                              (rep.h_singular == rep.em_u_zero);
  return rep;
}

CoincidenceResult coincidence_errors(const GmresState& state, Complex sigma,
                                     const ComplexVector& u, Complex k_scale,
                                     index_t m) {
  if (m < 1 || m > state.steps()) {
    throw IndexError("coincidence_errors: m out of range");
  }
  CoincidenceResult out;
  out.k_scale = k_scale;

  const Complex em_u = u[m - 1];
  const Complex em_y = state.y_at(m)[m - 1];
  out.condition_error = std::abs(em_u + k_scale * em_y);

  const ComplexVector harmres =
      harmonic_residual_vector(state.arnoldi, sigma, u, m);
  const ComplexVector rm = materialize_residual(state, m);
  out.vector_error = norm2(harmres - k_scale * rm);
  return out;
}

CoincidenceResult coincidence_check(const GmresState& state,
                                    const HarmonicPair& pair, index_t m,
                                    const Thresholds& thr) {
  if (!pair.finite()) {
    throw InfinitePairError("coincidence_check: pair is infinite");
  }
  const double beta = state.beta();
  if (std::abs(gap_at(state, m)) <= thr.eps_s * beta * beta) {
    throw InconsistentStateError(
        "coincidence_check: stagnated step, use stagnation_coincidence_check");
  }
  const Complex em_y = state.y_at(m)[m - 1];
  const double htilde_f = frobenius_norm(state.arnoldi.hessenberg_ext(m));
  const double scale_y = std::max(norm2(state.y_at(m)),
                                  beta / std::max(htilde_f, 1e-300));
  if (std::abs(em_y) <= thr.eps_z * scale_y) {
    throw InconsistentStateError(
        "coincidence_check: e_m^* y ~ 0 on a step not flagged as stagnated");
  }
  const Complex k_scale = -pair.u_last / em_y;
  CoincidenceResult out =
      coincidence_errors(state, pair.sigma(), pair.u(), k_scale, m);
  return out;
}

CoincidenceResult stagnation_coincidence_check(const GmresState& state,
                                               const HarmonicPair& pair,
                                               index_t m,
                                               const Thresholds& thr) {
  if (!pair.finite()) {
    throw InfinitePairError("stagnation_coincidence_check: pair is infinite");
  }
  const double beta = state.beta();
  if (std::abs(gap_at(state, m)) > thr.eps_s * beta * beta) {
    throw InconsistentStateError(
        "stagnation_coincidence_check: step is not stagnated");
  }

  CoincidenceResult out;
  out.stagnation_branch = true;
  out.k_scale = Complex(1.0, 0.0);

  const ComplexDenseMatrix h = state.arnoldi.hessenberg(m);
  const double null_tol = thr.eps_z * frobenius_norm(h);
  std::vector<ComplexVector> null_vectors = left_null_basis(h, null_tol);
  if (null_vectors.empty()) {
    // The step is stagnated, so H_m is singular up to roundoff; fall
    // back to the minimal left singular vector.
    null_vectors.push_back(smallest_singular_triplet(h).left_vector);
  }
  out.extended_null_space = null_vectors.size() > 1;

  const ComplexVector harmres =
      harmonic_residual_vector(state.arnoldi, pair.sigma(), pair.u(), m);
  const ComplexVector rm = materialize_residual(state, m);
  ComplexVector d = harmres - rm;

  // V_m maps the orthonormal null vectors to orthonormal directions, so
  // the least-squares xi's are plain inner products.
  bool first = true;
  for (const ComplexVector& s2 : null_vectors) {
    ComplexVector vs2(state.arnoldi.operator_dim);
    for (index_t j = 0; j < m; ++j) axpy(s2[j], state.arnoldi.basis[j], vs2);
    const Complex xi = dot(vs2, d);
    axpy(-xi, vs2, d);
    if (first) {
      out.xi = xi;
      out.s2 = s2;
      first = false;
    }
  }
  out.vector_error = norm2(d);
  const Complex em_y = state.y_at(m)[m - 1];
  out.condition_error = std::abs(pair.u_last + em_y);
  return out;
}

PersistenceVerdict persistence_check(
    const std::vector<HarmonicPair>& pairs_m,
    const std::vector<HarmonicPair>& pairs_m_minus_1, bool stagnated,
    const Thresholds& thr) {
  PersistenceVerdict verdict;
  verdict.applicable = stagnated;
  if (!stagnated) return verdict;

  const double sigma_tol_rel = 1e-7;
  const double angle_tol = 1e-6;

  // Finite nonzero-sigma pairs at m; sigma = 0 is excluded by the
  // lemma's hypothesis (alpha ~ 0 in the homogeneous representation).
  std::vector<index_t> rows;
  for (index_t i = 0; i < pairs_m.size(); ++i) {
    const HarmonicPair& p = pairs_m[i];
    if (!p.finite()) continue;
    const double anorm = std::abs(p.pencil.alpha);
    const double bnorm = std::abs(p.pencil.beta);
    if (anorm <= thr.eps_z * (anorm + bnorm)) continue;
    rows.push_back(i);
  }
  std::vector<index_t> cols;
  for (index_t j = 0; j < pairs_m_minus_1.size(); ++j) {
    if (pairs_m_minus_1[j].finite()) cols.push_back(j);
  }

  if (rows.empty()) {
    verdict.vacuous = true;
    verdict.all_matched = true;
    return verdict;
  }

  const index_t mlen = pairs_m[rows.front()].u().size();
  auto cost = [&](index_t i, index_t j) {
    const HarmonicPair& p = pairs_m[i];
    const HarmonicPair& q = pairs_m_minus_1[j];
    const double ds = std::abs(p.sigma() - q.sigma());
    ComplexVector prefix(mlen - 1);
    for (index_t k = 0; k + 1 < mlen; ++k) prefix[k] = p.u()[k];
    const double ang = subspace_angle(prefix, q.u());
    return std::tuple<double, double, double>(
        ds / (1.0 + std::abs(p.sigma())) + ang, ds, ang);
  };

  // Greedy global-minimum assignment; the pair lists are tiny and the
  // matched costs are either far below tolerance or a genuine mismatch.
  std::vector<bool> row_used(rows.size(), false);
  std::vector<bool> col_used(cols.size(), false);
  index_t matched = 0;
  const index_t target = std::min(rows.size(), cols.size());
  while (matched < target) {
    double best = std::numeric_limits<double>::infinity();
    index_t bi = 0, bj = 0;
    double best_ds = 0.0, best_ang = 0.0;
    for (index_t i = 0; i < rows.size(); ++i) {
      if (row_used[i]) continue;
      for (index_t j = 0; j < cols.size(); ++j) {
        if (col_used[j]) continue;
        const auto [c, ds, ang] = cost(rows[i], cols[j]);
        if (c < best) {
          best = c;
          bi = i;
          bj = j;
          best_ds = ds;
          best_ang = ang;
        }
      }
    }
    row_used[bi] = true;
    col_used[bj] = true;
    PairMatch pm;
    pm.index_at_m = rows[bi];
    pm.index_at_prev = cols[bj];
    pm.sigma_mismatch = best_ds;
    pm.angle = best_ang;
    const double stol =
        sigma_tol_rel * (1.0 + std::abs(pairs_m[rows[bi]].sigma()));
    pm.within_tolerance = best_ds <= stol && best_ang <= angle_tol;
    verdict.matches.push_back(pm);
    ++matched;
  }

  verdict.all_matched = rows.size() <= cols.size();
  for (const PairMatch& pm : verdict.matches) {
    verdict.all_matched = verdict.all_matched && pm.within_tolerance;
    verdict.max_sigma_mismatch =
        std::max(verdict.max_sigma_mismatch, pm.sigma_mismatch);
    verdict.max_angle = std::max(verdict.max_angle, pm.angle);
  }

  bool em_u_small = true;
  for (index_t i : rows) {
    em_u_small = em_u_small && std::abs(pairs_m[i].u_last) <= thr.eps_z;
  }
  verdict.asserts_stagnation =
      !verdict.vacuous && verdict.all_matched && em_u_small;
  return verdict;
}

}  // namespace staglab
