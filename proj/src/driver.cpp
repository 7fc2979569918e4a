#include "staglab/driver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace staglab {

namespace {

HarmonicSummary summarize(const HarmonicPair& p) {
  HarmonicSummary s;
  s.is_infinite = !p.finite();
  if (p.finite()) {
    const Complex sig = p.sigma();
    s.sigma_re = sig.real();
    s.sigma_im = sig.imag();
  }
  s.abs_u_last = std::abs(p.u_last);
  return s;
}

CoincidenceSummary summarize(const CoincidenceResult& r, index_t idx,
                             const std::string& branch) {
  CoincidenceSummary s;
  s.pair_index = idx;
  s.branch = branch;
  s.k_scale_re = r.k_scale.real();
  s.k_scale_im = r.k_scale.imag();
  if (r.xi) {
    s.has_xi = true;
    s.xi_re = r.xi->real();
    s.xi_im = r.xi->imag();
  }
  s.condition_error = r.condition_error;
  s.vector_error = r.vector_error;
  s.extended_null_space = r.extended_null_space;
  return s;
}

}  // namespace

RunReport run_instrumented(const ProblemInstance& inst, const RunOptions& opt) {
  const index_t n = inst.matrix.rows();
  if (n == 0 || inst.matrix.cols() != n) {
    throw DimensionError("run_instrumented: square matrix required");
  }
  const Thresholds& thr = opt.thresholds;
  const index_t max_iter =
      opt.max_iter == 0 ? n : std::min<index_t>(opt.max_iter, n);

  RunReport rep;
  rep.config.matrix_source =
      opt.matrix_source.empty() ? inst.generator : opt.matrix_source;
  rep.config.rhs_source = opt.rhs_source.empty() ? "e1" : opt.rhs_source;
  rep.config.n = n;
  rep.config.max_iter = max_iter;
  rep.config.conv_tol = opt.conv_tol;
  rep.config.emit_harmonic = opt.emit_harmonic;
  rep.config.emit_vectors = opt.emit_vectors;
  rep.config.eps_z = thr.eps_z;
  rep.config.eps_s = thr.eps_s;
  rep.config.eps_eig = thr.eps_eig;

  GmresState state = gmres_init(dense_operator(inst.matrix), inst.rhs, thr);
  rep.config.beta = state.beta();

  bool converged = false;
  while (state.steps() < max_iter && !state.terminal) {
    auto [next, rec] = gmres_advance(state);
    state = std::move(next);
    const index_t m = rec.m;

    const std::vector<HarmonicPair> pairs =
        harmonic_pairs(state.arnoldi, m, thr);
    const StagnationReport srep = stagnation_report(state, pairs, m, thr);

    IterationReportEntry e;
    e.m = m;
    e.resnorm = rec.resnorm;
    e.applicable = srep.applicable;
    if (srep.applicable) {
      e.gap = srep.gap;
      e.k_re = srep.k.real();
      e.k_im = srep.k.imag();
      e.em_y_re = srep.em_y.real();
      e.em_y_im = srep.em_y.imag();
      e.sigma_min_h = srep.sigma_min_h;
      e.gap_identity_error = srep.gap_identity.error;
      e.gap_check_applicable = srep.gap_identity.applicable;
      e.scale_k = srep.scale_k;
      e.scale_y = srep.scale_y;
      e.scale_h = srep.scale_h;
      e.stagnated = srep.stagnated;
      e.predicates_consistent = srep.predicates_consistent;
    }

    if (opt.emit_harmonic) {
      for (const HarmonicPair& p : pairs) e.harmonic.push_back(summarize(p));
    }

    if (srep.applicable) {
      for (index_t idx = 0; idx < pairs.size(); ++idx) {
        if (!pairs[idx].finite()) continue;
        try {
          if (srep.stagnated) {
            e.coincidence.push_back(summarize(
                stagnation_coincidence_check(state, pairs[idx], m, thr), idx,
                "stag"));
          } else {
            e.coincidence.push_back(summarize(
                coincidence_check(state, pairs[idx], m, thr), idx, "nonstag"));
          }
        } catch (const InconsistentStateError&) {
          CoincidenceSummary s;
          s.pair_index = idx;
          s.branch = "skipped";
          e.coincidence.push_back(std::move(s));
        }
      }
    }

    if (opt.emit_vectors) {
      e.has_vectors = true;
      e.y = rec.y.entries();
      e.residual_vector = materialize_residual(state, m).entries();
    }

    rep.iterations.push_back(std::move(e));
    if (rec.resnorm <= opt.conv_tol * state.beta()) {
      converged = true;
      break;
    }
  }

  if (state.arnoldi.breakdown) {
    rep.status = FinalStatus::breakdown;
  } else if (converged ||
             state.resnorm_history.back() <= opt.conv_tol * state.beta()) {
    rep.status = FinalStatus::converged;
  } else {
    rep.status = FinalStatus::exhausted;
  }
  return rep;
}

VerifyResult verify_instance(const ProblemInstance& inst,
                             const Thresholds& thr) {
  VerifyResult result;
  const index_t n = inst.matrix.rows();
  const double norm_a = frobenius_norm(inst.matrix);

  std::ostringstream tag_base;
  tag_base << inst.generator << "(" << inst.parameters << ")";
  auto fail = [&](index_t m, const std::string& what) {
    std::ostringstream os;
    os << tag_base.str() << " step " << m << ": " << what;
    result.violations.push_back(os.str());
    result.ok = false;
  };
  auto check = [&](bool cond, index_t m, const std::string& what) {
    ++result.checks;
    if (!cond) fail(m, what);
  };
  auto describe = [](double value, double bound) {
    std::ostringstream os;
    os << value << " exceeds " << bound;
    return os.str();
  };

  GmresState state = gmres_init(dense_operator(inst.matrix), inst.rhs, thr);
  const double beta = state.beta();
  const double beta2 = beta * beta;

  std::vector<HarmonicPair> prev_pairs;
  std::set<index_t> observed_stagnated;

  while (!state.terminal && state.steps() < n) {
    auto [next, rec] = gmres_advance(state);
    state = std::move(next);
    const index_t m = rec.m;

    // Residual-norm machinery against the explicit residual.
    check(state.resnorm_history[m] <= state.resnorm_history[m - 1] + 1e-12 * beta,
          m, "residual norms are not nonincreasing");
    const ComplexVector rm = materialize_residual(state, m);
    check(std::abs(norm2(rm) - rec.resnorm) <= 1e-9 * beta, m,
          "rotation resnorm disagrees with |b - A V y|: " +
              describe(std::abs(norm2(rm) - rec.resnorm), 1e-9 * beta));
    check(std::abs(dot(rm, state.arnoldi.b) - Complex(norm2(rm) * norm2(rm), 0.0)) <=
              1e-9 * beta2,
          m, "r_m^* r_0 != |r_m|^2");

    // Hessenberg normal equations for y.
    {
      const ComplexDenseMatrix h = state.arnoldi.hessenberg(m);
      const double hsub = state.arnoldi.subdiag(m);
      ComplexDenseMatrix nmat = matmul(adjoint(h), h);
      nmat(m - 1, m - 1) += Complex(hsub * hsub, 0.0);
      ComplexVector lhs = matvec(nmat, rec.y);
      ComplexVector rhs = matvec(adjoint(h), ComplexVector::unit(m, 0));
      scale(rhs, Complex(beta, 0.0));
      const double err = norm2(lhs - rhs);
      const double bound =
          1e-9 * beta * frobenius_norm(state.arnoldi.hessenberg_ext(m));
      check(err <= bound, m,
            "normal-equation residual: " + describe(err, bound));
    }

    const GapIdentityResult gap = gap_identity_check(state, m, thr);
    if (gap.applicable) {
      check(gap.error <= 1e-8 * beta2, m,
            "gap identity: " + describe(gap.error, 1e-8 * beta2));
    }
    const ResidualDifferenceResult rd =
        residual_difference_identity(state, m, thr);
    if (rd.applicable) {
      check(rd.error <= 1e-8 * beta, m,
            "residual-difference identity: " +
                describe(rd.error, 1e-8 * beta));
    }

    if (m >= 2) {
      const double disc = nested_ls_consistency(state, m);
      const double bound = 1e-8 * norm2(state.y_at(m - 1)) + 1e-12;
      check(disc <= bound, m,
            "nested least-squares discrepancy: " + describe(disc, bound));
    }

    // Harmonic pairs.
    const std::vector<HarmonicPair> pairs =
        harmonic_pairs(state.arnoldi, m, thr);
    check(pairs.size() == m, m, "pair count != m");
    {
      const ComplexDenseMatrix h = state.arnoldi.hessenberg(m);
      const double hsub = state.arnoldi.subdiag(m);
      ComplexDenseMatrix amat = matmul(adjoint(h), h);
      amat(m - 1, m - 1) += Complex(hsub * hsub, 0.0);
      const ComplexDenseMatrix bmat = adjoint(h);
      const double pencil_scale = frobenius_norm(amat) + frobenius_norm(bmat);
      const double htilde_f = frobenius_norm(state.arnoldi.hessenberg_ext(m));
      for (const HarmonicPair& p : pairs) {
        ComplexVector lhs = matvec(amat, p.u());
        scale(lhs, p.pencil.beta);
        ComplexVector rhs = matvec(bmat, p.u());
        scale(rhs, p.pencil.alpha);
        const double res = norm2(lhs - rhs);
        check(res <= thr.eps_eig * pencil_scale, m,
              "pencil residual: " + describe(res, thr.eps_eig * pencil_scale));
        if (p.finite()) {
          ComplexVector l2 = matvec(amat, p.u());
          ComplexVector r2 = matvec(bmat, p.u());
          scale(r2, p.sigma());
          const double res10 = norm2(l2 - r2);
          check(res10 <= 1e-9 * htilde_f * htilde_f, m,
                "harmonic pencil equation: " +
                    describe(res10, 1e-9 * htilde_f * htilde_f));
          // Harmonic residual orthogonal to the columns of A V_m.
          ComplexDenseMatrix av(n, m);
          for (index_t j = 0; j < m; ++j) {
            av.set_col(j, state.arnoldi.apply_a(state.arnoldi.basis[j]));
          }
          const ComplexVector ip =
              matvec(adjoint(av), *p.harmonic_residual);
          check(norm2(ip) <= 1e-8 * norm_a, m,
                "harmonic residual not orthogonal to A V_m: " +
                    describe(norm2(ip), 1e-8 * norm_a));
        }
      }
    }

    const StagnationReport srep = stagnation_report(state, pairs, m, thr);
    if (srep.applicable) {
      check(srep.predicates_consistent, m,
            "four-way stagnation predicates disagree");
      if (srep.stagnated && m < n) observed_stagnated.insert(m);

      for (index_t idx = 0; idx < pairs.size(); ++idx) {
        if (!pairs[idx].finite()) continue;
        const HarmonicPair& p = pairs[idx];
        const double sig = std::abs(p.sigma());
        if (srep.stagnated) {
          const CoincidenceResult c =
              stagnation_coincidence_check(state, p, m, thr);
          const double bound = 1e-7 * (norm_a + sig + beta);
          check(c.vector_error <= bound, m,
                "stagnation coincidence: " + describe(c.vector_error, bound));
        } else {
          const CoincidenceResult c = coincidence_check(state, p, m, thr);
          const double bound = 1e-8 * (norm_a + sig);
          check(c.vector_error <= bound, m,
                "coincidence vector error: " +
                    describe(c.vector_error, bound));
          check(c.condition_error <= 1e-8, m, "coincidence condition error");
        }
      }

      if (srep.stagnated && m >= 2) {
        const PersistenceVerdict v =
            persistence_check(pairs, prev_pairs, true, thr);
        check(v.vacuous || v.all_matched, m,
              "harmonic pairs not persistent across the stagnated step");
        if (v.asserts_stagnation) {
          check(srep.stagnated, m,
                "persistence asserts stagnation but the gap does not");
        }
      }
    }

    prev_pairs = pairs;
  }

  if (inst.expected_stagnation_steps) {
    ++result.checks;
    if (observed_stagnated != *inst.expected_stagnation_steps) {
      std::ostringstream os;
      os << "stagnated steps {";
      for (index_t s : observed_stagnated) os << s << ",";
      os << "} differ from the expected set";
      fail(0, os.str());
    }
  }
  return result;
}

VerifyResult verify_seed_sweep(index_t count, index_t n,
                               std::uint64_t base_seed, const Thresholds& thr) {
  VerifyResult total;
  for (index_t i = 0; i < count; ++i) {
    const VerifyResult one =
        verify_instance(random_instance(n, base_seed + i), thr);
    total.checks += one.checks;
    total.ok = total.ok && one.ok;
    total.violations.insert(total.violations.end(), one.violations.begin(),
                            one.violations.end());
  }
  return total;
}

}  // namespace staglab
