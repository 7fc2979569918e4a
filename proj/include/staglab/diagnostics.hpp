#pragma once

#include <optional>
#include <vector>

#include "staglab/harmonic.hpp"

namespace staglab {

// ---------------------------------------------------------------------------
// Residual-gap identities
// ---------------------------------------------------------------------------

/// K = <A v_m, r_{m-1}> = v_m^* A^* r_{m-1}.
Complex compute_k(const GmresState& state, index_t m);

struct GapIdentityResult {
  /// False when the columns of A V_m are numerically dependent; the
  /// identity's hypothesis fails and the check is skipped.
  bool applicable = false;
  /// | (|r_{m-1}|^2 - |r_m|^2) - K e_m^* y |.
  double error = 0.0;
  /// Im(K e_m^* y), recorded separately: the left side is real.
  double imag_part = 0.0;
};

/// Checks |r_{m-1}|^2 - |r_m|^2 = K e_m^* y.
GapIdentityResult gap_identity_check(const GmresState& state, index_t m,
                                     const Thresholds& thr = {});

struct ResidualDifferenceResult {
  bool applicable = false;
  /// | (r_{m-1} - r_m) - K A V_m (V_m^* A^* A V_m)^{-1} e_m |; the
  /// inverse is applied via a dense solve.
  double error = 0.0;
};

ResidualDifferenceResult residual_difference_identity(const GmresState& state,
                                                      index_t m,
                                                      const Thresholds& thr = {});

// ---------------------------------------------------------------------------
// Stagnation report
// ---------------------------------------------------------------------------

/// Per-iteration values of the four stagnation indicators and their
/// agreed verdicts. "Zero" is |value| <= eps_z * scale with the scale
/// recorded alongside each indicator.
struct StagnationReport {
  index_t m = 0;
  /// False when |r_{m-1}| <= 1e-12 * beta: the system already converged
  /// and the singularity theorem's hypothesis r_{m-1} != 0 fails.
  bool applicable = true;

  Complex k{0.0, 0.0};
  Complex em_y{0.0, 0.0};
  double sigma_min_h = 0.0;
  std::vector<Complex> finite_pairs_em_u;

  double gap = 0.0;  // |r_{m-1}|^2 - |r_m|^2
  GapIdentityResult gap_identity;

  // Scales the indicator comparisons are relative to. The y and H
  // scales fall back to beta/|Htilde|_F and |Htilde_m|_F: at m = 1 the
  // plain |y| and |H_m|_F would equal the very entries being tested.
  double scale_k = 0.0;  // |Htilde_m|_F * |r_{m-1}|
  double scale_y = 0.0;  // max(|y|, beta / |Htilde_m|_F)
  double scale_h = 0.0;  // |Htilde_m|_F

  bool k_zero = false;
  bool em_y_zero = false;
  bool h_singular = false;
  bool em_u_zero = false;

  bool stagnated = false;             // |gap| <= eps_s * beta^2
  bool predicates_consistent = false; // the four indicators agree
};

StagnationReport stagnation_report(const GmresState& state,
                                   const std::vector<HarmonicPair>& pairs,
                                   index_t m, const Thresholds& thr = {});

// ---------------------------------------------------------------------------
// Coincidence of residual and harmonic residual vectors
// ---------------------------------------------------------------------------

struct CoincidenceResult {
  index_t pair_index = 0;
  bool stagnation_branch = false;
  /// Scale relating the two vectors: harmonic residual = k_scale * r_m.
  Complex k_scale{0.0, 0.0};
  /// |e_m^* u + k_scale * e_m^* y|.
  double condition_error = 0.0;
  /// |(A V_m u - sigma V_m u) - k_scale (b - A V_m y)|, or in the
  /// stagnation branch the error of the xi V_m s_2 corrected identity.
  double vector_error = 0.0;
  std::optional<Complex> xi;
  std::optional<ComplexVector> s2;
  /// True when dim null(H_m^*) > 1 and the correction used the full
  /// numerical null space instead of a single s_2.
  bool extended_null_space = false;
};

/// Scalar-vs-vector errors for an explicit (sigma, u, k_scale); u may
/// carry any nonzero scale.
CoincidenceResult coincidence_errors(const GmresState& state, Complex sigma,
                                     const ComplexVector& u, Complex k_scale,
                                     index_t m);

/// Non-stagnation branch: derives k_scale = -(e_m^* u)/(e_m^* y) and
/// evaluates both sides of the coincidence condition. Throws
/// InconsistentStateError on a stagnated step (use
/// stagnation_coincidence_check) or when e_m^* y ~ 0 without the
/// stagnation flag.
CoincidenceResult coincidence_check(const GmresState& state,
                                    const HarmonicPair& pair, index_t m,
                                    const Thresholds& thr = {});

/// Stagnated steps: checks
/// A V_m u - sigma V_m u = b - A V_m y + xi V_m s_2 with H_m^* s_2 = 0,
/// s_2 the minimal left singular vector of H_m and xi fitted by least
/// squares.
CoincidenceResult stagnation_coincidence_check(const GmresState& state,
                                               const HarmonicPair& pair,
                                               index_t m,
                                               const Thresholds& thr = {});

// ---------------------------------------------------------------------------
// Persistence of harmonic pairs across a stagnated step
// ---------------------------------------------------------------------------

struct PairMatch {
  index_t index_at_m = 0;
  index_t index_at_prev = 0;
  double sigma_mismatch = 0.0;  // |sigma - sigma'|
  double angle = 0.0;           // between u_{1:m-1} and u'
  bool within_tolerance = false;
};

struct PersistenceVerdict {
  bool applicable = false;  // the step was stagnated
  bool vacuous = false;     // no finite nonzero-sigma pairs at m
  bool all_matched = false;
  double max_sigma_mismatch = 0.0;
  double max_angle = 0.0;
  std::vector<PairMatch> matches;
  /// Converse direction: every finite nonzero pair at m has
  /// |e_m^* u| <= eps_z and matches at m-1, so the lemma asserts
  /// stagnation. Cross-check against StagnationReport.stagnated.
  bool asserts_stagnation = false;
};

/// Matches every finite nonzero-sigma pair at step m against the pairs
/// at step m-1: |sigma - sigma'| <= 1e-7 (1+|sigma|) and prefix-vector
/// angle <= 1e-6. Clustered sigma values are resolved by optimal
/// assignment on the combined cost.
PersistenceVerdict persistence_check(
    const std::vector<HarmonicPair>& pairs_m,
    const std::vector<HarmonicPair>& pairs_m_minus_1, bool stagnated,
    const Thresholds& thr = {});

}  // namespace staglab
