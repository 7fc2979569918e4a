#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "staglab/arnoldi.hpp"

namespace staglab {

/// One completed GMRES iteration: the projected solution y, the attained
/// residual norm, and the last entry e_m^* y that the stagnation theory
/// revolves around.
struct IterationRecord {
  index_t m = 0;
  ComplexVector y;
  double resnorm = 0.0;
  Complex em_y{0.0, 0.0};
  std::optional<ComplexVector> residual_vector;  // materialized on demand
};

/// GMRES with x_0 = 0: the Arnoldi factorization plus an incremental
/// Givens QR of the extended Hessenberg matrix. y is re-solved by back
/// substitution at every iteration so e_m^* y is available per step.
/// A value type; gmres_advance consumes a state and returns a new one.
struct GmresState {
  ArnoldiDecomposition arnoldi;
  std::vector<GivensRotation> rotations;
  std::vector<ComplexVector> r_cols;     // rotated columns; column j holds
                                         // the upper-triangle entries 0..j
  ComplexVector transformed_rhs;         // beta*e_1 after the rotations
  std::vector<ComplexVector> y_history;  // y at steps 1..steps
  std::vector<double> resnorm_history;   // |r_0|, |r_1|, ...
  bool terminal = false;

  index_t steps() const { return arnoldi.steps; }
  double beta() const { return arnoldi.beta; }
  const ComplexVector& y_at(index_t m) const;
  ComplexDenseMatrix upper_triangular(index_t m) const;
};

GmresState gmres_init(LinearOperator apply_a, const ComplexVector& b,
                      const Thresholds& thr = {});

/// Runs one iteration: one Arnoldi step, rotation update, solve for y,
/// residual-norm append. A lucky breakdown yields the exact-solution
/// record (resnorm <= 1e-12 * beta) and marks the state terminal.
std::pair<GmresState, IterationRecord> gmres_advance(const GmresState& state);

/// b - A V_m y_m recomputed from the stored basis and the recorded y at
/// step m; m = 0 returns b.
ComplexVector materialize_residual(const GmresState& state, index_t m);

/// Solves the projected problem min |b - A V_m (I - e_m e_m^*) x| by a
/// dense Householder oracle, extracts z_{m-1}, and returns
/// |z_{m-1} - y_{m-1}|. Small by the nesting property of the GMRES
/// least-squares problems.
double nested_ls_consistency(const GmresState& state, index_t m);

}  // namespace staglab
