#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "staglab/types.hpp"

namespace staglab {

/// A test problem (A, b) with provenance and, when the generator can
/// guarantee them, the exact set of stagnated GMRES steps.
struct ProblemInstance {
  ComplexDenseMatrix matrix;
  ComplexVector rhs;
  std::string generator;
  std::string parameters;
  std::uint64_t seed = 0;
  /// nullopt = unknown; an empty set means "no stagnation anywhere".
  std::optional<std::set<index_t>> expected_stagnation_steps;
};

/// The worked 3x3 system: A = [[1,1,1],[1,0,1],[0,1,1]], b = e_1.
/// No stagnation; harmonic Ritz values at m = 2 are +-sqrt(3).
ProblemInstance paper_example();

/// Cyclic shift A e_i = e_{i+1 mod n} with b = e_1: full stagnation at
/// every step 1..n-1, exact solve at n.
ProblemInstance cyclic_shift_instance(index_t n);

/// Random unreduced upper Hessenberg A = H with b = e_1 (the Arnoldi
/// basis is then the identity) whose leading m x m blocks are made
/// exactly singular for each requested m by overwriting column m with
/// H_{m-1} s_1 and the matching diagonal entry. Blocks of other sizes
/// are screened against accidental (near-)singularity and the instance
/// reseeded when the screen fails; the returned expected set is exact.
ProblemInstance planted_singular_hessenberg(
    index_t n, const std::set<index_t>& stagnation_steps, std::uint64_t seed);

/// Random nonsingular A with b constructed so that <A b, b> = 0: the
/// first step stagnates. Later steps are screened to rule out
/// accidental stagnation, so the expected set is exactly {1}.
ProblemInstance step_one_stagnation(index_t n, std::uint64_t seed);

/// Random complex A and b with unit-scale entries; stagnation behavior
/// unknown.
ProblemInstance random_instance(index_t n, std::uint64_t seed);

}  // namespace staglab
