#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "staglab/diagnostics.hpp"
#include "staglab/instances.hpp"
#include "staglab/report.hpp"

namespace staglab {

struct RunOptions {
  index_t max_iter = 0;  // 0 = run to the operator dimension
  double conv_tol = 1e-10;
  bool emit_harmonic = true;
  bool emit_vectors = false;
  Thresholds thresholds;
  std::string matrix_source;  // echoed into the report
  std::string rhs_source;
};

/// Runs instrumented GMRES on an instance: per iteration the residual
/// data, the stagnation indicators, the harmonic pair summaries and the
/// coincidence errors.
RunReport run_instrumented(const ProblemInstance& inst,
                           const RunOptions& opt = {});

struct VerifyResult {
  bool ok = true;
  index_t checks = 0;
  std::vector<std::string> violations;
};

/// Runs the complete per-iteration check battery on one instance:
/// residual monotonicity and consistency identities, the residual-gap
/// and residual-difference identities, the four-way stagnation
/// equivalence, coincidence in both branches, pair persistence across
/// stagnated steps, and (when the instance declares them) the exact
/// expected stagnation set.
VerifyResult verify_instance(const ProblemInstance& inst,
                             const Thresholds& thr = {});

/// verify_instance over `count` random instances of order n with seeds
/// base_seed, base_seed+1, ...
VerifyResult verify_seed_sweep(index_t count, index_t n,
                               std::uint64_t base_seed,
                               const Thresholds& thr = {});

}  // namespace staglab
