#pragma once

#include <optional>
#include <vector>

#include "staglab/gmres.hpp"

namespace staglab {

/// Harmonic Ritz pair (sigma, u) at iteration m, together with e_m^* u
/// and (for finite sigma) the harmonic residual vector
/// A V_m u - sigma V_m u. Infinite sigma is a first-class outcome: it
/// is exactly what stagnation produces.
struct HarmonicPair {
  PencilEigenPair pencil;
  Complex u_last{0.0, 0.0};
  std::optional<ComplexVector> harmonic_residual;

  bool finite() const { return !pencil.infinite; }
  Complex sigma() const { return pencil.sigma(); }
  const ComplexVector& u() const { return pencil.vector; }
};

/// All m harmonic Ritz pairs at iteration m, from the Hessenberg pencil
/// (H_m^* H_m + |h_{m+1,m}|^2 e_m e_m^*, H_m^*). Finite pairs carry
/// their harmonic residual vector; ordering follows solve_pencil.
std::vector<HarmonicPair> harmonic_pairs(const ArnoldiDecomposition& decomp,
                                         index_t m,
                                         const Thresholds& thr = {});

/// A V_m u - sigma V_m u, computed as V_{m+1}(Htilde_m u) - sigma V_m u.
/// The scale of u is the caller's; pass a non-unit u to reproduce a
/// differently normalized pair. Throws InfinitePairError given an
/// infinite pair.
ComplexVector harmonic_residual_vector(const ArnoldiDecomposition& decomp,
                                       const HarmonicPair& pair, index_t m);

/// Same computation for an explicit (sigma, u).
ComplexVector harmonic_residual_vector(const ArnoldiDecomposition& decomp,
                                       Complex sigma, const ComplexVector& u,
                                       index_t m);

/// Roots of the residual polynomial p_m with p_m(0) = 1 and
/// r_m = p_m(A) b, recovered from the Krylov-basis coefficients of x_m
/// and a companion-matrix eigensolve. Requires a numerically
/// full-rank Krylov matrix (condition <= 1e8); otherwise the oracle is
/// unavailable and ConditioningError is thrown.
std::vector<Complex> residual_polynomial_roots(const GmresState& state,
                                               index_t m);

}  // namespace staglab
