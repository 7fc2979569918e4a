#pragma once

#include <vector>

#include "staglab/types.hpp"

namespace staglab {

/// Numerical surrogates for the exact-arithmetic statements the library
/// checks. All are declared here so every consumer compares against the
/// same values; the frontend may override them per run.
struct Thresholds {
  double eps_z = 1e-10;    // zero-indicator threshold, relative to a scale
  double eps_s = 1e-10;    // stagnation gap threshold, times beta^2
  double eps_eig = 1e-9;   // pencil residual bound, times (|A|_F + |B|_F)
  double eps_b = 1e-12;    // Arnoldi lucky-breakdown threshold
};

// ---------------------------------------------------------------------------
// Givens rotations
// ---------------------------------------------------------------------------

/// Unitary plane rotation [[c, s], [-conj(s), c]] with real c.
struct GivensRotation {
  double c = 1.0;
  Complex s{0.0, 0.0};
};

/// Rotation mapping (a, b) to (r, 0).
GivensRotation make_givens(Complex a, Complex b);

void apply_givens(const GivensRotation& g, Complex& a, Complex& b);

// ---------------------------------------------------------------------------
// Hessenberg least squares
// ---------------------------------------------------------------------------

struct HessenbergLsResult {
  ComplexVector solution;
  double residual_norm = 0.0;
};

/// Minimizes |rhs - Htilde*x| for an (m+1) x m upper Hessenberg Htilde
/// using Givens rotations on the subdiagonal entries only.
HessenbergLsResult qr_hessenberg_ls(const ComplexDenseMatrix& htilde,
                                    const ComplexVector& rhs);

/// Solves R*x = rhs for upper-triangular R. Throws
/// SingularTriangularError when a diagonal entry falls below
/// 1e-14 times the largest diagonal modulus.
ComplexVector back_substitute(const ComplexDenseMatrix& r,
                              const ComplexVector& rhs);

// ---------------------------------------------------------------------------
// Singular values
// ---------------------------------------------------------------------------

struct SingularTriplet {
  double sigma_min = 0.0;
  ComplexVector right_vector;
  ComplexVector left_vector;
};

/// Smallest singular value of a square M with unit vectors v, u such
/// that |M v| = sigma_min and |M^* u| = sigma_min. One-sided Jacobi;
/// exact-zero singular values are handled (u, v stay well defined).
SingularTriplet smallest_singular_triplet(const ComplexDenseMatrix& m);

struct ColumnSvd {
  std::vector<double> sigma;        // descending, one per column
  ComplexDenseMatrix right_vectors; // orthonormal columns
};

/// One-sided Jacobi SVD of a rows >= cols matrix: returns all singular
/// values and right singular vectors.
ColumnSvd jacobi_svd(const ComplexDenseMatrix& m);

/// Orthonormal basis of the numerical null space of M^*: unit vectors u
/// with |M^* u| <= tol, ordered by ascending singular value.
std::vector<ComplexVector> left_null_basis(const ComplexDenseMatrix& m,
                                           double tol);

/// 2-norm condition number estimate sigma_max/sigma_min (inf when
/// sigma_min = 0).
double condition_estimate(const ComplexDenseMatrix& m);

// ---------------------------------------------------------------------------
// Generalized eigenproblem
// ---------------------------------------------------------------------------

/// Homogeneous eigenpair of the pencil beta*Amat*u = alpha*Bmat*u.
/// (alpha, beta) is scaled to unit norm; the pair is flagged infinite
/// when |beta| <= eps_z * (|alpha| + |beta|). Phase convention: beta
/// real nonnegative (alpha real positive for infinite pairs), vector of
/// unit 2-norm with its largest-modulus entry real positive.
struct PencilEigenPair {
  Complex alpha{0.0, 0.0};
  Complex beta{0.0, 0.0};
  ComplexVector vector;
  bool infinite = false;

  Complex sigma() const { return alpha / beta; }
};

/// Solves the pencil by the QZ reduction (Bmat is never inverted, so a
/// singular Bmat yields infinite pairs rather than a failure). Output
/// order: finite pairs by descending |sigma|, ties by descending real
/// then imaginary part; infinite pairs last.
std::vector<PencilEigenPair> solve_pencil(const ComplexDenseMatrix& amat,
                                          const ComplexDenseMatrix& bmat,
                                          const Thresholds& thr = {});

// ---------------------------------------------------------------------------
// Dense solves (Householder QR)
// ---------------------------------------------------------------------------

/// Least squares min |b - A*x| for rows >= cols via Householder QR.
ComplexVector householder_ls(const ComplexDenseMatrix& a,
                             const ComplexVector& b);

/// Square solve A*x = b via Householder QR.
ComplexVector solve_square(const ComplexDenseMatrix& a,
                           const ComplexVector& b);

/// Rotates a vector so its largest-modulus entry is real positive.
/// No-op on the zero vector.
void normalize_phase(ComplexVector& v);

}  // namespace staglab
