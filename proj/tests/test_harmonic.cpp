#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "staglab/harmonic.hpp"
#include "staglab/instances.hpp"
#include "test_support.hpp"

using namespace staglab;
using namespace staglab::testing;

namespace {
const Complex one(1.0, 0.0);

GmresState run_steps(const ProblemInstance& inst, index_t steps) {
  GmresState s = gmres_init(dense_operator(inst.matrix), inst.rhs);
  for (index_t i = 0; i < steps; ++i) s = gmres_advance(s).first;
  return s;
}

/// Sorted multiset match: every left value has a partner within tol.
bool multiset_close(std::vector<Complex> a, std::vector<Complex> b,
                    double rel_tol) {
  if (a.size() != b.size()) return false;
  for (const Complex& x : a) {
    double best = 1e300;
    index_t bi = 0;
    for (index_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(x - b[i]);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    if (best > rel_tol * std::max(1.0, std::abs(x))) return false;
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bi));
  }
  return true;
}
}  // namespace

TEST_CASE("worked example: harmonic Ritz values are +-sqrt(3)") {
  const GmresState s = run_steps(paper_example(), 2);
  const auto pairs = harmonic_pairs(s.arnoldi, 2);
  REQUIRE(pairs.size() == 2);
  CHECK(std::abs(pairs[0].sigma() - Complex(std::sqrt(3.0), 0.0)) < 1e-13);
  CHECK(std::abs(pairs[1].sigma() + Complex(std::sqrt(3.0), 0.0)) < 1e-13);

  // The +sqrt(3) vector is parallel to ((sqrt(3)+1)/2, 1/2); compare by
  // angle since the library normalizes to a unit vector.
  ComplexVector ref{Complex((std::sqrt(3.0) + 1.0) / 2.0, 0.0),
                    Complex(0.5, 0.0)};
  CHECK(direction_angle(ref, pairs[0].u()) < 1e-13);
  CHECK(pairs[0].u_last == pairs[0].u()[1]);

  // Harmonic residual parallel to (-1/2, 1/2, 1/2).
  REQUIRE(pairs[0].harmonic_residual.has_value());
  ComplexVector want{Complex(-0.5, 0.0), Complex(0.5, 0.0), Complex(0.5, 0.0)};
  CHECK(direction_angle(want, *pairs[0].harmonic_residual) < 1e-13);
}

TEST_CASE("one step on the identity gives the single pair sigma = 1") {
  ProblemInstance inst;
  inst.matrix = ComplexDenseMatrix::identity(3);
  inst.rhs = ComplexVector::unit(3, 0);
  GmresState s = gmres_init(dense_operator(inst.matrix), inst.rhs);
  s = gmres_advance(s).first;  // breakdown: H_1 = [1], h_21 = 0
  const auto pairs = harmonic_pairs(s.arnoldi, 1);
  REQUIRE(pairs.size() == 1);
  CHECK(!pairs[0].pencil.infinite);
  CHECK(std::abs(pairs[0].sigma() - one) < 1e-13);
}

TEST_CASE("cyclic shift has only infinite pairs before the last step") {
  const GmresState s = run_steps(cyclic_shift_instance(4), 2);
  const auto pairs = harmonic_pairs(s.arnoldi, 2);
  REQUIRE(pairs.size() == 2);
  for (const auto& p : pairs) {
    CHECK(!p.finite());
    CHECK(!p.harmonic_residual.has_value());
  }
}

TEST_CASE("pencil equation and orthogonality hold for every finite pair") {
  const ProblemInstance inst = random_instance(8, 17);
  const GmresState s = run_steps(inst, 6);
  const double norm_a = frobenius_norm(inst.matrix);
  for (index_t m = 1; m <= 6; ++m) {
    const auto pairs = harmonic_pairs(s.arnoldi, m);
    CHECK(pairs.size() == m);  // finite + infinite = m

    const ComplexDenseMatrix h = s.arnoldi.hessenberg(m);
    const double hs = s.arnoldi.subdiag(m);
    ComplexDenseMatrix amat = matmul(adjoint(h), h);
    amat(m - 1, m - 1) += Complex(hs * hs, 0.0);
    const ComplexDenseMatrix bmat = adjoint(h);
    const double htf = frobenius_norm(s.arnoldi.hessenberg_ext(m));

    for (const auto& p : pairs) {
      if (!p.finite()) continue;
      CHECK(p.u_last == p.u()[m - 1]);
      ComplexVector lhs = matvec(amat, p.u());
      ComplexVector rhs = matvec(bmat, p.u());
      scale(rhs, p.sigma());
      CHECK(norm2(lhs - rhs) <= 1e-9 * htf * htf);

      // A-image orthogonality of the harmonic residual.
      for (index_t j = 0; j < m; ++j) {
        const ComplexVector avj = s.arnoldi.apply_a(s.arnoldi.basis[j]);
        CHECK(std::abs(dot(avj, *p.harmonic_residual)) <= 1e-8 * norm_a);
      }
    }
  }
}

TEST_CASE("harmonic_residual_vector rejects infinite pairs") {
  const GmresState s = run_steps(cyclic_shift_instance(4), 2);
  const auto pairs = harmonic_pairs(s.arnoldi, 2);
  CHECK_THROWS_AS(harmonic_residual_vector(s.arnoldi, pairs[0], 2),
                  InfinitePairError);
}

TEST_CASE("an exact eigenpair in the Krylov space gives a zero residual") {
  // Block-diagonal A keeps span{e1, e2} invariant; starting there, the
  // Krylov space captures exact eigenpairs at m = 2.
  ComplexDenseMatrix a = ComplexDenseMatrix::identity(4);
  a(0, 0) = Complex(2, 0);
  a(0, 1) = one;
  a(1, 1) = Complex(3, 0);
  a(2, 2) = Complex(5, 0);
  a(3, 3) = Complex(7, 0);
  ProblemInstance inst;
  inst.matrix = a;
  inst.rhs = ComplexVector::unit(4, 1);
  GmresState s = gmres_init(dense_operator(a), inst.rhs);
  s = gmres_advance(s).first;
  s = gmres_advance(s).first;  // breakdown: invariant subspace reached
  const auto pairs = harmonic_pairs(s.arnoldi, 2);
  for (const auto& p : pairs) {
    REQUIRE(p.finite());
    CHECK(norm2(*p.harmonic_residual) < 1e-12);
  }
}

TEST_CASE("residual polynomial roots: identity at m = 1") {
  ProblemInstance inst;
  inst.matrix = ComplexDenseMatrix::identity(3);
  inst.rhs = random_vector(3, 8);
  GmresState s = gmres_init(dense_operator(inst.matrix), inst.rhs);
  s = gmres_advance(s).first;
  const auto roots = residual_polynomial_roots(s, 1);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - one) < 1e-12);
}

TEST_CASE("residual polynomial roots match the harmonic Ritz values") {
  {
    const GmresState s = run_steps(paper_example(), 2);
    const auto roots = residual_polynomial_roots(s, 2);
    std::vector<Complex> sigmas;
    for (const auto& p : harmonic_pairs(s.arnoldi, 2)) {
      if (p.finite()) sigmas.push_back(p.sigma());
    }
    CHECK(multiset_close(sigmas, roots, 1e-10));
  }
  for (std::uint64_t seed : {61, 62, 63}) {
    const ProblemInstance inst = random_instance(6, seed);
    const GmresState s = run_steps(inst, 3);
    const auto roots = residual_polynomial_roots(s, 3);
    std::vector<Complex> sigmas;
    for (const auto& p : harmonic_pairs(s.arnoldi, 3)) {
      if (p.finite()) sigmas.push_back(p.sigma());
    }
    CHECK(multiset_close(sigmas, roots, 1e-6));
  }
}

TEST_CASE("residual polynomial oracle refuses an ill-conditioned basis") {
  // A near the identity makes the Krylov vectors nearly parallel.
  ComplexDenseMatrix a = ComplexDenseMatrix::identity(5);
  const ComplexDenseMatrix noise = random_matrix(5, 5, 71);
  for (index_t j = 0; j < 5; ++j)
    for (index_t i = 0; i < 5; ++i) a(i, j) += 1e-12 * noise(i, j);
  ProblemInstance inst;
  inst.matrix = a;
  inst.rhs = random_vector(5, 72);
  GmresState s = gmres_init(dense_operator(a), inst.rhs);
  s = gmres_advance(s).first;
  s = gmres_advance(s).first;
  s = gmres_advance(s).first;
  CHECK_THROWS_AS(residual_polynomial_roots(s, 3), ConditioningError);
}
