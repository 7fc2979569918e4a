#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "staglab/arnoldi.hpp"
#include "staglab/instances.hpp"
#include "test_support.hpp"

using namespace staglab;
using namespace staglab::testing;

namespace {
const Complex one(1.0, 0.0);

ArnoldiDecomposition advance(ArnoldiDecomposition d, index_t steps) {
  for (index_t i = 0; i < steps; ++i) d = arnoldi_step(d);
  return d;
}
}  // namespace

TEST_CASE("arnoldi_init normalizes the start vector") {
  {
    const auto d = arnoldi_init(dense_operator(ComplexDenseMatrix::identity(3)),
                                ComplexVector::unit(3, 0));
    CHECK(d.beta == 1.0);
    CHECK(d.steps == 0);
    CHECK(std::abs(d.basis[0][0] - one) < 1e-15);
  }
  {
    ComplexVector b(3);
    b[1] = Complex(3.0, 0.0);
    const auto d = arnoldi_init(dense_operator(ComplexDenseMatrix::identity(3)), b);
    CHECK(std::abs(d.beta - 3.0) < 1e-15);
    CHECK(std::abs(d.basis[0][1] - one) < 1e-15);
  }
  {
    ComplexVector b{one, one, one, one};
    const auto d = arnoldi_init(dense_operator(ComplexDenseMatrix::identity(4)), b);
    CHECK(std::abs(d.beta - 2.0) < 1e-15);
  }
  CHECK_THROWS_AS(arnoldi_init(dense_operator(ComplexDenseMatrix::identity(2)),
                               ComplexVector(2)),
                  ZeroRhsError);
}

TEST_CASE("two steps on the worked example reproduce H_2") {
  const ProblemInstance inst = paper_example();
  const auto d =
      advance(arnoldi_init(dense_operator(inst.matrix), inst.rhs), 2);

  const ComplexDenseMatrix h2 = d.hessenberg(2);
  CHECK(std::abs(h2(0, 0) - one) < 1e-14);
  CHECK(std::abs(h2(0, 1) - one) < 1e-14);
  CHECK(std::abs(h2(1, 0) - one) < 1e-14);
  CHECK(std::abs(h2(1, 1)) < 1e-14);
  CHECK(std::abs(d.subdiag(2) - 1.0) < 1e-14);

  // V_2 = [e_1, e_2].
  CHECK(std::abs(d.basis[0][0] - one) < 1e-14);
  CHECK(std::abs(d.basis[1][1] - one) < 1e-14);
  CHECK(norm2(d.basis[1] - ComplexVector::unit(3, 1)) < 1e-14);
}

TEST_CASE("identity operator breaks down at the first step") {
  auto d = arnoldi_init(dense_operator(ComplexDenseMatrix::identity(4)),
                        random_vector(4, 5));
  d = arnoldi_step(d);
  CHECK(d.breakdown);
  CHECK(d.steps == 1);
  CHECK(std::abs(d.hessenberg(1)(0, 0) - one) < 1e-13);
  CHECK(d.subdiag(1) == 0.0);
  CHECK_THROWS_AS(arnoldi_step(d), ExhaustedSpaceError);
}

TEST_CASE("cyclic shift produces the permutation structure") {
  const ProblemInstance inst = cyclic_shift_instance(4);
  auto d = arnoldi_init(dense_operator(inst.matrix), inst.rhs);
  d = advance(d, 3);
  CHECK(!d.breakdown);
  for (index_t k = 0; k < 4; ++k) {
    CHECK(norm2(d.basis[k] - ComplexVector::unit(4, k)) < 1e-14);
  }
  const ComplexDenseMatrix h = d.hessenberg_ext(3);
  for (index_t j = 0; j < 3; ++j) {
    for (index_t i = 0; i < 4; ++i) {
      const double want = (i == j + 1) ? 1.0 : 0.0;
      CHECK(std::abs(h(i, j) - Complex(want, 0.0)) < 1e-14);
    }
  }

  d = arnoldi_step(d);
  CHECK(d.breakdown);
  CHECK(d.steps == 4);
  CHECK(std::abs(d.hessenberg(4)(0, 3) - one) < 1e-14);
  CHECK(d.subdiag(4) == 0.0);
}

TEST_CASE("orthonormality and factorization residual at order 50") {
  const ComplexDenseMatrix a = random_matrix(50, 50, 123);
  auto d = advance(arnoldi_init(dense_operator(a), random_vector(50, 9)), 30);

  const ComplexDenseMatrix v = d.basis_matrix(31);
  const ComplexDenseMatrix gram = matmul(adjoint(v), v);
  double orth = 0.0;
  for (index_t j = 0; j < 31; ++j)
    for (index_t i = 0; i < 31; ++i)
      orth = std::max(orth, std::abs(gram(i, j) - (i == j ? one : Complex())));
  CHECK(orth < 1e-10);

  // A V_m = V_{m+1} Htilde_m.
  ComplexDenseMatrix av(50, 30);
  for (index_t j = 0; j < 30; ++j) av.set_col(j, matvec(a, d.basis[j]));
  const ComplexDenseMatrix vh = matmul(v, d.hessenberg_ext(30));
  double resid = 0.0;
  for (index_t j = 0; j < 30; ++j)
    for (index_t i = 0; i < 50; ++i)
      resid = std::max(resid, std::abs(av(i, j) - vh(i, j)));
  CHECK(resid < 1e-10 * frobenius_norm(a));

  // Unreduced up to the last completed step, subdiagonals real positive.
  for (index_t m = 1; m <= 30; ++m) CHECK(d.subdiag(m) > 0.0);
}

TEST_CASE("stepping past the operator dimension fails") {
  const ComplexDenseMatrix a = random_matrix(3, 3, 31);
  auto d = advance(arnoldi_init(dense_operator(a), random_vector(3, 32)), 3);
  if (!d.breakdown) {
    CHECK_THROWS_AS(arnoldi_step(d), ExhaustedSpaceError);
  }
}

TEST_CASE("the factorization is deterministic") {
  const ComplexDenseMatrix a = random_matrix(12, 12, 55);
  const ComplexVector b = random_vector(12, 56);
  const auto d1 = advance(arnoldi_init(dense_operator(a), b), 6);
  const auto d2 = advance(arnoldi_init(dense_operator(a), b), 6);
  for (index_t j = 0; j < d1.hcols.size(); ++j) {
    for (index_t i = 0; i < d1.hcols[j].size(); ++i) {
      CHECK(d1.hcols[j][i] == d2.hcols[j][i]);
    }
  }
  for (index_t j = 0; j < d1.basis.size(); ++j) {
    for (index_t i = 0; i < 12; ++i) CHECK(d1.basis[j][i] == d2.basis[j][i]);
  }
}
