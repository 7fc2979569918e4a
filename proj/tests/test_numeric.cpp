#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "staglab/lapack.hpp"
#include "staglab/numeric.hpp"
#include "test_support.hpp"

using namespace staglab;
using namespace staglab::testing;

namespace {
const Complex one(1.0, 0.0);
const Complex zero(0.0, 0.0);
}  // namespace

TEST_CASE("qr_hessenberg_ls solves the worked 3x2 system") {
  ComplexDenseMatrix h{{one, one}, {one, zero}, {zero, one}};
  ComplexVector rhs{one, zero, zero};
  const auto r = qr_hessenberg_ls(h, rhs);
  CHECK(std::abs(r.solution[0] - Complex(1.0 / 3.0, 0.0)) < 1e-14);
  CHECK(std::abs(r.solution[1] - Complex(1.0 / 3.0, 0.0)) < 1e-14);
  CHECK(std::abs(r.residual_norm - 1.0 / std::sqrt(3.0)) < 1e-14);
}

TEST_CASE("qr_hessenberg_ls exact consistent system") {
  ComplexDenseMatrix h{{one}, {zero}};
  ComplexVector rhs{one, zero};
  const auto r = qr_hessenberg_ls(h, rhs);
  CHECK(std::abs(r.solution[0] - one) < 1e-15);
  CHECK(r.residual_norm < 1e-15);
}

TEST_CASE("qr_hessenberg_ls matches the dense normal-equation oracle") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const ComplexDenseMatrix h = random_hessenberg_ext(5, seed);
    const ComplexVector rhs = random_vector(6, seed + 50);
    const auto r = qr_hessenberg_ls(h, rhs);

    // Oracle: (H~* H~) x = H~* rhs by Gaussian elimination.
    const ComplexDenseMatrix hh = adjoint(h);
    const ComplexVector x = gauss_solve(matmul(hh, h), matvec(hh, rhs));
    CHECK(norm2(r.solution - x) < 1e-10);

    // Residual orthogonality H~*(rhs - H~ x) = 0.
    const ComplexVector res = rhs - matvec(h, r.solution);
    CHECK(norm2(matvec(hh, res)) < 1e-10 * norm2(rhs));
    CHECK(std::abs(norm2(res) - r.residual_norm) < 1e-12);
  }
}

TEST_CASE("qr_hessenberg_ls rejects bad input") {
  ComplexDenseMatrix h{{one, one}, {one, zero}, {zero, one}};
  CHECK_THROWS_AS(qr_hessenberg_ls(h, ComplexVector(2)), DimensionError);
  ComplexDenseMatrix full(3, 2);
  full(2, 0) = one;  // below the subdiagonal
  CHECK_THROWS_AS(qr_hessenberg_ls(full, ComplexVector(3)), DimensionError);
  CHECK_THROWS_AS(qr_hessenberg_ls(ComplexDenseMatrix(3, 3), ComplexVector(3)),
                  DimensionError);
}

TEST_CASE("back_substitute on diagonal and triangular systems") {
  ComplexDenseMatrix r1{{Complex(2, 0), zero}, {zero, Complex(4, 0)}};
  const ComplexVector x1 =
      back_substitute(r1, ComplexVector{Complex(2, 0), Complex(4, 0)});
  CHECK(std::abs(x1[0] - one) < 1e-15);
  CHECK(std::abs(x1[1] - one) < 1e-15);

  ComplexDenseMatrix r2{{one, one}, {zero, one}};
  const ComplexVector x2 =
      back_substitute(r2, ComplexVector{Complex(2, 0), one});
  CHECK(std::abs(x2[0] - one) < 1e-15);
  CHECK(std::abs(x2[1] - one) < 1e-15);
}

TEST_CASE("back_substitute multiply-back on random triangulars") {
  for (std::uint64_t seed : {11, 12, 13}) {
    ComplexDenseMatrix r = random_matrix(8, 8, seed);
    for (index_t j = 0; j < 8; ++j) {
      for (index_t i = j + 1; i < 8; ++i) r(i, j) = zero;
      r(j, j) += Complex(3.0, 0.0);  // keep it well conditioned
    }
    const ComplexVector rhs = random_vector(8, seed + 7);
    const ComplexVector x = back_substitute(r, rhs);
    CHECK(norm2(matvec(r, x) - rhs) < 1e-12 * norm2(rhs));
  }
}

TEST_CASE("back_substitute flags singular diagonals") {
  ComplexDenseMatrix r{{one, one}, {zero, zero}};
  CHECK_THROWS_AS(back_substitute(r, ComplexVector(2)),
                  SingularTriangularError);
}

TEST_CASE("smallest_singular_triplet on the 2x2 with known values") {
  ComplexDenseMatrix m{{one, one}, {one, zero}};
  const auto t = smallest_singular_triplet(m);
  CHECK(std::abs(t.sigma_min - (std::sqrt(5.0) - 1.0) / 2.0) < 1e-14);
  CHECK(std::abs(norm2(matvec(m, t.right_vector)) - t.sigma_min) < 1e-13);
  CHECK(std::abs(norm2(matvec(adjoint(m), t.left_vector)) - t.sigma_min) <
        1e-13);
}

TEST_CASE("smallest_singular_triplet on identity and a rank-deficient shift") {
  const auto id = smallest_singular_triplet(ComplexDenseMatrix::identity(2));
  CHECK(std::abs(id.sigma_min - 1.0) < 1e-14);

  ComplexDenseMatrix shift(3, 3);
  shift(1, 0) = one;
  shift(2, 1) = one;
  const auto t = smallest_singular_triplet(shift);
  CHECK(t.sigma_min < 1e-15);
  CHECK(std::abs(std::abs(t.right_vector[2]) - 1.0) < 1e-13);
  CHECK(norm2(matvec(adjoint(shift), t.left_vector)) < 1e-14);
}

TEST_CASE("smallest_singular_triplet agrees with the full SVD oracle") {
  for (index_t n : {2, 5, 9, 12}) {
    for (std::uint64_t seed : {21, 22, 23}) {
      const ComplexDenseMatrix m = random_matrix(n, n, seed * 100 + n);
      const auto t = smallest_singular_triplet(m);
      const auto oracle = lapack::svd(m);
      const double ref = oracle.sigma.back();
      CHECK(std::abs(t.sigma_min - ref) <= 1e-10 * std::max(1.0, ref));
    }
  }
}

TEST_CASE("smallest_singular_triplet is deterministic") {
  const ComplexDenseMatrix m = random_matrix(6, 6, 77);
  const auto a = smallest_singular_triplet(m);
  const auto b = smallest_singular_triplet(m);
  CHECK(a.sigma_min == b.sigma_min);
  for (index_t i = 0; i < 6; ++i) {
    CHECK(a.right_vector[i] == b.right_vector[i]);
    CHECK(a.left_vector[i] == b.left_vector[i]);
  }
}

TEST_CASE("left_null_basis finds the full numerical null space") {
  CHECK(left_null_basis(ComplexDenseMatrix(2, 2), 1e-12).size() == 2);
  ComplexDenseMatrix shift(3, 3);
  shift(1, 0) = one;
  shift(2, 1) = one;
  const auto basis = left_null_basis(shift, 1e-12);
  REQUIRE(basis.size() == 1);
  CHECK(norm2(matvec(adjoint(shift), basis[0])) < 1e-14);
}

TEST_CASE("solve_pencil reproduces the worked 2x2 pencil") {
  ComplexDenseMatrix amat{{Complex(2, 0), one}, {one, Complex(2, 0)}};
  ComplexDenseMatrix bmat{{one, one}, {one, zero}};
  const auto pairs = solve_pencil(amat, bmat);
  REQUIRE(pairs.size() == 2);
  CHECK(!pairs[0].infinite);
  CHECK(!pairs[1].infinite);
  CHECK(std::abs(pairs[0].sigma() - Complex(std::sqrt(3.0), 0.0)) < 1e-13);
  CHECK(std::abs(pairs[1].sigma() - Complex(-std::sqrt(3.0), 0.0)) < 1e-13);
}

TEST_CASE("solve_pencil with identical matrices gives all ones") {
  const ComplexDenseMatrix eye = ComplexDenseMatrix::identity(3);
  for (const auto& p : solve_pencil(eye, eye)) {
    REQUIRE(!p.infinite);
    CHECK(std::abs(p.sigma() - one) < 1e-13);
  }
}

TEST_CASE("solve_pencil flags the nilpotent pencil as all infinite") {
  ComplexDenseMatrix shift(3, 3);
  shift(0, 1) = one;
  shift(1, 2) = one;
  const auto pairs = solve_pencil(ComplexDenseMatrix::identity(3), shift);
  REQUIRE(pairs.size() == 3);
  for (const auto& p : pairs) CHECK(p.infinite);
}

TEST_CASE("solve_pencil satisfies the homogeneous residual bound") {
  Thresholds thr;
  for (std::uint64_t seed : {31, 32, 33, 34}) {
    const ComplexDenseMatrix a = random_matrix(6, 6, seed);
    const ComplexDenseMatrix b = random_matrix(6, 6, seed + 9);
    const double pencil_scale = frobenius_norm(a) + frobenius_norm(b);
    for (const auto& p : solve_pencil(a, b, thr)) {
      ComplexVector lhs = matvec(a, p.vector);
      ComplexVector rhs = matvec(b, p.vector);
      scale(lhs, p.beta);
      scale(rhs, p.alpha);
      CHECK(norm2(lhs - rhs) <= thr.eps_eig * pencil_scale);
      CHECK(std::abs(norm2(p.vector) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("solve_pencil orders finite pairs by modulus then real part") {
  ComplexDenseMatrix a(3, 3);
  a(0, 0) = Complex(3, 0);
  a(1, 1) = Complex(-3, 0);
  a(2, 2) = one;
  const auto pairs = solve_pencil(a, ComplexDenseMatrix::identity(3));
  REQUIRE(pairs.size() == 3);
  CHECK(std::abs(pairs[0].sigma() - Complex(3, 0)) < 1e-12);
  CHECK(std::abs(pairs[1].sigma() - Complex(-3, 0)) < 1e-12);
  CHECK(std::abs(pairs[2].sigma() - one) < 1e-12);
}

TEST_CASE("solve_pencil reports a singular pencil") {
  ComplexDenseMatrix a(2, 2);
  a(0, 0) = one;
  ComplexDenseMatrix b(2, 2);
  b(0, 0) = one;
  CHECK_THROWS_AS(solve_pencil(a, b), DegeneratePencilError);
}

TEST_CASE("householder_ls matches the normal-equation oracle") {
  for (std::uint64_t seed : {41, 42}) {
    const ComplexDenseMatrix a = random_matrix(9, 5, seed);
    const ComplexVector b = random_vector(9, seed + 3);
    const ComplexVector x = householder_ls(a, b);
    const ComplexDenseMatrix ah = adjoint(a);
    const ComplexVector want = gauss_solve(matmul(ah, a), matvec(ah, b));
    CHECK(norm2(x - want) < 1e-11);
  }
}

TEST_CASE("normalize_phase makes the largest entry real positive") {
  ComplexVector v{Complex(0.0, 0.5), Complex(0.0, -2.0)};
  normalize_phase(v);
  CHECK(v[1].real() > 0.0);
  CHECK(std::abs(v[1].imag()) < 1e-15);
  CHECK(std::abs(norm2(v) - std::hypot(0.5, 2.0)) < 1e-14);
}
