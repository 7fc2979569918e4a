#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "staglab/diagnostics.hpp"
#include "staglab/instances.hpp"
#include "test_support.hpp"

using namespace staglab;
using namespace staglab::testing;

namespace {
const Complex one(1.0, 0.0);

GmresState run_all(const ProblemInstance& inst) {
  GmresState s = gmres_init(dense_operator(inst.matrix), inst.rhs);
  while (!s.terminal && s.steps() < inst.matrix.rows()) {
    s = gmres_advance(s).first;
  }
  return s;
}

ComplexDenseMatrix leading(const ComplexDenseMatrix& h, index_t k) {
  ComplexDenseMatrix blk(k, k);
  for (index_t j = 0; j < k; ++j)
    for (index_t i = 0; i < k; ++i) blk(i, j) = h(i, j);
  return blk;
}
}  // namespace

TEST_CASE("paper_example carries the worked system") {
  const ProblemInstance inst = paper_example();
  REQUIRE(inst.matrix.rows() == 3);
  const double a[3][3] = {{1, 1, 1}, {1, 0, 1}, {0, 1, 1}};
  for (index_t i = 0; i < 3; ++i)
    for (index_t j = 0; j < 3; ++j)
      CHECK(inst.matrix(i, j) == Complex(a[i][j], 0.0));
  CHECK(norm2(inst.rhs - ComplexVector::unit(3, 0)) == 0.0);
  REQUIRE(inst.expected_stagnation_steps.has_value());
  CHECK(inst.expected_stagnation_steps->empty());

  const GmresState s = run_all(inst);
  const ComplexVector r2 = materialize_residual(s, 2);
  CHECK(std::abs(r2[0] - Complex(1.0 / 3.0, 0)) < 1e-14);
  const auto pairs = harmonic_pairs(s.arnoldi, 2);
  CHECK(std::abs(pairs[0].sigma() - Complex(std::sqrt(3.0), 0)) < 1e-13);
}

TEST_CASE("cyclic shift instances") {
  CHECK_THROWS_AS(cyclic_shift_instance(1), DimensionError);

  const ProblemInstance c5 = cyclic_shift_instance(5);
  REQUIRE(c5.expected_stagnation_steps.has_value());
  CHECK(c5.expected_stagnation_steps->size() == 4);
  const GmresState s5 = run_all(c5);
  for (index_t m = 0; m < 5; ++m)
    CHECK(std::abs(s5.resnorm_history[m] - 1.0) < 1e-14);
  CHECK(s5.resnorm_history[5] < 1e-14);

  const ProblemInstance c2 = cyclic_shift_instance(2);
  CHECK(*c2.expected_stagnation_steps == std::set<index_t>{1});

  const ProblemInstance c4 = cyclic_shift_instance(4);
  const GmresState s4 = run_all(c4);
  for (index_t m = 1; m < 4; ++m) {
    for (const auto& p : harmonic_pairs(s4.arnoldi, m)) CHECK(!p.finite());
  }
}

TEST_CASE("planted singular blocks are singular exactly where asked") {
  const ProblemInstance inst = planted_singular_hessenberg(6, {3}, 1);
  const double nh = frobenius_norm(inst.matrix);
  for (index_t k = 1; k <= 6; ++k) {
    const double smin =
        smallest_singular_triplet(leading(inst.matrix, k)).sigma_min;
    if (k == 3) {
      CHECK(smin <= 1e-14 * nh);
    } else {
      CHECK(smin > 1e-6 * nh);
    }
  }

  // GMRES confirms: equality exactly at the planted step.
  const GmresState s = run_all(inst);
  for (index_t m = 1; m <= 5; ++m) {
    const double prev = s.resnorm_history[m - 1];
    const double cur = s.resnorm_history[m];
    if (m == 3) {
      CHECK(std::abs(prev * prev - cur * cur) <= 1e-10);
    } else {
      CHECK(prev * prev - cur * cur > 1e-10);
    }
  }
}

TEST_CASE("planted consecutive steps and the empty plant") {
  const ProblemInstance two = planted_singular_hessenberg(5, {2, 3}, 4);
  const GmresState s = run_all(two);
  const std::set<index_t> want{2, 3};
  std::set<index_t> got;
  for (index_t m = 1; m < 5 && m <= s.steps(); ++m) {
    const double prev = s.resnorm_history[m - 1];
    const double cur = s.resnorm_history[m];
    if (std::abs(prev * prev - cur * cur) <= 1e-10) got.insert(m);
  }
  CHECK(got == want);

  const ProblemInstance none = planted_singular_hessenberg(4, {}, 8);
  const GmresState sn = run_all(none);
  for (index_t m = 1; m < 4; ++m) {
    const double prev = sn.resnorm_history[m - 1];
    const double cur = sn.resnorm_history[m];
    CHECK(prev * prev - cur * cur > 1e-10);
  }
}

TEST_CASE("planted generator validates its inputs") {
  CHECK_THROWS_AS(planted_singular_hessenberg(2, {}, 1), DimensionError);
  CHECK_THROWS_AS(planted_singular_hessenberg(6, {1}, 1), DimensionError);
  CHECK_THROWS_AS(planted_singular_hessenberg(6, {5}, 1), DimensionError);
  CHECK_THROWS_AS(planted_singular_hessenberg(6, {6}, 1), DimensionError);
}

TEST_CASE("step-one stagnation: K = 0 at the first step") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const ProblemInstance inst = step_one_stagnation(6, seed);
    const double na = frobenius_norm(inst.matrix);
    const double beta = norm2(inst.rhs);
    CHECK(std::abs(dot(inst.rhs, matvec(inst.matrix, inst.rhs))) <=
          1e-13 * na * beta * beta);

    const GmresState s = run_all(inst);
    CHECK(std::abs(compute_k(s, 1)) <= 1e-10 * na * beta * beta);
    CHECK(std::abs(s.resnorm_history[1] - s.resnorm_history[0]) <=
          1e-10 * beta);
    CHECK(*inst.expected_stagnation_steps == std::set<index_t>{1});
  }
}

TEST_CASE("step-one smallest case has a singular 1x1 Hessenberg") {
  const ProblemInstance inst = step_one_stagnation(2, 7);
  const GmresState s = run_all(inst);
  CHECK(std::abs(s.arnoldi.hessenberg(1)(0, 0)) <=
        1e-12 * frobenius_norm(inst.matrix));
}

TEST_CASE("generators are deterministic in (parameters, seed)") {
  const ProblemInstance a = random_instance(10, 42);
  const ProblemInstance b = random_instance(10, 42);
  for (index_t j = 0; j < 10; ++j) {
    for (index_t i = 0; i < 10; ++i) CHECK(a.matrix(i, j) == b.matrix(i, j));
    CHECK(a.rhs[j] == b.rhs[j]);
  }
  const ProblemInstance p1 = planted_singular_hessenberg(6, {3}, 5);
  const ProblemInstance p2 = planted_singular_hessenberg(6, {3}, 5);
  for (index_t j = 0; j < 6; ++j)
    for (index_t i = 0; i < 6; ++i) CHECK(p1.matrix(i, j) == p2.matrix(i, j));
  const ProblemInstance s1 = step_one_stagnation(5, 11);
  const ProblemInstance s2 = step_one_stagnation(5, 11);
  for (index_t i = 0; i < 5; ++i) CHECK(s1.rhs[i] == s2.rhs[i]);
}

TEST_CASE("random_instance basics") {
  CHECK_THROWS_AS(random_instance(0, 1), DimensionError);
  const ProblemInstance one_dim = random_instance(1, 9);
  CHECK(!one_dim.expected_stagnation_steps.has_value());
  const GmresState s = run_all(one_dim);
  CHECK(s.resnorm_history.back() <= 1e-12 * s.beta());
}
