#include "staglab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "staglab/gmres.hpp"
#include "staglab/numeric.hpp"

namespace staglab {

namespace {

std::string render_steps(const std::set<index_t>& steps) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (index_t s : steps) {
    if (!first) os << ",";
    os << s;
    first = false;
  }
  os << "}";
  return os.str();
}

ComplexDenseMatrix leading_block(const ComplexDenseMatrix& h, index_t k) {
  ComplexDenseMatrix blk(k, k);
  for (index_t j = 0; j < k; ++j)
    for (index_t i = 0; i < k; ++i) blk(i, j) = h(i, j);
  return blk;
}

GmresState run_to_completion(const ComplexDenseMatrix& a,
                             const ComplexVector& b, const Thresholds& thr) {
  GmresState state = gmres_init(dense_operator(a), b, thr);
  while (!state.terminal && state.steps() < a.rows()) {
    state = gmres_advance(state).first;
  }
  return state;
}

/// Stagnated steps of a completed run, judged by the gap predicate.
/// Only steps 1..n-1 are considered.
std::set<index_t> observed_stagnation(const GmresState& state, index_t n,
                                      const Thresholds& thr) {
  const double beta2 = state.beta() * state.beta();
  std::set<index_t> stagnated;
  const index_t last = std::min<index_t>(state.steps(), n - 1);
  for (index_t m = 1; m <= last; ++m) {
    const double prev = state.resnorm_history[m - 1];
    const double cur = state.resnorm_history[m];
    if (std::abs(prev * prev - cur * cur) <= thr.eps_s * beta2) {
      stagnated.insert(m);
    }
  }
  return stagnated;
}

struct Rng {
  std::mt19937_64 engine;
  std::uniform_real_distribution<double> unit{-1.0, 1.0};

  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double real() { return unit(engine); }
  double real(double lo, double hi) {
    return lo + (hi - lo) * (unit(engine) + 1.0) / 2.0;
  }
  Complex cplx() {
    const double re = unit(engine);
    const double im = unit(engine);
    return Complex(re, im);
  }
};

/// Intersects the two real conics a + B x + C y + D (x^2+y^2) = 0 that
/// encode Re f = Im f = 0 for f(t) = <A(b1+t b2), b1+t b2>. Returns the
/// root of smaller modulus, or nothing when the circles miss.
std::optional<Complex> intersect_circles(double a1, double b1, double c1,
                                         double d1, double a2, double b2,
                                         double c2, double d2) {
  const double scale =
      std::max({std::abs(a1), std::abs(b1), std::abs(c1), std::abs(d1),
                std::abs(a2), std::abs(b2), std::abs(c2), std::abs(d2), 1e-30});
  const double tiny = 1e-13 * scale;

  auto pick_smaller = [](std::optional<Complex> x,
                         std::optional<Complex> y) -> std::optional<Complex> {
    if (!x) return y;
    if (!y) return x;
    return std::abs(*x) <= std::abs(*y) ? x : y;
  };

  if (std::abs(d1) <= tiny && std::abs(d2) <= tiny) {
    const double det = b1 * c2 - b2 * c1;
    if (std::abs(det) <= tiny * 1e-2) return std::nullopt;
    const double x = (-a1 * c2 + a2 * c1) / det;
    const double y = (-b1 * a2 + b2 * a1) / det;
    return Complex(x, y);
  }

  // Radical line A0 + B0 x + C0 y = 0.
  const double a0 = a1 * d2 - a2 * d1;
  const double b0 = b1 * d2 - b2 * d1;
  const double c0 = c1 * d2 - c2 * d1;

  // Circle with the larger quadratic coefficient.
  const bool use1 = std::abs(d1) >= std::abs(d2);
  const double a = use1 ? a1 : a2;
  const double b = use1 ? b1 : b2;
  const double c = use1 ? c1 : c2;
  const double d = use1 ? d1 : d2;

  auto solve_quadratic = [&](double qa, double qb,
                             double qc) -> std::optional<std::pair<double, double>> {
    if (std::abs(qa) <= 1e-300) {
      if (std::abs(qb) <= 1e-300) return std::nullopt;
      const double r = -qc / qb;
      return std::make_pair(r, r);
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double r1 = (-qb + sq) / (2.0 * qa);
    const double r2 = (-qb - sq) / (2.0 * qa);
    return std::make_pair(r1, r2);
  };

  if (std::abs(b0) <= tiny && std::abs(c0) <= tiny) {
    if (std::abs(a0) > tiny) return std::nullopt;  // parallel, disjoint
    // Coincident conics: take x = 0 on circle 1.
    const auto roots = solve_quadratic(d, c, a);
    if (!roots) return std::nullopt;
    return pick_smaller(Complex(0.0, roots->first),
                        Complex(0.0, roots->second));
  }

  std::optional<Complex> best;
  if (std::abs(b0) >= std::abs(c0)) {
    // x = p + q y.
    const double p = -a0 / b0;
    const double q = -c0 / b0;
    const double qa = d * (q * q + 1.0);
    const double qb = b * q + c + 2.0 * d * p * q;
    const double qc = a + b * p + d * p * p;
    const auto roots = solve_quadratic(qa, qb, qc);
    if (!roots) return std::nullopt;
    best = pick_smaller(Complex(p + q * roots->first, roots->first),
                        Complex(p + q * roots->second, roots->second));
  } else {
    // y = p + q x.
    const double p = -a0 / c0;
    const double q = -b0 / c0;
    const double qa = d * (q * q + 1.0);
    const double qb = c * q + b + 2.0 * d * p * q;
    const double qc = a + c * p + d * p * p;
    const auto roots = solve_quadratic(qa, qb, qc);
    if (!roots) return std::nullopt;
    best = pick_smaller(Complex(roots->first, p + q * roots->first),
                        Complex(roots->second, p + q * roots->second));
  }
  return best;
}

}  // namespace

ProblemInstance paper_example() {
  ProblemInstance inst;
  inst.matrix = ComplexDenseMatrix{
      {Complex(1, 0), Complex(1, 0), Complex(1, 0)},
      {Complex(1, 0), Complex(0, 0), Complex(1, 0)},
      {Complex(0, 0), Complex(1, 0), Complex(1, 0)}};
  inst.rhs = ComplexVector::unit(3, 0);
  inst.generator = "paper_example";
  inst.parameters = "n=3";
  inst.expected_stagnation_steps = std::set<index_t>{};
  return inst;
}

ProblemInstance cyclic_shift_instance(index_t n) {
  if (n < 2) throw DimensionError("cyclic_shift_instance: n >= 2 required");
  ProblemInstance inst;
  inst.matrix = ComplexDenseMatrix(n, n);
  for (index_t i = 0; i < n; ++i) {
    inst.matrix((i + 1) % n, i) = Complex(1.0, 0.0);
  }
  inst.rhs = ComplexVector::unit(n, 0);
  inst.generator = "cyclic_shift";
  inst.parameters = "n=" + std::to_string(n);
  std::set<index_t> steps;
  for (index_t m = 1; m < n; ++m) steps.insert(m);
  inst.expected_stagnation_steps = std::move(steps);
  return inst;
}

ProblemInstance planted_singular_hessenberg(
    index_t n, const std::set<index_t>& stagnation_steps, std::uint64_t seed) {
  if (n < 3) {
    throw DimensionError("planted_singular_hessenberg: n >= 3 required");
  }
  for (index_t m : stagnation_steps) {
    if (m < 2 || m > n - 1) {
      throw DimensionError(
          "planted_singular_hessenberg: steps must lie in 2..n-1");
    }
  }

  Rng rng(seed);
  const Thresholds thr;
  for (int attempt = 0; attempt < 100; ++attempt) {
    ComplexDenseMatrix h(n, n);
    for (index_t j = 0; j < n; ++j) {
      for (index_t i = 0; i <= j; ++i) h(i, j) = rng.cplx();
      // Real positive subdiagonal, so the Arnoldi run on (H, e_1)
      // reproduces H itself with the identity basis.
      if (j + 1 < n) h(j + 1, j) = Complex(rng.real(0.5, 1.5), 0.0);
    }

    for (index_t m : stagnation_steps) {
      std::vector<Complex> s1(m - 1);
      for (Complex& v : s1) v = rng.cplx();
      while (std::abs(s1.back()) < 0.3) s1.back() = rng.cplx();
      for (index_t i = 0; i + 1 < m; ++i) {
        Complex acc(0.0, 0.0);
        for (index_t k = 0; k + 1 < m; ++k) acc += h(i, k) * s1[k];
        h(i, m - 1) = acc;
      }
      h(m - 1, m - 1) = h(m - 1, m - 2) * s1[m - 2];
    }

    const double nh = frobenius_norm(h);
    bool ok = true;
    for (index_t k = 1; k <= n && ok; ++k) {
      const double smin =
          smallest_singular_triplet(leading_block(h, k)).sigma_min;
      if (stagnation_steps.count(k)) {
        ok = smin <= 1e-14 * nh;
      } else {
        ok = smin > 1e-6 * nh;
      }
    }
    if (!ok) continue;

    // The sigma_min screen bounds the indicators; the gap screen makes
    // the expected set exact under the run-time predicate as well.
    const ComplexVector b = ComplexVector::unit(n, 0);
    const GmresState run = run_to_completion(h, b, thr);
    if (observed_stagnation(run, n, thr) != stagnation_steps) continue;

    ProblemInstance inst;
    inst.matrix = std::move(h);
    inst.rhs = b;
    inst.generator = "planted_singular_hessenberg";
    inst.parameters = "n=" + std::to_string(n) +
                      " steps=" + render_steps(stagnation_steps) +
                      " seed=" + std::to_string(seed);
    inst.seed = seed;
    inst.expected_stagnation_steps = stagnation_steps;
    return inst;
  }
  throw GeneratorError(
      "planted_singular_hessenberg: could not avoid accidental singularity "
      "in 100 reseeds");
}

ProblemInstance step_one_stagnation(index_t n, std::uint64_t seed) {
  if (n < 2) throw DimensionError("step_one_stagnation: n >= 2 required");

  Rng rng(seed);
  const Thresholds thr;
  for (int attempt = 0; attempt < 100; ++attempt) {
    ComplexDenseMatrix a(n, n);
    for (index_t j = 0; j < n; ++j)
      for (index_t i = 0; i < n; ++i) a(i, j) = rng.cplx();
    const double na = frobenius_norm(a);
    if (smallest_singular_triplet(a).sigma_min <= 1e-6 * na) continue;

    for (int btry = 0; btry < 100; ++btry) {
      ComplexVector b1(n), b2(n);
      for (index_t i = 0; i < n; ++i) {
        b1[i] = rng.cplx();
        b2[i] = rng.cplx();
      }
      const ComplexVector ab1 = matvec(a, b1);
      const ComplexVector ab2 = matvec(a, b2);
      const Complex cpp = dot(b1, ab1);
      const Complex cpq = dot(b1, ab2);
      const Complex cqp = dot(b2, ab1);
      const Complex cqq = dot(b2, ab2);

      // f(t) = cpp + t cpq + conj(t) cqp + |t|^2 cqq; with t = x + iy
      // its real and imaginary parts are two circles in (x, y).
      const Complex u = cpq + cqp;
      const Complex w = Complex(0.0, 1.0) * (cpq - cqp);
      auto root = intersect_circles(cpp.real(), u.real(), w.real(), cqq.real(),
                                    cpp.imag(), u.imag(), w.imag(), cqq.imag());
      if (!root) continue;

      // Newton polish on (Re f, Im f).
      double x = root->real();
      double y = root->imag();
      for (int it = 0; it < 3; ++it) {
        const double r2 = x * x + y * y;
        const double f1 = cpp.real() + u.real() * x + w.real() * y +
                          cqq.real() * r2;
        const double f2 = cpp.imag() + u.imag() * x + w.imag() * y +
                          cqq.imag() * r2;
        const double j11 = u.real() + 2.0 * cqq.real() * x;
        const double j12 = w.real() + 2.0 * cqq.real() * y;
        const double j21 = u.imag() + 2.0 * cqq.imag() * x;
        const double j22 = w.imag() + 2.0 * cqq.imag() * y;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) break;
        x -= (f1 * j22 - f2 * j12) / det;
        y -= (-f1 * j21 + f2 * j11) / det;
      }

      ComplexVector b = b1;
      axpy(Complex(x, y), b2, b);
      const double nb = norm2(b);
      if (nb < 1e-8) continue;
      scale(b, Complex(1.0 / nb, 0.0));
      if (std::abs(dot(b, matvec(a, b))) > 1e-13 * na) continue;

      std::set<index_t> expected{1};
      const GmresState run = run_to_completion(a, b, thr);
      if (observed_stagnation(run, n, thr) != expected) continue;

      // Keep the later leading Hessenberg blocks comfortably
      // nonsingular so the indicator equivalences stay crisp.
      bool margins_ok = true;
      const index_t screen_to = std::min<index_t>(run.steps(), n - 1);
      for (index_t m = 2; m <= screen_to && margins_ok; ++m) {
        const ComplexDenseMatrix hm = run.arnoldi.hessenberg(m);
        const double smin = smallest_singular_triplet(hm).sigma_min;
        margins_ok = smin > 1e-6 * frobenius_norm(hm);
      }
      if (!margins_ok) continue;

      ProblemInstance inst;
      inst.matrix = a;
      inst.rhs = std::move(b);
      inst.generator = "step_one_stagnation";
      inst.parameters =
          "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      inst.seed = seed;
      inst.expected_stagnation_steps = std::move(expected);
      return inst;
    }
  }
  throw GeneratorError(
      "step_one_stagnation: degenerate quadratic after 100 resamples");
}

ProblemInstance random_instance(index_t n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("random_instance: n >= 1 required");
  Rng rng(seed);
  ProblemInstance inst;
  inst.matrix = ComplexDenseMatrix(n, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < n; ++i) inst.matrix(i, j) = rng.cplx();
  inst.rhs = ComplexVector(n);
  for (index_t i = 0; i < n; ++i) inst.rhs[i] = rng.cplx();
  inst.generator = "random";
  inst.parameters = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  inst.seed = seed;
  inst.expected_stagnation_steps = std::nullopt;
  return inst;
}

}  // namespace staglab
