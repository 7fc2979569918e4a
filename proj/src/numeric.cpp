#include "staglab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "staglab/lapack.hpp"

namespace staglab {

GivensRotation make_givens(Complex a, Complex b) {
  GivensRotation g;
  const double absa = std::abs(a);
  const double absb = std::abs(b);
  if (absb == 0.0) {
    g.c = 1.0;
    g.s = Complex(0.0, 0.0);
    return g;
  }
  if (absa == 0.0) {
    g.c = 0.0;
    g.s = Complex(1.0, 0.0);
    return g;
  }
  const double denom = std::hypot(absa, absb);
  g.c = absa / denom;
  g.s = (a / absa) * std::conj(b) / denom;
  return g;
}

void apply_givens(const GivensRotation& g, Complex& a, Complex& b) {
  const Complex ta = g.c * a + g.s * b;
  const Complex tb = -std::conj(g.s) * a + g.c * b;
  a = ta;
  b = tb;
}

HessenbergLsResult qr_hessenberg_ls(const ComplexDenseMatrix& htilde,
                                    const ComplexVector& rhs) {
  const index_t m = htilde.cols();
  if (m < 1 || htilde.rows() != m + 1) {
    throw DimensionError("qr_hessenberg_ls: Htilde must be (m+1) x m, m >= 1");
  }
  if (rhs.size() != m + 1) {
    throw DimensionError("qr_hessenberg_ls: rhs length mismatch");
  }
  for (index_t j = 0; j < m; ++j) {
    for (index_t i = j + 2; i < m + 1; ++i) {
      if (htilde(i, j) != Complex(0.0, 0.0)) {
        throw DimensionError("qr_hessenberg_ls: input is not upper Hessenberg");
      }
    }
  }

  ComplexDenseMatrix r = htilde;
  ComplexVector g = rhs;
  std::vector<GivensRotation> rots(m);
  for (index_t j = 0; j < m; ++j) {
    // Rotations from previous columns touch rows 0..j of column j.
    for (index_t k = 0; k < j; ++k) {
      apply_givens(rots[k], r(k, j), r(k + 1, j));
    }
    rots[j] = make_givens(r(j, j), r(j + 1, j));
    apply_givens(rots[j], r(j, j), r(j + 1, j));
    apply_givens(rots[j], g[j], g[j + 1]);
  }

  ComplexDenseMatrix rtop(m, m);
  ComplexVector gtop(m);
  for (index_t j = 0; j < m; ++j) {
    gtop[j] = g[j];
    for (index_t i = 0; i <= j; ++i) rtop(i, j) = r(i, j);
  }
  HessenbergLsResult out;
  out.solution = back_substitute(rtop, gtop);
  out.residual_norm = std::abs(g[m]);
  return out;
}

ComplexVector back_substitute(const ComplexDenseMatrix& r,
                              const ComplexVector& rhs) {
  const index_t n = r.rows();
  if (r.cols() != n) throw DimensionError("back_substitute: square R required");
  if (rhs.size() != n) throw DimensionError("back_substitute: rhs mismatch");

  double maxdiag = 0.0;
  for (index_t i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::abs(r(i, i)));
  const double tol = 1e-14 * maxdiag;

  ComplexVector x(n);
  for (index_t ii = n; ii-- > 0;) {
    Complex s = rhs[ii];
    for (index_t j = ii + 1; j < n; ++j) s -= r(ii, j) * x[j];
    const Complex d = r(ii, ii);
    if (std::abs(d) <= tol) {
      throw SingularTriangularError(
          "back_substitute: zero or sub-threshold diagonal at index " +
          std::to_string(ii));
    }
    x[ii] = s / d;
  }
  return x;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD
// ---------------------------------------------------------------------------

ColumnSvd jacobi_svd(const ComplexDenseMatrix& m) {
  const index_t rows = m.rows();
  const index_t cols = m.cols();
  if (rows < cols) {
    throw DimensionError("jacobi_svd: rows >= cols required");
  }

  ComplexDenseMatrix g = m;
  ComplexDenseMatrix v = ComplexDenseMatrix::identity(cols);

  const double tol = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (index_t p = 0; p + 1 < cols; ++p) {
      for (index_t q = p + 1; q < cols; ++q) {
        double app = 0.0, aqq = 0.0;
        Complex apq(0.0, 0.0);
        for (index_t i = 0; i < rows; ++i) {
          app += std::norm(g(i, p));
          aqq += std::norm(g(i, q));
          apq += std::conj(g(i, p)) * g(i, q);
        }
        const double mag = std::abs(apq);
        if (app == 0.0 || aqq == 0.0 || mag <= tol * std::sqrt(app * aqq)) {
          continue;
        }
        rotated = true;
        const Complex ephi = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        const Complex sp = s * std::conj(ephi);  // multiplies column q into p
        const Complex sq = s * ephi;             // multiplies column p into q
        for (index_t i = 0; i < rows; ++i) {
          const Complex gp = g(i, p);
          const Complex gq = g(i, q);
          g(i, p) = c * gp - sp * gq;
          g(i, q) = sq * gp + c * gq;
        }
        for (index_t i = 0; i < cols; ++i) {
          const Complex vp = v(i, p);
          const Complex vq = v(i, q);
          v(i, p) = c * vp - sp * vq;
          v(i, q) = sq * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(cols);
  for (index_t j = 0; j < cols; ++j) sigma[j] = norm2(g.col(j));

  std::vector<index_t> order(cols);
  std::iota(order.begin(), order.end(), index_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](index_t a, index_t b) { return sigma[a] > sigma[b]; });

  ColumnSvd out;
  out.sigma.resize(cols);
  out.right_vectors = ComplexDenseMatrix(cols, cols);
  for (index_t j = 0; j < cols; ++j) {
    out.sigma[j] = sigma[order[j]];
    ComplexVector vc = v.col(order[j]);
    normalize_phase(vc);
    out.right_vectors.set_col(j, vc);
  }
  return out;
}

SingularTriplet smallest_singular_triplet(const ComplexDenseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("smallest_singular_triplet: square M, m >= 1");
  }
  const ColumnSvd right = jacobi_svd(m);
  const ColumnSvd left = jacobi_svd(adjoint(m));

  SingularTriplet out;
  out.sigma_min = right.sigma.back();
  out.right_vector = right.right_vectors.col(m.cols() - 1);
  out.left_vector = left.right_vectors.col(m.cols() - 1);
  return out;
}

std::vector<ComplexVector> left_null_basis(const ComplexDenseMatrix& m,
                                           double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("left_null_basis: square M required");
  }
  const ColumnSvd left = jacobi_svd(adjoint(m));
  std::vector<ComplexVector> basis;
  for (index_t j = m.cols(); j-- > 0;) {
    if (left.sigma[j] <= tol) {
      basis.push_back(left.right_vectors.col(j));
    } else {
      break;
    }
  }
  return basis;
}

double condition_estimate(const ComplexDenseMatrix& m) {
  const ColumnSvd s = jacobi_svd(m);
  if (s.sigma.empty()) return 0.0;
  const double smin = s.sigma.back();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s.sigma.front() / smin;
}

// ---------------------------------------------------------------------------
// Pencil eigenproblem
// ---------------------------------------------------------------------------

std::vector<PencilEigenPair> solve_pencil(const ComplexDenseMatrix& amat,
                                          const ComplexDenseMatrix& bmat,
                                          const Thresholds& thr) {
  if (amat.rows() != amat.cols() || bmat.rows() != bmat.cols() ||
      amat.rows() != bmat.rows()) {
    throw DimensionError("solve_pencil: square matrices of equal order");
  }
  const index_t n = amat.rows();
  const double norm_a = frobenius_norm(amat);
  const double norm_b = frobenius_norm(bmat);

  const lapack::GevResult gev = lapack::ggev(amat, bmat);

  std::vector<PencilEigenPair> pairs(n);
  for (index_t j = 0; j < n; ++j) {
    Complex alpha = gev.alpha[j];
    Complex beta = gev.beta[j];
    // A pair at (0, 0) signals det(beta*A - alpha*B) identically zero.
    if (std::abs(alpha) <= 1e-12 * (norm_a + 1e-300) &&
        std::abs(beta) <= 1e-12 * (norm_b + 1e-300)) {
      throw DegeneratePencilError(
          "solve_pencil: pencil is singular as a pencil");
    }
    const double homog = std::hypot(std::abs(alpha), std::abs(beta));
    alpha /= homog;
    beta /= homog;

    PencilEigenPair& p = pairs[j];
    p.infinite =
        std::abs(beta) <= thr.eps_z * (std::abs(alpha) + std::abs(beta));
    // Rotate the homogeneous pair to a canonical phase.
    const Complex anchor = p.infinite ? alpha : beta;
    if (std::abs(anchor) > 0.0) {
      const Complex ph = std::conj(anchor) / std::abs(anchor);
      alpha *= ph;
      beta *= ph;
    }
    p.alpha = alpha;
    p.beta = beta;

    ComplexVector u = gev.right_vectors.col(j);
    const double nu = norm2(u);
    if (nu > 0.0) scale(u, Complex(1.0 / nu, 0.0));
    normalize_phase(u);
    p.vector = std::move(u);
  }

  // |sigma| is rounded to 12 digits for the modulus comparison so that
  // pairs like +-sqrt(3), equal in exact arithmetic, fall through to
  // the real-part tie break rather than being ordered by their last ulp.
  auto rounded_abs = [](Complex sigma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", std::abs(sigma));
    return std::strtod(buf, nullptr);
  };
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const PencilEigenPair& x, const PencilEigenPair& y) {
                     if (x.infinite != y.infinite) return !x.infinite;
                     if (x.infinite) return false;
                     const Complex sx = x.sigma();
                     const Complex sy = y.sigma();
                     const double ax = rounded_abs(sx);
                     const double ay = rounded_abs(sy);
                     if (ax != ay) return ax > ay;
                     if (sx.real() != sy.real()) return sx.real() > sy.real();
                     return sx.imag() > sy.imag();
                   });
  return pairs;
}

// ---------------------------------------------------------------------------
// Householder QR solves
// ---------------------------------------------------------------------------

ComplexVector householder_ls(const ComplexDenseMatrix& a,
                             const ComplexVector& b) {
  const index_t p = a.rows();
  const index_t q = a.cols();
  if (p < q) throw DimensionError("householder_ls: rows >= cols required");
  if (b.size() != p) throw DimensionError("householder_ls: rhs mismatch");

  ComplexDenseMatrix r = a;
  ComplexVector y = b;
  for (index_t k = 0; k < q; ++k) {
    double sigma = 0.0;
    for (index_t i = k; i < p; ++i) sigma += std::norm(r(i, k));
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) continue;

    const Complex x0 = r(k, k);
    const Complex phase =
        (std::abs(x0) == 0.0) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * sigma;

    std::vector<Complex> v(p - k);
    v[0] = x0 - alpha;
    for (index_t i = k + 1; i < p; ++i) v[i - k] = r(i, k);
    double vnorm2 = 0.0;
    for (const Complex& c : v) vnorm2 += std::norm(c);
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    r(k, k) = alpha;
    for (index_t i = k + 1; i < p; ++i) r(i, k) = Complex(0.0, 0.0);
    for (index_t j = k + 1; j < q; ++j) {
      Complex w(0.0, 0.0);
      for (index_t i = k; i < p; ++i) w += std::conj(v[i - k]) * r(i, j);
      w *= beta;
      for (index_t i = k; i < p; ++i) r(i, j) -= w * v[i - k];
    }
    Complex w(0.0, 0.0);
    for (index_t i = k; i < p; ++i) w += std::conj(v[i - k]) * y[i];
    w *= beta;
    for (index_t i = k; i < p; ++i) y[i] -= w * v[i - k];
  }

  ComplexDenseMatrix rtop(q, q);
  ComplexVector ytop(q);
  for (index_t j = 0; j < q; ++j) {
    ytop[j] = y[j];
    for (index_t i = 0; i <= j; ++i) rtop(i, j) = r(i, j);
  }
  return back_substitute(rtop, ytop);
}

ComplexVector solve_square(const ComplexDenseMatrix& a,
                           const ComplexVector& b) {
  if (a.rows() != a.cols()) throw DimensionError("solve_square: square A");
  return householder_ls(a, b);
}

void normalize_phase(ComplexVector& v) {
  index_t imax = 0;
  double amax = 0.0;
  for (index_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (amax == 0.0) return;
  const Complex ph = std::conj(v[imax]) / amax;
  for (index_t i = 0; i < v.size(); ++i) v[i] *= ph;
}

}  // namespace staglab
