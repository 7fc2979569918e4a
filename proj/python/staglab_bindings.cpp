#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "staglab/driver.hpp"
#include "staglab/matrix_market.hpp"

namespace py = pybind11;
using namespace staglab;

namespace {

using pyarr = py::array_t<Complex, py::array::f_style | py::array::forcecast>;

ComplexDenseMatrix to_matrix(const pyarr& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
  ComplexDenseMatrix m(static_cast<index_t>(a.shape(0)),
                       static_cast<index_t>(a.shape(1)));
  auto r = a.unchecked<2>();
  for (py::ssize_t j = 0; j < a.shape(1); ++j)
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
      m(static_cast<index_t>(i), static_cast<index_t>(j)) = r(i, j);
  if (!all_finite(m)) throw DimensionError("matrix entries must be finite");
  return m;
}

ComplexVector to_vector(const py::array_t<Complex, py::array::forcecast>& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-d array");
  ComplexVector v(static_cast<index_t>(a.shape(0)));
  auto r = a.unchecked<1>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    v[static_cast<index_t>(i)] = r(i);
  }
  if (!all_finite(v)) throw DimensionError("vector entries must be finite");
  return v;
}

py::array from_matrix(const ComplexDenseMatrix& m) {
  py::array_t<Complex> a({m.rows(), m.cols()});
  auto w = a.mutable_unchecked<2>();
  for (index_t j = 0; j < m.cols(); ++j)
    for (index_t i = 0; i < m.rows(); ++i) w(i, j) = m(i, j);
  return a;
}

py::array from_vector(const ComplexVector& v) {
  py::array_t<Complex> a(
      py::array::ShapeContainer{static_cast<py::ssize_t>(v.size())});
  auto w = a.mutable_unchecked<1>();
  for (index_t i = 0; i < v.size(); ++i) w(i) = v[i];
  return a;
}

py::dict instance_dict(const ProblemInstance& inst) {
  py::dict d;
  d["matrix"] = from_matrix(inst.matrix);
  d["rhs"] = from_vector(inst.rhs);
  d["generator"] = inst.generator;
  d["parameters"] = inst.parameters;
  d["seed"] = inst.seed;
  if (inst.expected_stagnation_steps) {
    py::list steps;
    for (index_t s : *inst.expected_stagnation_steps) steps.append(s);
    d["expected_stagnation_steps"] = steps;
  } else {
    d["expected_stagnation_steps"] = py::none();
  }
  return d;
}

ProblemInstance instance_from(const pyarr& a,
                              const py::array_t<Complex, py::array::forcecast>& b,
                              const py::object& expected) {
  ProblemInstance inst;
  inst.matrix = to_matrix(a);
  inst.rhs = to_vector(b);
  inst.generator = "python";
  inst.parameters = "n=" + std::to_string(inst.matrix.rows());
  if (!expected.is_none()) {
    std::set<index_t> steps;
    for (const auto& s : expected.cast<py::iterable>()) {
      steps.insert(s.cast<index_t>());
    }
    inst.expected_stagnation_steps = std::move(steps);
  }
  return inst;
}

py::dict report_dict(const RunReport& rep) {
  py::dict d;
  d["schema"] = "staglab-report/1";
  py::dict cfg;
  cfg["matrix_source"] = rep.config.matrix_source;
  cfg["rhs_source"] = rep.config.rhs_source;
  cfg["n"] = rep.config.n;
  cfg["max_iter"] = rep.config.max_iter;
  cfg["conv_tol"] = rep.config.conv_tol;
  cfg["emit_harmonic"] = rep.config.emit_harmonic;
  cfg["emit_vectors"] = rep.config.emit_vectors;
  cfg["eps_z"] = rep.config.eps_z;
  cfg["eps_s"] = rep.config.eps_s;
  cfg["eps_eig"] = rep.config.eps_eig;
  cfg["beta"] = rep.config.beta;
  d["config"] = cfg;
  d["status"] = to_string(rep.status);

  py::list iters;
  for (const auto& e : rep.iterations) {
    py::dict je;
    je["m"] = e.m;
    je["resnorm"] = e.resnorm;
    je["gap"] = e.gap;
    je["k"] = Complex(e.k_re, e.k_im);
    je["em_y"] = Complex(e.em_y_re, e.em_y_im);
    je["sigma_min_h"] = e.sigma_min_h;
    je["gap_identity_error"] = e.gap_identity_error;
    je["gap_check_applicable"] = e.gap_check_applicable;
    je["scale_k"] = e.scale_k;
    je["scale_y"] = e.scale_y;
    je["scale_h"] = e.scale_h;
    je["applicable"] = e.applicable;
    je["stagnated"] = e.stagnated;
    je["predicates_consistent"] = e.predicates_consistent;
    py::list hs;
    for (const auto& h : e.harmonic) {
      py::dict jh;
      jh["sigma"] = Complex(h.sigma_re, h.sigma_im);
      jh["is_infinite"] = h.is_infinite;
      jh["abs_u_last"] = h.abs_u_last;
      hs.append(jh);
    }
    je["harmonic"] = hs;
    py::list cs;
    for (const auto& c : e.coincidence) {
      py::dict jc;
      jc["pair_index"] = c.pair_index;
      jc["branch"] = c.branch;
      jc["k_scale"] = Complex(c.k_scale_re, c.k_scale_im);
      jc["xi"] = c.has_xi ? py::cast(Complex(c.xi_re, c.xi_im))
                          : py::object(py::none());
      jc["condition_error"] = c.condition_error;
      jc["vector_error"] = c.vector_error;
      jc["extended_null_space"] = c.extended_null_space;
      cs.append(jc);
    }
    je["coincidence"] = cs;
    if (e.has_vectors) {
      je["y"] = from_vector(ComplexVector(e.y));
      je["residual_vector"] = from_vector(ComplexVector(e.residual_vector));
    }
    iters.append(je);
  }
  d["iterations"] = iters;
  return d;
}

Thresholds make_thresholds(double eps_z, double eps_s, double eps_eig) {
  Thresholds thr;
  thr.eps_z = eps_z;
  thr.eps_s = eps_s;
  thr.eps_eig = eps_eig;
  return thr;
}

}  // namespace

PYBIND11_MODULE(_staglab, m) {
  m.doc() = "GMRES stagnation diagnostics: harmonic Ritz pairs, residual-gap "
            "identities and stagnation equivalences";

  py::register_exception<DimensionError>(m, "DimensionError",
                                         PyExc_ValueError);
  py::register_exception<IndexError>(m, "StepIndexError", PyExc_IndexError);
  py::register_exception<SingularTriangularError>(m, "SingularTriangularError",
                                                  PyExc_ArithmeticError);
  py::register_exception<DegeneratePencilError>(m, "DegeneratePencilError",
                                                PyExc_ArithmeticError);
  py::register_exception<InfinitePairError>(m, "InfinitePairError",
                                            PyExc_ValueError);
  py::register_exception<GeneratorError>(m, "GeneratorError",
                                         PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "MatrixMarketParseError",
                                     PyExc_ValueError);

  m.def(
      "solve",
      [](const pyarr& a, const py::array_t<Complex, py::array::forcecast>& b,
         index_t max_iter, double tol, bool emit_harmonic, bool emit_vectors,
         double eps_z, double eps_s, double eps_eig) {
        ProblemInstance inst = instance_from(a, b, py::none());
        RunOptions opt;
        opt.max_iter = max_iter;
        opt.conv_tol = tol;
        opt.emit_harmonic = emit_harmonic;
        opt.emit_vectors = emit_vectors;
        opt.thresholds = make_thresholds(eps_z, eps_s, eps_eig);
        opt.matrix_source = "python";
        opt.rhs_source = "python";
        return report_dict(run_instrumented(inst, opt));
      },
      py::arg("a"), py::arg("b"), py::arg("max_iter") = 0,
      py::arg("tol") = 1e-10, py::arg("emit_harmonic") = true,
      py::arg("emit_vectors") = false, py::arg("eps_z") = 1e-10,
      py::arg("eps_s") = 1e-10, py::arg("eps_eig") = 1e-9,
      "Run instrumented GMRES on (a, b) and return the per-iteration "
      "diagnostics report as a dict.");

  m.def(
      "verify",
      [](const pyarr& a, const py::array_t<Complex, py::array::forcecast>& b,
         const py::object& expected, double eps_z, double eps_s,
         double eps_eig) {
        const VerifyResult r =
            verify_instance(instance_from(a, b, expected),
                            make_thresholds(eps_z, eps_s, eps_eig));
        py::dict d;
        d["ok"] = r.ok;
        d["checks"] = r.checks;
        d["violations"] = r.violations;
        return d;
      },
      py::arg("a"), py::arg("b"),
      py::arg("expected_stagnation_steps") = py::none(),
      py::arg("eps_z") = 1e-10, py::arg("eps_s") = 1e-10,
      py::arg("eps_eig") = 1e-9,
      "Run the full per-iteration invariant battery on (a, b).");

  m.def(
      "harmonic_ritz",
      [](const pyarr& a, const py::array_t<Complex, py::array::forcecast>& b,
         index_t mstep, double eps_z) {
        Thresholds thr;
        thr.eps_z = eps_z;
        GmresState s = gmres_init(dense_operator(to_matrix(a)), to_vector(b),
                                  thr);
        while (!s.terminal && s.steps() < mstep) s = gmres_advance(s).first;
        if (s.steps() < mstep) {
          throw IndexError("Arnoldi broke down before the requested step");
        }
        py::list out;
        for (const HarmonicPair& p : harmonic_pairs(s.arnoldi, mstep, thr)) {
          py::dict d;
          d["alpha"] = p.pencil.alpha;
          d["beta"] = p.pencil.beta;
          d["is_infinite"] = !p.finite();
          d["sigma"] = p.finite() ? py::cast(p.sigma())
                                  : py::object(py::none());
          d["u"] = from_vector(p.u());
          d["u_last"] = p.u_last;
          d["harmonic_residual"] =
              p.harmonic_residual
                  ? static_cast<py::object>(from_vector(*p.harmonic_residual))
                  : py::object(py::none());
          out.append(d);
        }
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("eps_z") = 1e-10,
      "Harmonic Ritz pairs of (a, b) at iteration m.");

  // Kernels.
  m.def(
      "qr_hessenberg_ls",
      [](const pyarr& htilde, const py::array_t<Complex, py::array::forcecast>& rhs) {
        const HessenbergLsResult r =
            qr_hessenberg_ls(to_matrix(htilde), to_vector(rhs));
        return py::make_tuple(from_vector(r.solution), r.residual_norm);
      },
      py::arg("htilde"), py::arg("rhs"),
      "Givens least squares for an (m+1) x m upper Hessenberg system; "
      "returns (solution, residual_norm).");

  m.def(
      "smallest_singular_triplet",
      [](const pyarr& a) {
        const SingularTriplet t = smallest_singular_triplet(to_matrix(a));
        return py::make_tuple(t.sigma_min, from_vector(t.right_vector),
                              from_vector(t.left_vector));
      },
      py::arg("a"), "Returns (sigma_min, right_vector, left_vector).");

  m.def(
      "solve_pencil",
      [](const pyarr& a, const pyarr& b, double eps_z) {
        Thresholds thr;
        thr.eps_z = eps_z;
        py::list out;
        for (const PencilEigenPair& p :
             solve_pencil(to_matrix(a), to_matrix(b), thr)) {
          py::dict d;
          d["alpha"] = p.alpha;
          d["beta"] = p.beta;
          d["is_infinite"] = p.infinite;
          d["sigma"] = p.infinite ? py::object(py::none())
                                  : py::cast(p.sigma());
          d["vector"] = from_vector(p.vector);
          out.append(d);
        }
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("eps_z") = 1e-10,
      "Eigenpairs of the pencil beta*A*u = alpha*B*u, infinite pairs last.");

  m.def(
      "back_substitute",
      [](const pyarr& r, const py::array_t<Complex, py::array::forcecast>& rhs) {
        return from_vector(back_substitute(to_matrix(r), to_vector(rhs)));
      },
      py::arg("r"), py::arg("rhs"));

  m.def(
      "residual_polynomial_roots",
      [](const pyarr& a, const py::array_t<Complex, py::array::forcecast>& b,
         index_t mstep) {
        GmresState s = gmres_init(dense_operator(to_matrix(a)), to_vector(b));
        while (!s.terminal && s.steps() < mstep) s = gmres_advance(s).first;
        if (s.steps() < mstep) {
          throw IndexError("Arnoldi broke down before the requested step");
        }
        return residual_polynomial_roots(s, mstep);
      },
      py::arg("a"), py::arg("b"), py::arg("m"),
      "Roots of the GMRES residual polynomial at iteration m.");

  // Generators.
  m.def("paper_example", [] { return instance_dict(paper_example()); });
  m.def(
      "cyclic_shift_instance",
      [](index_t n) { return instance_dict(cyclic_shift_instance(n)); },
      py::arg("n"));
  m.def(
      "planted_singular_hessenberg",
      [](index_t n, const std::vector<index_t>& steps, std::uint64_t seed) {
        return instance_dict(planted_singular_hessenberg(
            n, std::set<index_t>(steps.begin(), steps.end()), seed));
      },
      py::arg("n"), py::arg("stagnation_steps"), py::arg("seed"));
  m.def(
      "step_one_stagnation",
      [](index_t n, std::uint64_t seed) {
        return instance_dict(step_one_stagnation(n, seed));
      },
      py::arg("n"), py::arg("seed"));
  m.def(
      "random_instance",
      [](index_t n, std::uint64_t seed) {
        return instance_dict(random_instance(n, seed));
      },
      py::arg("n"), py::arg("seed"));

  m.def(
      "read_matrix_market",
      [](const std::string& path) { return from_matrix(read_matrix_market(path)); },
      py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
