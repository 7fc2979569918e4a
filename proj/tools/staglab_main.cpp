#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "staglab/driver.hpp"
#include "staglab/matrix_market.hpp"

namespace fs = std::filesystem;
using namespace staglab;

namespace {

constexpr int kOk = 0;
constexpr int kNumericalFailure = 1;
constexpr int kInputError = 2;

double env_or(const char* name, double fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const double d = std::strtod(v, &end);
  if (end == v || d <= 0.0) {
    throw DimensionError(std::string("invalid value for ") + name);
  }
  return d;
}

Thresholds thresholds_from_env() {
  Thresholds thr;
  thr.eps_z = env_or("STAGLAB_EPS_Z", thr.eps_z);
  thr.eps_s = env_or("STAGLAB_EPS_S", thr.eps_s);
  thr.eps_eig = env_or("STAGLAB_EPS_EIG", thr.eps_eig);
  return thr;
}

std::set<index_t> parse_steps(const std::string& spec) {
  std::set<index_t> steps;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    steps.insert(static_cast<index_t>(std::stoul(tok)));
  }
  return steps;
}

ComplexVector make_rhs(const std::string& spec, index_t n) {
  if (spec == "e1") return ComplexVector::unit(n, 0);
  if (spec.rfind("random:", 0) == 0) {
    const std::uint64_t seed = std::stoull(spec.substr(7));
    ProblemInstance r = random_instance(n, seed);
    return r.rhs;
  }
  ComplexVector v = read_rhs_file(spec);
  if (v.size() != n) {
    throw DimensionError("right-hand side length " + std::to_string(v.size()) +
                         " does not match matrix order " + std::to_string(n));
  }
  return v;
}

void save_instance(const ProblemInstance& inst, const std::string& dir) {
  fs::create_directories(dir);
  write_matrix_market(inst.matrix, dir + "/matrix.mtx");
  write_rhs_file(inst.rhs, dir + "/rhs.txt");

  nlohmann::json j;
  j["generator"] = inst.generator;
  j["parameters"] = inst.parameters;
  j["seed"] = inst.seed;
  j["n"] = inst.matrix.rows();
  if (inst.expected_stagnation_steps) {
    j["expected_stagnation_steps"] =
        std::vector<index_t>(inst.expected_stagnation_steps->begin(),
                             inst.expected_stagnation_steps->end());
  } else {
    j["expected_stagnation_steps"] = "unknown";
  }
  std::ofstream out(dir + "/instance.json");
  if (!out) throw IoError("cannot write " + dir + "/instance.json");
  out << j.dump(2) << "\n";
}

ProblemInstance load_instance_dir(const std::string& dir,
                                  const std::string& rhs_spec) {
  ProblemInstance inst;
  inst.matrix = read_matrix_market(dir + "/matrix.mtx");
  const std::string rhs_path = dir + "/rhs.txt";
  if (!rhs_spec.empty()) {
    inst.rhs = make_rhs(rhs_spec, inst.matrix.rows());
  } else if (fs::exists(rhs_path)) {
    inst.rhs = make_rhs(rhs_path, inst.matrix.rows());
  } else {
    inst.rhs = ComplexVector::unit(inst.matrix.rows(), 0);
  }
  inst.generator = dir;
  inst.parameters = "loaded";

  const std::string meta_path = dir + "/instance.json";
  if (fs::exists(meta_path)) {
    std::ifstream in(meta_path);
    nlohmann::json j;
    in >> j;
    if (j.contains("generator")) inst.generator = j["generator"];
    if (j.contains("parameters")) inst.parameters = j["parameters"];
    if (j.contains("seed")) inst.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("expected_stagnation_steps") &&
        j["expected_stagnation_steps"].is_array()) {
      std::set<index_t> steps;
      for (const auto& s : j["expected_stagnation_steps"]) {
        steps.insert(s.get<index_t>());
      }
      inst.expected_stagnation_steps = std::move(steps);
    }
  }
  return inst;
}

/// Resolves a positional matrix source: a known generator name, an
/// instance directory, or a Matrix Market file.
ProblemInstance resolve_source(const std::string& source,
                               const std::string& rhs_spec) {
  if (source == "paper_example" || source == "paper-example") {
    ProblemInstance inst = paper_example();
    if (!rhs_spec.empty()) inst.rhs = make_rhs(rhs_spec, inst.matrix.rows());
    return inst;
  }
  if (fs::is_directory(source)) return load_instance_dir(source, rhs_spec);
  if (fs::exists(source)) {
    ProblemInstance inst;
    inst.matrix = read_matrix_market(source);
    if (inst.matrix.rows() != inst.matrix.cols()) {
      throw DimensionError("matrix must be square");
    }
    inst.rhs = make_rhs(rhs_spec.empty() ? "e1" : rhs_spec,
                        inst.matrix.rows());
    inst.generator = source;
    inst.parameters = "file";
    return inst;
  }
  throw IoError("no such matrix source: '" + source +
                "' (expected a generator name, instance directory or .mtx "
                "file)");
}

int run_solve(const std::string& source, const std::string& rhs_spec,
              index_t max_iter, double conv_tol, const std::string& report_path,
              std::string format, bool emit_harmonic, bool emit_vectors,
              const Thresholds& thr) {
  ProblemInstance inst = resolve_source(source, rhs_spec);
  RunOptions opt;
  opt.max_iter = max_iter;
  opt.conv_tol = conv_tol;
  opt.emit_harmonic = emit_harmonic;
  opt.emit_vectors = emit_vectors;
  opt.thresholds = thr;
  opt.matrix_source = source;
  opt.rhs_source = rhs_spec.empty() ? "e1" : rhs_spec;

  const RunReport report = run_instrumented(inst, opt);
  if (!report_path.empty()) {
    if (format.empty()) {
      format = report_path.size() >= 4 &&
                       report_path.substr(report_path.size() - 4) == ".csv"
                   ? "csv"
                   : "json";
    }
    write_report(report, report_path, format);
  }

  std::cout << "n = " << report.config.n << ", beta = "
            << format_number(report.config.beta) << "\n";
  std::cout << "m  resnorm                gap                    stagnated\n";
  for (const auto& e : report.iterations) {
    std::cout << e.m << "  " << format_number(e.resnorm) << "  "
              << format_number(e.gap) << "  " << (e.stagnated ? "yes" : "no")
              << "\n";
  }
  std::cout << "status: " << to_string(report.status) << "\n";
  return kOk;
}

int run_generate(const std::string& kind, index_t n, std::uint64_t seed,
                 const std::string& steps_spec, const std::string& outdir) {
  ProblemInstance inst;
  if (kind == "paper-example" || kind == "paper_example") {
    inst = paper_example();
  } else if (kind == "cyclic-shift") {
    inst = cyclic_shift_instance(n);
  } else if (kind == "planted") {
    inst = planted_singular_hessenberg(n, parse_steps(steps_spec), seed);
  } else if (kind == "step-one") {
    inst = step_one_stagnation(n, seed);
  } else if (kind == "random") {
    inst = random_instance(n, seed);
  } else {
    throw IoError("unknown generator '" + kind +
                  "' (paper-example, cyclic-shift, planted, step-one, "
                  "random)");
  }
  save_instance(inst, outdir);
  std::cout << "wrote " << outdir << " (" << inst.generator << ", "
            << inst.parameters << ")\n";
  return kOk;
}

int run_verify(const std::string& source, index_t seed_sweep, index_t n,
               std::uint64_t seed, const std::string& rhs_spec,
               const Thresholds& thr) {
  VerifyResult total;
  if (!source.empty()) {
    const VerifyResult one = verify_instance(resolve_source(source, rhs_spec), thr);
    total.ok = one.ok;
    total.checks = one.checks;
    total.violations = one.violations;
  }
  if (seed_sweep > 0) {
    const VerifyResult sweep = verify_seed_sweep(seed_sweep, n, seed, thr);
    total.ok = total.ok && sweep.ok;
    total.checks += sweep.checks;
    total.violations.insert(total.violations.end(), sweep.violations.begin(),
                            sweep.violations.end());
  }
  if (source.empty() && seed_sweep == 0) {
    throw IoError("verify: give an instance source and/or --seed-sweep");
  }
  for (const std::string& v : total.violations) {
    std::cerr << "violation: " << v << "\n";
  }
  std::cout << (total.ok ? "OK" : "FAILED") << " (" << total.checks
            << " checks, " << total.violations.size() << " violations)\n";
  return total.ok ? kOk : kNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GMRES stagnation diagnostics: harmonic Ritz pairs, the "
               "residual-gap identity and the stagnation equivalences, "
               "evaluated numerically per iteration"};
  app.require_subcommand(1);

  Thresholds thr;
  try {
    thr = thresholds_from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  // solve
  auto* solve = app.add_subcommand("solve", "run instrumented GMRES");
  std::string solve_source;
  std::string solve_rhs;
  std::string report_path;
  std::string report_format;
  index_t max_iter = 0;
  double conv_tol = 1e-10;
  bool no_harmonic = false;
  bool emit_vectors = false;
  solve->add_option("source", solve_source,
                    "matrix source: paper_example, an instance directory, or "
                    "a MatrixMarket file")
      ->required();
  solve->add_option("--rhs", solve_rhs,
                    "right-hand side: path, e1, or random:<seed>");
  solve->add_option("--max-iter", max_iter, "iteration cap (default: n)");
  solve->add_option("--tol", conv_tol, "relative convergence tolerance");
  solve->add_option("--report", report_path, "report output path");
  solve->add_option("--format", report_format, "report format: json or csv");
  solve->add_flag("--no-harmonic", no_harmonic,
                  "omit harmonic pair summaries");
  solve->add_flag("--emit-vectors", emit_vectors,
                  "include y and residual vectors in the report");

  // generate
  auto* gen = app.add_subcommand("generate", "write a problem instance");
  std::string gen_kind;
  std::string gen_steps;
  std::string gen_out;
  index_t gen_n = 8;
  std::uint64_t gen_seed = 1;
  gen->add_option("kind", gen_kind,
                  "paper-example | cyclic-shift | planted | step-one | random")
      ->required();
  gen->add_option("--n", gen_n, "problem order");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--steps", gen_steps,
                  "comma-separated stagnation steps (planted)");
  gen->add_option("-o,--output", gen_out, "output directory")->required();

  // verify
  auto* verify = app.add_subcommand(
      "verify", "run the full diagnostics suite; nonzero exit on violation");
  std::string verify_source;
  std::string verify_rhs;
  index_t sweep_count = 0;
  index_t sweep_n = 10;
  std::uint64_t sweep_seed = 1;
  verify->add_option("source", verify_source,
                     "instance source (optional with --seed-sweep)");
  verify->add_option("--rhs", verify_rhs, "right-hand side override");
  verify->add_option("--seed-sweep", sweep_count,
                     "verify this many random instances");
  verify->add_option("--n", sweep_n, "sweep problem order");
  verify->add_option("--seed", sweep_seed, "sweep base seed");

  // threshold overrides (applied after the environment)
  for (auto* sub : {solve, verify}) {
    sub->add_option("--eps-z", thr.eps_z, "zero-indicator threshold");
    sub->add_option("--eps-s", thr.eps_s, "stagnation gap threshold");
    sub->add_option("--eps-eig", thr.eps_eig, "pencil residual threshold");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (solve->parsed()) {
      return run_solve(solve_source, solve_rhs, max_iter, conv_tol,
                       report_path, report_format, !no_harmonic, emit_vectors,
                       thr);
    }
    if (gen->parsed()) {
      return run_generate(gen_kind, gen_n, gen_seed, gen_steps, gen_out);
    }
    if (verify->parsed()) {
      return run_verify(verify_source, sweep_count, sweep_n, sweep_seed,
                        verify_rhs, thr);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const GeneratorError& e) {
    std::cerr << "generator failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInputError;
}
