#pragma once

#include <string>
#include <vector>

#include "staglab/types.hpp"

namespace staglab {

/// Per-pair summary serialized into the report.
struct HarmonicSummary {
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  bool is_infinite = false;
  double abs_u_last = 0.0;
};

struct CoincidenceSummary {
  index_t pair_index = 0;
  std::string branch;  // "nonstag", "stag" or "skipped"
  double k_scale_re = 0.0;
  double k_scale_im = 0.0;
  bool has_xi = false;
  double xi_re = 0.0;
  double xi_im = 0.0;
  double condition_error = 0.0;
  double vector_error = 0.0;
  bool extended_null_space = false;
};

/// One iteration of an instrumented run. Every boolean is recomputable
/// from the serialized scalars and the thresholds echoed in the config.
struct IterationReportEntry {
  index_t m = 0;
  double resnorm = 0.0;
  double gap = 0.0;
  double k_re = 0.0;
  double k_im = 0.0;
  double em_y_re = 0.0;
  double em_y_im = 0.0;
  double sigma_min_h = 0.0;
  double gap_identity_error = 0.0;
  bool gap_check_applicable = false;
  double scale_k = 0.0;
  double scale_y = 0.0;
  double scale_h = 0.0;
  bool applicable = true;
  bool stagnated = false;
  bool predicates_consistent = false;
  std::vector<HarmonicSummary> harmonic;
  std::vector<CoincidenceSummary> coincidence;
  // Present when the run was configured with emit_vectors.
  std::vector<Complex> y;
  std::vector<Complex> residual_vector;
  bool has_vectors = false;
};

struct RunConfigEcho {
  std::string matrix_source;
  std::string rhs_source;
  index_t n = 0;
  index_t max_iter = 0;
  double conv_tol = 1e-10;
  bool emit_harmonic = true;
  bool emit_vectors = false;
  double eps_z = 1e-10;
  double eps_s = 1e-10;
  double eps_eig = 1e-9;
  double beta = 0.0;
};

enum class FinalStatus { converged, exhausted, breakdown };

std::string to_string(FinalStatus s);

struct RunReport {
  RunConfigEcho config;
  std::vector<IterationReportEntry> iterations;
  FinalStatus status = FinalStatus::exhausted;
};

/// Decimal with 15 significant digits; enough to reproduce every
/// threshold comparison, and idempotent under parse-then-write.
std::string format_number(double v);

std::string report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);

/// format: "json" or "csv".
void write_report(const RunReport& report, const std::string& path,
                  const std::string& format);

/// Parses a JSON report written by write_report.
RunReport parse_report_json(const std::string& text);

}  // namespace staglab
