#include "staglab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace staglab {

namespace {

using nlohmann::json;

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

const char* bstr(bool b) { return b ? "true" : "false"; }

std::string complex_list(const std::vector<Complex>& v) {
  std::string out = "[";
  for (index_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += "[" + format_number(v[i].real()) + "," +
           format_number(v[i].imag()) + "]";
  }
  out += "]";
  return out;
}

std::string sigma_string(const std::vector<HarmonicSummary>& pairs) {
  std::string out;
  for (index_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ";";
    if (pairs[i].is_infinite) {
      out += "inf";
    } else {
      out += format_number(pairs[i].sigma_re);
      if (pairs[i].sigma_im >= 0.0) out += "+";
      out += format_number(pairs[i].sigma_im) + "i";
    }
  }
  return out;
}

}  // namespace

std::string to_string(FinalStatus s) {
  switch (s) {
    case FinalStatus::converged: return "converged";
    case FinalStatus::exhausted: return "exhausted";
    case FinalStatus::breakdown: return "breakdown";
  }
  return "exhausted";
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string report_to_json(const RunReport& report) {
  std::ostringstream os;
  const RunConfigEcho& c = report.config;
  os << "{\n";
  os << "  \"schema\": \"staglab-report/1\",\n";
  os << "  \"config\": {\n";
  os << "    \"matrix_source\": " << quote(c.matrix_source) << ",\n";
  os << "    \"rhs_source\": " << quote(c.rhs_source) << ",\n";
  os << "    \"n\": " << c.n << ",\n";
  os << "    \"max_iter\": " << c.max_iter << ",\n";
  os << "    \"conv_tol\": " << format_number(c.conv_tol) << ",\n";
  os << "    \"emit_harmonic\": " << bstr(c.emit_harmonic) << ",\n";
  os << "    \"emit_vectors\": " << bstr(c.emit_vectors) << ",\n";
  os << "    \"eps_z\": " << format_number(c.eps_z) << ",\n";
  os << "    \"eps_s\": " << format_number(c.eps_s) << ",\n";
  os << "    \"eps_eig\": " << format_number(c.eps_eig) << ",\n";
  os << "    \"beta\": " << format_number(c.beta) << "\n";
  os << "  },\n";
  os << "  \"status\": " << quote(to_string(report.status)) << ",\n";
  os << "  \"iterations\": [";
  for (index_t i = 0; i < report.iterations.size(); ++i) {
    const IterationReportEntry& e = report.iterations[i];
    os << (i ? ",\n" : "\n");
    os << "    {\n";
    os << "      \"m\": " << e.m << ",\n";
    os << "      \"resnorm\": " << format_number(e.resnorm) << ",\n";
    os << "      \"gap\": " << format_number(e.gap) << ",\n";
    os << "      \"k_re\": " << format_number(e.k_re) << ",\n";
    os << "      \"k_im\": " << format_number(e.k_im) << ",\n";
    os << "      \"em_y_re\": " << format_number(e.em_y_re) << ",\n";
    os << "      \"em_y_im\": " << format_number(e.em_y_im) << ",\n";
    os << "      \"sigma_min_h\": " << format_number(e.sigma_min_h) << ",\n";
    os << "      \"gap_identity_error\": " << format_number(e.gap_identity_error)
       << ",\n";
    os << "      \"gap_check_applicable\": " << bstr(e.gap_check_applicable)
       << ",\n";
    os << "      \"scale_k\": " << format_number(e.scale_k) << ",\n";
    os << "      \"scale_y\": " << format_number(e.scale_y) << ",\n";
    os << "      \"scale_h\": " << format_number(e.scale_h) << ",\n";
    os << "      \"applicable\": " << bstr(e.applicable) << ",\n";
    os << "      \"stagnated\": " << bstr(e.stagnated) << ",\n";
    os << "      \"predicates_consistent\": " << bstr(e.predicates_consistent)
       << ",\n";
    os << "      \"harmonic\": [";
    for (index_t j = 0; j < e.harmonic.size(); ++j) {
      const HarmonicSummary& h = e.harmonic[j];
      os << (j ? "," : "") << "{\"sigma_re\": " << format_number(h.sigma_re)
         << ", \"sigma_im\": " << format_number(h.sigma_im)
         << ", \"is_infinite\": " << bstr(h.is_infinite)
         << ", \"abs_u_last\": " << format_number(h.abs_u_last) << "}";
    }
    os << "],\n";
    os << "      \"coincidence\": [";
    for (index_t j = 0; j < e.coincidence.size(); ++j) {
      const CoincidenceSummary& s = e.coincidence[j];
      os << (j ? "," : "") << "{\"pair_index\": " << s.pair_index
         << ", \"branch\": " << quote(s.branch)
         << ", \"k_scale_re\": " << format_number(s.k_scale_re)
         << ", \"k_scale_im\": " << format_number(s.k_scale_im)
         << ", \"has_xi\": " << bstr(s.has_xi)
         << ", \"xi_re\": " << format_number(s.xi_re)
         << ", \"xi_im\": " << format_number(s.xi_im)
         << ", \"condition_error\": " << format_number(s.condition_error)
         << ", \"vector_error\": " << format_number(s.vector_error)
         << ", \"extended_null_space\": " << bstr(s.extended_null_space)
         << "}";
    }
    os << "]";
    if (e.has_vectors) {
      os << ",\n      \"y\": " << complex_list(e.y);
      os << ",\n      \"residual_vector\": " << complex_list(e.residual_vector);
    }
    os << "\n    }";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream os;
  os << "m,resnorm,gap,k_re,k_im,em_y_re,em_y_im,sigma_min_h,"
        "gap_identity_error,gap_check_applicable,scale_k,scale_y,scale_h,"
        "applicable,stagnated,predicates_consistent,n_finite_pairs,"
        "max_abs_u_last,sigmas\n";
  for (const IterationReportEntry& e : report.iterations) {
    index_t finite = 0;
    double max_u = 0.0;
    for (const HarmonicSummary& h : e.harmonic) {
      if (!h.is_infinite) {
        ++finite;
        max_u = std::max(max_u, h.abs_u_last);
      }
    }
    os << e.m << "," << format_number(e.resnorm) << ","
       << format_number(e.gap) << "," << format_number(e.k_re) << ","
       << format_number(e.k_im) << "," << format_number(e.em_y_re) << ","
       << format_number(e.em_y_im) << "," << format_number(e.sigma_min_h)
       << "," << format_number(e.gap_identity_error) << ","
       << bstr(e.gap_check_applicable) << "," << format_number(e.scale_k)
       << "," << format_number(e.scale_y) << "," << format_number(e.scale_h)
       << "," << bstr(e.applicable) << "," << bstr(e.stagnated) << ","
       << bstr(e.predicates_consistent) << "," << finite << ","
       << format_number(max_u) << "," << sigma_string(e.harmonic) << "\n";
  }
  return os.str();
}

void write_report(const RunReport& report, const std::string& path,
                  const std::string& format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (format == "json") {
    out << report_to_json(report);
  } else if (format == "csv") {
    out << report_to_csv(report);
  } else {
    throw DimensionError("write_report: unknown format '" + format + "'");
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

RunReport parse_report_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("schema").get<std::string>() != "staglab-report/1") {
    throw ParseError("unknown report schema", 1);
  }
  RunReport r;
  const json& c = j.at("config");
  r.config.matrix_source = c.at("matrix_source").get<std::string>();
  r.config.rhs_source = c.at("rhs_source").get<std::string>();
  r.config.n = c.at("n").get<index_t>();
  r.config.max_iter = c.at("max_iter").get<index_t>();
  r.config.conv_tol = c.at("conv_tol").get<double>();
  r.config.emit_harmonic = c.at("emit_harmonic").get<bool>();
  r.config.emit_vectors = c.at("emit_vectors").get<bool>();
  r.config.eps_z = c.at("eps_z").get<double>();
  r.config.eps_s = c.at("eps_s").get<double>();
  r.config.eps_eig = c.at("eps_eig").get<double>();
  r.config.beta = c.at("beta").get<double>();

  const std::string status = j.at("status").get<std::string>();
  if (status == "converged") r.status = FinalStatus::converged;
  else if (status == "breakdown") r.status = FinalStatus::breakdown;
  else r.status = FinalStatus::exhausted;

  for (const json& je : j.at("iterations")) {
    IterationReportEntry e;
    e.m = je.at("m").get<index_t>();
    e.resnorm = je.at("resnorm").get<double>();
    e.gap = je.at("gap").get<double>();
    e.k_re = je.at("k_re").get<double>();
    e.k_im = je.at("k_im").get<double>();
    e.em_y_re = je.at("em_y_re").get<double>();
    e.em_y_im = je.at("em_y_im").get<double>();
    e.sigma_min_h = je.at("sigma_min_h").get<double>();
    e.gap_identity_error = je.at("gap_identity_error").get<double>();
    e.gap_check_applicable = je.at("gap_check_applicable").get<bool>();
    e.scale_k = je.at("scale_k").get<double>();
    e.scale_y = je.at("scale_y").get<double>();
    e.scale_h = je.at("scale_h").get<double>();
    e.applicable = je.at("applicable").get<bool>();
    e.stagnated = je.at("stagnated").get<bool>();
    e.predicates_consistent = je.at("predicates_consistent").get<bool>();
    for (const json& jh : je.at("harmonic")) {
      HarmonicSummary h;
      h.sigma_re = jh.at("sigma_re").get<double>();
      h.sigma_im = jh.at("sigma_im").get<double>();
      h.is_infinite = jh.at("is_infinite").get<bool>();
      h.abs_u_last = jh.at("abs_u_last").get<double>();
      e.harmonic.push_back(h);
    }
    for (const json& js : je.at("coincidence")) {
      CoincidenceSummary s;
      s.pair_index = js.at("pair_index").get<index_t>();
      s.branch = js.at("branch").get<std::string>();
      s.k_scale_re = js.at("k_scale_re").get<double>();
      s.k_scale_im = js.at("k_scale_im").get<double>();
      s.has_xi = js.at("has_xi").get<bool>();
      s.xi_re = js.at("xi_re").get<double>();
      s.xi_im = js.at("xi_im").get<double>();
      s.condition_error = js.at("condition_error").get<double>();
      s.vector_error = js.at("vector_error").get<double>();
      s.extended_null_space = js.at("extended_null_space").get<bool>();
      e.coincidence.push_back(s);
    }
    if (je.contains("y")) {
      e.has_vectors = true;
      for (const json& jv : je.at("y")) {
        e.y.emplace_back(jv.at(0).get<double>(), jv.at(1).get<double>());
      }
      for (const json& jv : je.at("residual_vector")) {
        e.residual_vector.emplace_back(jv.at(0).get<double>(),
                                       jv.at(1).get<double>());
      }
    }
    r.iterations.push_back(std::move(e));
  }
  return r;
}

}  // namespace staglab
