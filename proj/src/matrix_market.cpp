#include "staglab/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace staglab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double parse_number(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty()) {
    throw ParseError("non-numeric token '" + tok + "'", line);
  }
  if (!std::isfinite(v)) {
    throw ParseError("non-finite value '" + tok + "'", line);
  }
  return v;
}

long parse_index(const std::string& tok, std::size_t line) {
  long v = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("non-integer index '" + tok + "'", line);
  }
  return v;
}

}  // namespace

ComplexDenseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::size_t lineno = 0;
  std::string line;

  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;
  auto header = tokens(line);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" ||
      lower(header[1]) != "matrix") {
    throw ParseError("malformed MatrixMarket header", lineno);
  }
  const std::string format = lower(header[2]);
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);

  if (format != "coordinate" && format != "array") {
    throw ParseError("unknown format '" + header[2] + "'", lineno);
  }
  if (field == "pattern") {
    throw ParseError("pattern field is unsupported", lineno);
  }
  if (field != "real" && field != "complex" && field != "integer") {
    throw ParseError("unknown field '" + header[3] + "'", lineno);
  }
  if (symmetry == "skew-symmetric") {
    throw ParseError("skew-symmetric symmetry is unsupported", lineno);
  }
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "hermitian") {
    throw ParseError("unknown symmetry '" + header[4] + "'", lineno);
  }
  const bool complex_field = field == "complex";
  const bool symmetric = symmetry != "general";
  const bool hermitian = symmetry == "hermitian";

  // Size line, after comments.
  std::vector<std::string> size_toks;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    size_toks = tokens(line);
    if (size_toks.empty()) continue;
    break;
  }
  const std::size_t want = format == "coordinate" ? 3 : 2;
  if (size_toks.size() != want) {
    throw ParseError("malformed size line", lineno);
  }
  const long rows = parse_index(size_toks[0], lineno);
  const long cols = parse_index(size_toks[1], lineno);
  if (rows < 0 || cols < 0) throw ParseError("negative dimension", lineno);
  if (symmetric && rows != cols) {
    throw ParseError("symmetric matrix must be square", lineno);
  }

  ComplexDenseMatrix a(static_cast<index_t>(rows), static_cast<index_t>(cols));

  if (format == "coordinate") {
    const long nnz = parse_index(size_toks[2], lineno);
    if (nnz < 0) throw ParseError("negative entry count", lineno);
    long seen = 0;
    while (seen < nnz) {
      if (!std::getline(in, line)) {
        throw ParseError("unexpected end of file: expected " +
                             std::to_string(nnz) + " entries, got " +
                             std::to_string(seen),
                         lineno + 1);
      }
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      auto t = tokens(line);
      if (t.empty()) continue;
      const std::size_t need = complex_field ? 4 : 3;
      if (t.size() != need) {
        throw ParseError("expected " + std::to_string(need) + " tokens",
                         lineno);
      }
      const long i = parse_index(t[0], lineno);
      const long j = parse_index(t[1], lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError("index out of range", lineno);
      }
      const double re = parse_number(t[2], lineno);
      const double im = complex_field ? parse_number(t[3], lineno) : 0.0;
      const Complex v(re, im);
      const index_t ii = static_cast<index_t>(i - 1);
      const index_t jj = static_cast<index_t>(j - 1);
      a(ii, jj) += v;
      if (symmetric && ii != jj) {
        a(jj, ii) += hermitian ? std::conj(v) : v;
      }
      ++seen;
    }
  } else {
    // Array format: column-major dense; symmetric/hermitian files store
    // only the lower triangle.
    std::vector<std::pair<index_t, index_t>> slots;
    for (index_t j = 0; j < static_cast<index_t>(cols); ++j) {
      const index_t i0 = symmetric ? j : 0;
      for (index_t i = i0; i < static_cast<index_t>(rows); ++i) {
        slots.emplace_back(i, j);
      }
    }
    std::size_t filled = 0;
    while (filled < slots.size()) {
      if (!std::getline(in, line)) {
        throw ParseError("unexpected end of file in array data", lineno + 1);
      }
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      auto t = tokens(line);
      if (t.empty()) continue;
      const std::size_t need = complex_field ? 2 : 1;
      if (t.size() != need) {
        throw ParseError("expected " + std::to_string(need) + " tokens",
                         lineno);
      }
      const double re = parse_number(t[0], lineno);
      const double im = complex_field ? parse_number(t[1], lineno) : 0.0;
      const auto [i, j] = slots[filled];
      a(i, j) = Complex(re, im);
      if (symmetric && i != j) {
        a(j, i) = hermitian ? std::conj(Complex(re, im)) : Complex(re, im);
      }
      ++filled;
    }
  }

  if (!all_finite(a)) {
    throw ParseError("matrix contains non-finite values", lineno);
  }
  return a;
}

void write_matrix_market(const ComplexDenseMatrix& a,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");

  std::vector<std::pair<index_t, index_t>> nz;
  for (index_t j = 0; j < a.cols(); ++j)
    for (index_t i = 0; i < a.rows(); ++i)
      if (a(i, j) != Complex(0.0, 0.0)) nz.emplace_back(i, j);

  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << a.rows() << " " << a.cols() << " " << nz.size() << "\n";
  char buf[128];
  for (const auto& [i, j] : nz) {
    std::snprintf(buf, sizeof(buf), "%zu %zu %.17g %.17g\n", i + 1, j + 1,
                  a(i, j).real(), a(i, j).imag());
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

ComplexVector read_rhs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<Complex> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() > 2) throw ParseError("expected 're im'", lineno);
    const double re = parse_number(t[0], lineno);
    const double im = t.size() == 2 ? parse_number(t[1], lineno) : 0.0;
    entries.emplace_back(re, im);
  }
  if (entries.empty()) throw ParseError("empty right-hand side", lineno + 1);
  return ComplexVector(std::move(entries));
}

void write_rhs_file(const ComplexVector& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  char buf[96];
  for (index_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v[i].real(), v[i].imag());
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace staglab
