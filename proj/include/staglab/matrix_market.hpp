#pragma once

#include <string>

#include "staglab/types.hpp"

namespace staglab {

/// Reads a Matrix Market file: coordinate or array format, real,
/// complex or integer field, general/symmetric/hermitian symmetry.
/// Duplicate coordinate entries are summed; symmetric and hermitian
/// storage is expanded to full. The pattern field and skew-symmetric
/// symmetry are rejected. Malformed input throws ParseError with the
/// offending line number.
ComplexDenseMatrix read_matrix_market(const std::string& path);

/// Writes coordinate complex general format with 17 significant digits
/// (bit-exact reload).
void write_matrix_market(const ComplexDenseMatrix& a, const std::string& path);

/// Right-hand-side file: one complex entry per line as "re im" (a lone
/// "re" is taken as purely real).
ComplexVector read_rhs_file(const std::string& path);

void write_rhs_file(const ComplexVector& v, const std::string& path);

}  // namespace staglab
