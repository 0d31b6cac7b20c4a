#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qhdyson/linalg.hpp"

namespace qhdyson {

using OrderedJson = nlohmann::ordered_json;

/// {"rows": n, "cols": n, "data": [[re, im], ...]} with data in row-major order.
OrderedJson matrix_to_json(const ComplexMatrix& m);

/// Throws ParseError for anything that is not a square matrix document with
/// finite [re, im] entries.
ComplexMatrix matrix_from_json(const nlohmann::json& doc);

ComplexMatrix parse_matrix(const std::string& text);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

/// Shortest text that still carries 17 significant digits, always spelled as
/// a JSON floating-point literal ("1.0", "-0.0", "0.10000000000000001").
std::string format_real(double x);

/// Pretty-prints a document keeping key order; floating-point values go
/// through format_real, non-finite values become null. Arrays of scalars stay
/// on one line.
std::string dump_json(const OrderedJson& doc);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qhdyson
