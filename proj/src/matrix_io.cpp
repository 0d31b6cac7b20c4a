#include "qhdyson/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qhdyson {

OrderedJson matrix_to_json(const ComplexMatrix& m) {
  OrderedJson data = OrderedJson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(OrderedJson::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  OrderedJson doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  doc["data"] = std::move(data);
  return doc;
}

ComplexMatrix matrix_from_json(const nlohmann::json& doc) {
  auto fail = [](const std::string& why) -> ComplexMatrix {
    throw Error(ErrorKind::ParseError, "matrix document: " + why);
  };
  if (!doc.is_object()) return fail("top level must be an object");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!doc.contains(key)) return fail(std::string("missing key \"") + key + "\"");
  }
  const auto& rows = doc["rows"];
  const auto& cols = doc["cols"];
  if (!rows.is_number_integer() || !cols.is_number_integer()) {
    return fail("\"rows\" and \"cols\" must be integers");
  }
  const auto n = rows.get<long long>();
  if (n <= 0 || cols.get<long long>() != n) return fail("matrix must be square and non-empty");
  const auto& data = doc["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != n * n) {
    return fail("\"data\" must hold rows*cols entries");
  }

  ComplexMatrix m(n, n);
  for (long long k = 0; k < n * n; ++k) {
    const auto& entry = data[static_cast<std::size_t>(k)];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
      return fail("entry " + std::to_string(k) + " is not a [re, im] pair");
    }
    const double re = entry[0].get<double>();
    const double im = entry[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      return fail("entry " + std::to_string(k) + " is not finite");
    }
    m(k / n, k % n) = Complex(re, im);
  }
  return m;
}

ComplexMatrix parse_matrix(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return matrix_from_json(doc);
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_matrix(buffer.str());
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_text_file(path, dump_json(matrix_to_json(m)));
}

std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

bool is_scalar(const OrderedJson& v) { return !v.is_array() && !v.is_object(); }

void emit_scalar(std::ostringstream& out, const OrderedJson& v) {
  if (v.is_number_float()) {
    out << format_real(v.get<double>());
  } else {
    out << v.dump();
  }
}

void emit(std::ostringstream& out, const OrderedJson& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out << ",\n";
      first = false;
      out << pad << OrderedJson(it.key()).dump() << ": ";
      emit(out, it.value(), depth + 1);
    }
    out << "\n" << close << "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out << "[]";
      return;
    }
    const bool flat = std::all_of(v.begin(), v.end(), is_scalar);
    if (flat) {
      out << "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        emit_scalar(out, v[i]);
      }
      out << "]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ",\n";
      out << pad;
      emit(out, v[i], depth + 1);
    }
    out << "\n" << close << "]";
  } else {
    emit_scalar(out, v);
  }
}

}  // namespace

std::string dump_json(const OrderedJson& doc) {
  std::ostringstream out;
  emit(out, doc, 0);
  out << "\n";
  return out.str();
}

}  // namespace qhdyson
