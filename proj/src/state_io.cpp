#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mermin/error.hpp"
#include "mermin/states.hpp"

namespace mermin {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string state_to_text(const ComplexMatrix& mat) {
  std::string out = "{\"dim\": " + std::to_string(mat.rows()) + ", \"matrix\": [\n";
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    out += "  [";
    for (std::size_t c = 0; c < mat.cols(); ++c) {
      out += "[" + g17(mat(r, c).real()) + ", " + g17(mat(r, c).imag()) + "]";
      if (c + 1 < mat.cols()) out += ", ";
    }
    out += r + 1 < mat.rows() ? "],\n" : "]\n";
  }
  out += "]}\n";
  return out;
}

ComplexMatrix parse_matrix_text(std::string_view text, std::size_t expected_dim) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix")) {
    throw Error(ErrorKind::ParseError, "expected an object with a \"matrix\" member");
  }
  if (doc.contains("dim") &&
      (!doc["dim"].is_number_integer() || doc["dim"].get<std::size_t>() != expected_dim)) {
    throw Error(ErrorKind::ParseError, "\"dim\" must be " + std::to_string(expected_dim));
  }
  const auto& rows = doc["matrix"];
  if (!rows.is_array() || rows.size() != expected_dim) {
    throw Error(ErrorKind::ParseError,
                "\"matrix\" must have " + std::to_string(expected_dim) + " rows");
  }
  ComplexMatrix m(expected_dim, expected_dim);
  for (std::size_t r = 0; r < expected_dim; ++r) {
    if (!rows[r].is_array() || rows[r].size() != expected_dim) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < expected_dim; ++c) {
      const auto& entry = rows[r][c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw Error(ErrorKind::ParseError, "entry (" + std::to_string(r) + ", " +
                                               std::to_string(c) + ") is not [re, im]");
      }
      m(r, c) = cplx(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

DensityMatrix load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_density(parse_matrix_text(buf.str(), 8));
}

void save_state(const DensityMatrix& rho, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << state_to_text(rho.matrix());
}

}  // namespace mermin
