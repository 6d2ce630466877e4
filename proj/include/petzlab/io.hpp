#pragma once

// JSON file formats.
//   matrix:  {"rows": r, "cols": c, "re": [...], "im": [...]}   (row-major)
//   channel: {"dim_in": d, "dim_out": dp, "kraus": [matrix, ...]}

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "petzlab/channels.hpp"
#include "petzlab/operators.hpp"

namespace petzlab::io {

using nlohmann::json;

inline json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<long long>();
    const auto cols = j.at("cols").get<long long>();
    if (rows <= 0 || cols <= 0) throw MalformedInput("rows and cols must be positive");
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    const auto n = static_cast<std::size_t>(rows * cols);
    if (re.size() != n || im.size() != n) {
      throw MalformedInput("expected " + std::to_string(n) + " entries in re and im");
    }
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index k = 0; k < cols; ++k) {
        const auto idx = static_cast<std::size_t>(i * cols + k);
        m(i, k) = Complex(re[idx], im[idx]);
      }
    require_finite(m, "matrix file");
    return m;
  } catch (const json::exception& e) {
    throw MalformedInput(e.what());
  }
}

inline json channel_to_json(const KrausChannel& c) {
  json kraus = json::array();
  for (const auto& e : c.kraus_ops()) kraus.push_back(matrix_to_json(e));
  return {{"dim_in", c.dim_in()}, {"dim_out", c.dim_out()}, {"kraus", kraus}};
}

/// Shapes are validated; `checked` additionally enforces trace preservation.
inline KrausChannel channel_from_json(const json& j, bool checked = true) {
  try {
    const auto d = j.at("dim_in").get<long long>();
    const auto dp = j.at("dim_out").get<long long>();
    std::vector<ComplexMatrix> ops;
    for (const auto& m : j.at("kraus")) {
      ops.push_back(matrix_from_json(m));
      if (ops.back().rows() != dp || ops.back().cols() != d) {
        throw MalformedInput("Kraus operator shape does not match dim_out x dim_in");
      }
    }
    return checked ? KrausChannel(std::move(ops)) : KrausChannel::unchecked(std::move(ops));
  } catch (const json::exception& e) {
    throw MalformedInput(e.what());
  }
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
}

inline ComplexMatrix read_matrix(const std::string& path) { return matrix_from_json(read_json(path)); }

inline KrausChannel read_channel(const std::string& path, bool checked = true) {
  return channel_from_json(read_json(path), checked);
}

}  // namespace petzlab::io
