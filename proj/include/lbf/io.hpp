#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbf/geometry.hpp"
#include "lbf/lbf.hpp"

namespace lbf::io {

enum class MatrixFormat { Delimited, Binary };
enum class ResultFormat { JsonLines, Delimited };

struct TextOptions {
  char delimiter = ',';  // ' ' splits on any run of whitespace
  bool header = false;
};

inline constexpr char kBinaryMagic[4] = {'L', 'B', 'F', '1'};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  if (delimiter == ' ') {
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  }
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, delimiter)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delimiter) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& tok, const std::string& where) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (tok.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::Parse, where + ": cannot parse number '" + tok + "'");
  }
  return v;
}

inline std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return out;
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is, const std::string& path, const char* what) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorKind::Parse, path + ": truncated file while reading " + what);
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace detail

/// Rows of numbers, one point per line. Blank lines are skipped.
inline Matrix parse_delimited(std::istream& in, const std::string& name, const TextOptions& opt = {}) {
  std::vector<double> values;
  std::size_t width = 0, rows = 0, line_no = 0;
  std::string line;
  bool header_pending = opt.header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = detail::split(line, opt.delimiter);
    const std::string where = name + ":" + std::to_string(line_no);
    if (rows == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw Error(ErrorKind::Parse, where + ": expected " + std::to_string(width) + " fields, found " +
                                        std::to_string(fields.size()));
    }
    for (const auto& f : fields) values.push_back(detail::parse_double(f, where));
    ++rows;
  }
  if (rows == 0) throw Error(ErrorKind::Parse, name + ": no data rows");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

/// "LBF1", u64 N, u64 D, then N*D little-endian doubles in row-major order.
inline Matrix parse_binary(std::istream& in, const std::string& name) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw Error(ErrorKind::Parse, name + ": bad magic bytes (expected LBF1)");
  }
  const auto n = detail::get_le<std::uint64_t>(in, name, "row count");
  const auto d = detail::get_le<std::uint64_t>(in, name, "column count");
  if (n == 0 || d == 0 || n > (std::uint64_t{1} << 32) || d > (std::uint64_t{1} << 20)) {
    throw Error(ErrorKind::Parse, name + ": implausible shape " + std::to_string(n) + "x" + std::to_string(d));
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = detail::get_le<double>(in, name, "matrix data");
  if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorKind::Parse, name + ": trailing bytes after data");
  return m;
}

inline PointCloud load_matrix(const std::string& path, MatrixFormat format, const TextOptions& opt = {}) {
  if (format == MatrixFormat::Binary) {
    auto in = detail::open_in(path, std::ios::in | std::ios::binary);
    return PointCloud(parse_binary(in, path));
  }
  auto in = detail::open_in(path);
  return PointCloud(parse_delimited(in, path, opt));
}

inline void write_binary(std::ostream& os, const Matrix& m) {
  os.write(kBinaryMagic, 4);
  detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
  detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) detail::put_le<double>(os, m.data()[i]);
}

/// Full round-trip precision (17 significant digits).
inline void write_delimited(std::ostream& os, const Matrix& m, char delimiter = ',') {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << delimiter;
      os << m(r, c);
    }
    os << '\n';
  }
}

inline void save_matrix(const std::string& path, const Matrix& m, MatrixFormat format, char delimiter = ',') {
  if (format == MatrixFormat::Binary) {
    auto out = detail::open_out(path, std::ios::out | std::ios::binary);
    write_binary(out, m);
  } else {
    auto out = detail::open_out(path);
    write_delimited(out, m, delimiter);
  }
}

/// One integer per line; -1 marks an outlier.
inline std::vector<int> parse_labels(std::istream& in, const std::string& name) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string tok = detail::trim(line);
    if (tok.empty()) continue;
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorKind::Parse, name + ":" + std::to_string(line_no) + ": cannot parse label '" + tok + "'");
    }
    labels.push_back(v);
  }
  return labels;
}

inline std::vector<int> load_labels(const std::string& path) {
  auto in = detail::open_in(path);
  return parse_labels(in, path);
}

inline void save_labels(const std::string& path, const std::vector<int>& labels) {
  auto out = detail::open_out(path);
  for (int l : labels) out << l << '\n';
}

/// Trajectory matrix with 2F rows (x and y per frame) and one column per
/// tracked feature; each column becomes a point in R^{2F}.
inline PointCloud load_trajectories(const std::string& path, const TextOptions& opt = {' ', false}) {
  auto in = detail::open_in(path);
  const Matrix stacked = parse_delimited(in, path, opt);
  if (stacked.rows() % 2 != 0) {
    throw Error(ErrorKind::Parse, path + ": trajectory matrix needs an even number of rows (2F), found " +
                                      std::to_string(stacked.rows()));
  }
  return PointCloud(Matrix(stacked.transpose()));
}

/// Per-point result rows: index, label, distance to the assigned flat.
inline void write_result(std::ostream& os, const ClusteringResult& result, ResultFormat format) {
  if (format == ResultFormat::JsonLines) {
    for (std::size_t i = 0; i < result.labels.size(); ++i) {
      nlohmann::json row = {{"index", i}, {"label", result.labels[i]}, {"distance", result.distances[i]}};
      os << row.dump() << '\n';
    }
    return;
  }
  os << "index,label,distance\n" << std::setprecision(17);
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    os << i << ',' << result.labels[i] << ',' << result.distances[i] << '\n';
  }
}

inline void save_result(const std::string& path, const ClusteringResult& result, ResultFormat format) {
  auto out = detail::open_out(path);
  write_result(out, result, format);
}

}  // namespace lbf::io
