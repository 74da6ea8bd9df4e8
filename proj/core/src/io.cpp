#include "conga/io.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "conga/error.hpp"

namespace conga::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw DataError(path.string() + ": cannot open for reading");
  return in;
}

[[noreturn]] void fail(const fs::path& path, std::size_t line, const std::string& msg) {
  throw DataError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

long long parse_int(const fs::path& path, std::size_t line, const std::string& token) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    fail(path, line, "expected an integer, got \"" + token + "\"");
  }
  if (used != token.size()) fail(path, line, "expected an integer, got \"" + token + "\"");
  return v;
}

double parse_double(const fs::path& path, std::size_t line, const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    fail(path, line, "expected a number, got \"" + token + "\"");
  }
  if (used != token.size() || !std::isfinite(v)) {
    fail(path, line, "expected a finite number, got \"" + token + "\"");
  }
  return v;
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_edge_list(const fs::path& path, const Graph& g) {
  std::ofstream out = open_out(path);
  out << "# nodes=" << g.node_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << '\t' << v << '\n';
  if (!out) throw DataError(path.string() + ": write failed");
}

Graph read_edge_list(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file, expected header \"# nodes=<n>\"");
  strip_cr(line);
  const std::string prefix = "# nodes=";
  if (line.rfind(prefix, 0) != 0) fail(path, 1, "expected header \"# nodes=<n>\"");
  const long long n = parse_int(path, 1, line.substr(prefix.size()));
  if (n < 0) fail(path, 1, "node count must be >= 0");

  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line, '\t');
    if (parts.size() != 2) fail(path, lineno, "expected \"u<TAB>v\"");
    const long long u = parse_int(path, lineno, parts[0]);
    const long long v = parse_int(path, lineno, parts[1]);
    if (u < 0 || v < 0 || u >= n || v >= n) fail(path, lineno, "node index out of range");
    if (u == v) fail(path, lineno, "self-loop");
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

void write_membership(const fs::path& path, const Membership& m) {
  std::ofstream out = open_out(path);
  out << "node,community\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << i << ',';
    if (m.labels[i] >= 0) {
      out << m.labels[i] + 1;
    } else {
      out << "NA";
    }
    out << '\n';
  }
  if (!out) throw DataError(path.string() + ": write failed");
}

Membership read_membership(const fs::path& path, int k) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file, expected header \"node,community\"");
  strip_cr(line);
  if (line != "node,community") fail(path, 1, "expected header \"node,community\"");

  Membership m;
  std::size_t lineno = 1;
  int max_label = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 2) fail(path, lineno, "expected \"node,community\"");
    const long long node = parse_int(path, lineno, parts[0]);
    if (node != static_cast<long long>(m.labels.size())) {
      fail(path, lineno, "nodes must be listed in order starting at 0");
    }
    if (parts[1] == "NA") {
      m.labels.push_back(Membership::kUnassigned);
      continue;
    }
    const long long c = parse_int(path, lineno, parts[1]);
    if (c < 1) fail(path, lineno, "community indices start at 1");
    max_label = std::max(max_label, static_cast<int>(c));
    m.labels.push_back(static_cast<int>(c) - 1);
  }
  if (k > 0 && max_label > k) fail(path, lineno, "community index exceeds K = " + std::to_string(k));
  m.k = k > 0 ? k : max_label;
  return m;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& x) {
  std::ofstream out = open_out(path);
  out << "n=" << x.cols() << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
  if (!out) throw DataError(path.string() + ": write failed");
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file, expected header \"n=<cols>\"");
  strip_cr(line);
  if (line.rfind("n=", 0) != 0) fail(path, 1, "expected header \"n=<cols>\"");
  const long long cols = parse_int(path, 1, line.substr(2));
  if (cols < 1) fail(path, 1, "column count must be >= 1");

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (static_cast<long long>(parts.size()) != cols) {
      fail(path, lineno, "expected " + std::to_string(cols) + " values, got " +
                             std::to_string(parts.size()));
    }
    for (const auto& p : parts) values.push_back(parse_double(path, lineno, p));
    ++rows;
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          values[i * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }
  }
  return x;
}

void write_matrix_binary(const fs::path& path, const Eigen::MatrixXd& x) {
  if (x.rows() > UINT32_MAX || x.cols() > UINT32_MAX) {
    throw DataError(path.string() + ": matrix too large for the binary format");
  }
  std::ofstream out = open_out(path, true);
  out.write("CNGA", 4);
  put_u32(out, static_cast<std::uint32_t>(x.rows()));
  put_u32(out, static_cast<std::uint32_t>(x.cols()));
  std::array<unsigned char, 8> b{};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      std::uint64_t bits = 0;
      const double v = x(i, j);
      std::memcpy(&bits, &v, 8);
      for (int k = 0; k < 8; ++k) b[static_cast<std::size_t>(k)] = static_cast<unsigned char>(bits >> (8 * k));
      out.write(reinterpret_cast<const char*>(b.data()), 8);
    }
  }
  if (!out) throw DataError(path.string() + ": write failed");
}

Eigen::MatrixXd read_matrix_binary(const fs::path& path) {
  std::ifstream in = open_in(path, true);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "CNGA", 4) != 0) {
    throw DataError(path.string() + ": bad magic, not a CNGA matrix file");
  }
  const std::uint32_t rows = get_u32(bytes.data() + 4);
  const std::uint32_t cols = get_u32(bytes.data() + 8);
  const std::size_t expected = 12 + std::size_t{8} * rows * cols;
  if (bytes.size() != expected) {
    throw DataError(path.string() + ": expected " + std::to_string(expected) + " bytes for a " +
                    std::to_string(rows) + "x" + std::to_string(cols) + " matrix, found " +
                    std::to_string(bytes.size()));
  }
  Eigen::MatrixXd x(rows, cols);
  const unsigned char* p = bytes.data() + 12;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j, p += 8) {
      std::uint64_t bits = 0;
      for (int k = 7; k >= 0; --k) bits = (bits << 8) | p[k];
      double v = 0.0;
      std::memcpy(&v, &bits, 8);
      if (!std::isfinite(v)) throw DataError(path.string() + ": non-finite entry");
      x(i, j) = v;
    }
  }
  return x;
}

void write_pgm(const fs::path& path, const Eigen::MatrixXd& x) {
  std::ofstream out = open_out(path, true);
  out << "P5\n" << x.cols() << ' ' << x.rows() << "\n255\n";
  const double max_abs = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double level = max_abs > 0.0 ? std::round(255.0 * std::abs(x(i, j)) / max_abs) : 0.0;
      const char px = static_cast<char>(static_cast<unsigned char>(std::clamp(level, 0.0, 255.0)));
      out.put(px);
    }
  }
  if (!out) throw DataError(path.string() + ": write failed");
}

}  // namespace conga::io
