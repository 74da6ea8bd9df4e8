#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "conga/graphs.hpp"

namespace conga::io {

// All readers throw DataError naming the offending file (and line where
// one applies). Writers throw DataError when the file cannot be written.

/// Header `# nodes=<n>`, then one `u<TAB>v` line per undirected edge with
/// 0-based u < v.
void write_edge_list(const std::filesystem::path& path, const Graph& g);
Graph read_edge_list(const std::filesystem::path& path);

/// Header `node,community`; nodes 0-based, communities 1..K, `NA` for an
/// unassigned node. K is the largest community index present unless given.
void write_membership(const std::filesystem::path& path, const Membership& m);
Membership read_membership(const std::filesystem::path& path, int k = 0);

/// Header `n=<cols>`, then one comma-separated row per matrix row with 17
/// significant digits.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& x);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Magic `CNGA`, u32 rows, u32 cols, then rows*cols little-endian f64 in
/// row-major order.
void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& x);
Eigen::MatrixXd read_matrix_binary(const std::filesystem::path& path);

/// Binary P5 graymap, 8 bits, one pixel per entry (rows x cols), pixel value
/// round(255 |x| / max |x|); an all-zero matrix maps to black.
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& x);

/// %.17g formatting shared by every text writer.
std::string format_double(double v);

}  // namespace conga::io
