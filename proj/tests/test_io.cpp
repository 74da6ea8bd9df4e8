#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "conga/error.hpp"
#include "conga/io.hpp"
#include "support.hpp"

namespace conga {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("conga_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name, const std::string& body = {}) const {
    const fs::path p = dir_ / name;
    if (!body.empty()) std::ofstream(p, std::ios::binary) << body;
    return p;
  }

  template <class F>
  static std::string error_of(F&& f) {
    try {
      f();
    } catch (const DataError& e) {
      return e.what();
    }
    return "no error";
  }

  fs::path dir_;
};

TEST_F(IoTest, EdgeListRoundTrip) {
  const Graph g = sbm_generate({5, 7}, 0.8, 0.2, std::uint64_t{3}).graph;
  io::write_edge_list(file("g.tsv"), g);
  const Graph back = io::read_edge_list(file("g.tsv"));
  EXPECT_EQ(back.node_count(), g.node_count());
  EXPECT_EQ(back.edges(), g.edges());
}

TEST_F(IoTest, EdgeListErrorsCarryLine) {
  const auto p = file("bad.tsv", "# nodes=3\n0\t1\n1\tx\n");
  EXPECT_NE(error_of([&] { io::read_edge_list(p); }).find("bad.tsv:3:"), std::string::npos);
  const auto q = file("range.tsv", "# nodes=3\n0\t3\n");
  EXPECT_NE(error_of([&] { io::read_edge_list(q); }).find(":2: node index out of range"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::read_edge_list(file("loop.tsv", "# nodes=2\n1\t1\n")); }).find("self-loop"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::read_edge_list(file("hdr.tsv", "3\n")); }).find(":1:"), std::string::npos);
  EXPECT_NE(error_of([&] { io::read_edge_list(dir_ / "missing.tsv"); }).find("missing.tsv"),
            std::string::npos);
}

TEST_F(IoTest, MembershipRoundTripWithUnassigned) {
  Membership m = Membership::from_sizes({2, 3, 1});
  m.labels[1] = Membership::kUnassigned;
  io::write_membership(file("m.csv"), m);
  std::ifstream in(file("m.csv"));
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, "node,community\n0,1\n1,NA\n2,2\n3,2\n4,2\n5,3\n");
  const Membership back = io::read_membership(file("m.csv"));
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.k, 3);
  EXPECT_EQ(io::read_membership(file("m.csv"), 5).k, 5);
}

TEST_F(IoTest, MembershipErrors) {
  EXPECT_NE(error_of([&] { io::read_membership(file("a.csv", "node,community\n0,1\n2,1\n")); }).find("a.csv:3:"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::read_membership(file("b.csv", "node,community\n0,0\n")); }).find("b.csv:2:"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::read_membership(file("c.csv", "node,community\n0,4\n"), 3); }).find("K = 3"),
            std::string::npos);
}

TEST_F(IoTest, CsvMatrixRoundTripIsExact) {
  Eigen::MatrixXd x = test::gaussian(7, 4, 11);
  x(0, 0) = 1e-300;
  x(1, 1) = -0.1;
  io::write_matrix_csv(file("x.csv"), x);
  EXPECT_EQ(io::read_matrix_csv(file("x.csv")), x);
}

TEST_F(IoTest, CsvMatrixErrors) {
  EXPECT_NE(error_of([&] { io::read_matrix_csv(file("a.csv", "n=2\n1,2\n3\n")); }).find("a.csv:3: expected 2 values"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::read_matrix_csv(file("b.csv", "n=2\n1,nan\n")); }).find("b.csv:2:"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::read_matrix_csv(file("c.csv", "2\n")); }).find("c.csv:1:"), std::string::npos);
}

TEST_F(IoTest, BinaryMatrixRoundTrip) {
  const Eigen::MatrixXd x = test::gaussian(13, 5, 12);
  io::write_matrix_binary(file("x.bin"), x);
  EXPECT_EQ(fs::file_size(file("x.bin")), 12u + 13u * 5u * 8u);
  EXPECT_EQ(io::read_matrix_binary(file("x.bin")), x);
}

TEST_F(IoTest, BinaryLayoutIsRowMajorLittleEndian) {
  Eigen::MatrixXd x(1, 2);
  x << 1.0, 2.0;
  io::write_matrix_binary(file("x.bin"), x);
  std::ifstream in(file("x.bin"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), 28u);
  EXPECT_EQ(bytes.substr(0, 4), "CNGA");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
  // 1.0 is 0x3FF0000000000000 and 2.0 is 0x4000000000000000.
  EXPECT_EQ(static_cast<unsigned char>(bytes[19]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(bytes[27]), 0x40);
}

TEST_F(IoTest, BinaryMatrixErrors) {
  EXPECT_NE(error_of([&] { io::read_matrix_binary(file("a.bin", "XXXX\1\0\0\0\1\0\0\0")); }).find("bad magic"),
            std::string::npos);
  const Eigen::MatrixXd x = test::gaussian(3, 3, 1);
  io::write_matrix_binary(file("t.bin"), x);
  fs::resize_file(file("t.bin"), 40);
  EXPECT_NE(error_of([&] { io::read_matrix_binary(file("t.bin")); }).find("t.bin: expected"),
            std::string::npos);
}

TEST_F(IoTest, PgmLevels) {
  Eigen::MatrixXd x(2, 3);
  x << 0, -1, 0.5, 2, 0, -2;
  io::write_pgm(file("x.pgm"), x);
  std::ifstream in(file("x.pgm"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  const std::string header = "P5\n3 2\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 6);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  const std::vector<int> expected{0, 128, 64, 255, 0, 255};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + i]), expected[i]) << i;
  }
  io::write_pgm(file("z.pgm"), Eigen::MatrixXd::Zero(2, 2));
  EXPECT_EQ(fs::file_size(file("z.pgm")), std::string("P5\n2 2\n255\n").size() + 4);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(2.0), "2");
  std::mt19937_64 gen(5);
  std::normal_distribution<double> d;
  for (int i = 0; i < 1000; ++i) {
    const double v = d(gen) * std::pow(10.0, i % 40 - 20);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
}

}  // namespace
}  // namespace conga
