#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "lbf/io.hpp"

using namespace lbf;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lbf_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string fixture(const std::string& name) { return std::string(LBF_FIXTURE_DIR) + "/" + name; }

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Binary, IdentityRoundTrip) {
  const Matrix eye = Matrix::Identity(2, 2);
  std::stringstream ss;
  io::write_binary(ss, eye);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4u + 16u + 32u);
  EXPECT_EQ(bytes.substr(0, 4), "LBF1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 2);  // little-endian N
  const Matrix back = io::parse_binary(ss, "mem");
  EXPECT_EQ(std::memcmp(back.data(), eye.data(), sizeof(double) * 4), 0);
}

TEST(Binary, RandomRoundTripIsBitExact) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    Matrix m = lbf::testing::gaussian_matrix(1 + t * 7, 1 + t % 9, rng, std::pow(10.0, t % 12 - 6));
    m(0, 0) = -0.0;
    const auto path = temp_path("rt.bin").string();
    io::save_matrix(path, m, io::MatrixFormat::Binary);
    const PointCloud back = io::load_matrix(path, io::MatrixFormat::Binary);
    ASSERT_EQ(back.points().rows(), m.rows());
    ASSERT_EQ(back.points().cols(), m.cols());
    EXPECT_EQ(std::memcmp(back.points().data(), m.data(), sizeof(double) * static_cast<std::size_t>(m.size())), 0);
  }
}

TEST(Binary, MalformedInputs) {
  std::stringstream bad("LBF2xxxxxxxxxxxxxxxx");
  EXPECT_NE(error_of([&] { io::parse_binary(bad, "f.bin"); }).find("bad magic"), std::string::npos);

  std::stringstream ok;
  io::write_binary(ok, Matrix::Ones(2, 3));
  const std::string bytes = ok.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_NE(error_of([&] { io::parse_binary(truncated, "f.bin"); }).find("truncated"), std::string::npos);
  std::stringstream trailing(bytes + "x");
  EXPECT_NE(error_of([&] { io::parse_binary(trailing, "f.bin"); }).find("trailing"), std::string::npos);
}

TEST(Delimited, TextRoundTripIsExact) {
  Rng rng(2);
  const Matrix m = lbf::testing::gaussian_matrix(30, 4, rng);
  const auto path = temp_path("rt.csv").string();
  io::save_matrix(path, m, io::MatrixFormat::Delimited);
  EXPECT_EQ(io::load_matrix(path, io::MatrixFormat::Delimited).points(), m);
}

TEST(Delimited, ShortRowNamesTheLine) {
  const std::string msg =
      error_of([] { io::load_matrix(fixture("short_row.csv"), io::MatrixFormat::Delimited, {',', true}); });
  EXPECT_NE(msg.find("short_row.csv:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("expected 3 fields, found 2"), std::string::npos) << msg;
}

TEST(Delimited, HeaderDelimitersAndBadNumbers) {
  std::stringstream ws("# comment-like header\n1 2\t3\n\n  4   5 6  \n");
  const Matrix m = io::parse_delimited(ws, "ws", {' ', true});
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 2), 6.0);

  std::stringstream semi("1;2\n3;+4e-1\n");
  EXPECT_DOUBLE_EQ(io::parse_delimited(semi, "s", {';', false})(1, 1), 0.4);

  std::stringstream bad("1,2\n3,abc\n");
  const std::string msg = error_of([&] { io::parse_delimited(bad, "b.csv"); });
  EXPECT_NE(msg.find("b.csv:2"), std::string::npos);
  EXPECT_NE(msg.find("abc"), std::string::npos);

  std::stringstream empty("\n\n");
  EXPECT_NE(error_of([&] { io::parse_delimited(empty, "e"); }).find("no data rows"), std::string::npos);

  std::stringstream inf("1,inf\n");
  EXPECT_THROW(PointCloud(io::parse_delimited(inf, "i")), Error);
}

TEST(Labels, RoundTripAndErrors) {
  const auto path = temp_path("l.labels").string();
  io::save_labels(path, {0, 1, -1, 2});
  EXPECT_EQ(io::load_labels(path), (std::vector<int>{0, 1, -1, 2}));
  std::stringstream bad("0\n1.5\n");
  EXPECT_NE(error_of([&] { io::parse_labels(bad, "x.labels"); }).find("x.labels:2"), std::string::npos);
  try {
    io::load_labels("/nonexistent/dir/file");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Trajectories, ColumnsBecomePoints) {
  const PointCloud cloud = io::load_trajectories(fixture("trajectory_2x3.txt"));
  ASSERT_EQ(cloud.size(), 3u);
  ASSERT_EQ(cloud.ambient_dim(), 4u);
  EXPECT_EQ(cloud.point(0)(0), 1.0);
  EXPECT_EQ(cloud.point(0)(3), 10.0);
  EXPECT_EQ(cloud.point(2)(1), 6.0);
  EXPECT_NE(error_of([] { io::load_trajectories(fixture("trajectory_odd.txt")); }).find("even number of rows"),
            std::string::npos);
}

TEST(Results, JsonLinesAndCsv) {
  ClusteringResult r;
  r.labels = {1, 0};
  r.distances = {0.5, 0.25};
  std::stringstream js;
  io::write_result(js, r, io::ResultFormat::JsonLines);
  std::string line;
  std::getline(js, line);
  const auto row = nlohmann::json::parse(line);
  EXPECT_EQ(row["index"], 0);
  EXPECT_EQ(row["label"], 1);
  EXPECT_EQ(row["distance"], 0.5);
  std::stringstream csv;
  io::write_result(csv, r, io::ResultFormat::Delimited);
  EXPECT_EQ(csv.str(), "index,label,distance\n0,1,0.5\n1,0,0.25\n");
}
