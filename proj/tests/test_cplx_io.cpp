#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "rfis/cplx_io.hpp"
#include "rfis/polytope.hpp"

using namespace rfis;

namespace {

ErrorCode read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_cplx(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return ErrorCode::kIoError;
}

}  // namespace

TEST(Cplx, RoundTripIsExact) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(Point::NullaryExpr(3, [&](Eigen::Index) { return u(rng); }));
  Point center = Point::Zero(3);
  for (const auto& p : pts) center += p / 30.0;
  const BoundaryComplex c = barycentric_subdivision(triangulate_convex_polytope(pts, center));

  std::ostringstream out;
  write_cplx(out, c);
  std::istringstream in(out.str());
  const BoundaryComplex back = read_cplx(in);
  EXPECT_EQ(back.vertices(), c.vertices());
  EXPECT_EQ(back.simplices(), c.simplices());
  EXPECT_EQ(back.center(), c.center());

  std::ostringstream again;
  write_cplx(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Cplx, HeaderLayout) {
  const auto sq = triangulate_convex_polytope(
      box_corners(Point::Constant(2, -1), Point::Constant(2, 1)), Point::Zero(2));
  std::ostringstream out;
  write_cplx(out, sq);
  EXPECT_EQ(out.str().rfind("CPLX 2 4 4\n", 0), 0u);
  EXPECT_NE(out.str().find("\nCENTER\n"), std::string::npos);
}

TEST(Cplx, FileRoundTrip) {
  const auto sq = triangulate_convex_polytope(
      box_corners(Point::Constant(2, -1), Point::Constant(2, 1)), Point::Zero(2));
  const auto path = std::filesystem::temp_directory_path() / "rfis_io_test.cplx";
  save_cplx(path, sq);
  const auto back = load_cplx(path);
  EXPECT_EQ(back.vertices(), sq.vertices());
  std::filesystem::remove(path);
}

TEST(Cplx, RejectsMalformed) {
  const std::string body = "1 1\n-1 1\n-1 -1\n1 -1\n0 1\n1 2\n2 3\n3 0\nCENTER\n0 0\n";
  EXPECT_EQ(read_error("CPLX 2 5 4\n" + body), ErrorCode::kParseError);   // too few vertices
  EXPECT_EQ(read_error("CPLX 2 4 3\n" + body), ErrorCode::kParseError);   // trailing data
  EXPECT_EQ(read_error("CPLX 2 4 -1\n" + body), ErrorCode::kParseError);  // negative count
  EXPECT_EQ(read_error("PLX 2 4 4\n" + body), ErrorCode::kParseError);
  EXPECT_EQ(read_error("CPLX 2 4 4\n1 1\n-1 1\n-1 -1\n1 -1\n0 1\n1 2\n2 3\n3 7\nCENTER\n0 0\n"),
            ErrorCode::kParseError);  // vertex id out of range
  EXPECT_EQ(read_error("CPLX 2 4 4\n1 x\n"), ErrorCode::kParseError);
  std::istringstream ok("CPLX 2 4 4\n" + body);
  EXPECT_NO_THROW(read_cplx(ok));
}

TEST(Cplx, MissingFileIsIoError) {
  try {
    load_cplx("/nonexistent/mesh.cplx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}
