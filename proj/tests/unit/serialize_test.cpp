#include "support/generators.hpp"

#include <gfb/errors.hpp>
#include <gfb/serialize.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

namespace gfb {
namespace {

using namespace gfb::testing;

std::string parse_error_message(const std::string& text) {
  try {
    parse_json_text(text, "input.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return {};
}

TEST(Matrix, RoundTripIsExact) {
  Rng rng(61);
  const CMatrix m = random_gaussian(3, 2, rng);
  const Json j = to_json(m);
  EXPECT_EQ(j.at("rows"), 3);
  EXPECT_EQ(j.at("cols"), 2);
  EXPECT_EQ(matrix_from_json(Json::parse(j.dump())), m);
}

TEST(Matrix, AcceptsRealShorthand) {
  const Json j = Json::parse(R"({"rows": 2, "cols": 2, "data": [1, 2.5, [0, 1], -3]})");
  const CMatrix m = matrix_from_json(j);
  EXPECT_EQ(m(0, 1), cd(2.5, 0.0));
  EXPECT_EQ(m(1, 0), cd(0.0, 1.0));
  EXPECT_EQ(m(1, 1), cd(-3.0, 0.0));
}

TEST(Matrix, RejectsWrongDataLength) {
  const Json j = Json::parse(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})");
  EXPECT_THROW(matrix_from_json(j), Error);
}

TEST(Rational, RoundTrip) {
  const Rational r = rat(-7, 12);
  EXPECT_EQ(rational_from_json(rational_to_json(r)), r);
  EXPECT_THROW(rational_from_json(Json::parse(R"({"num": 1, "den": 0})")), Error);
}

TEST(Plane, AllInputFormsDescribeTheSamePlane) {
  Rng rng(62);
  const CMatrix gamma = random_gaussian(2, 2, rng);
  const Plane g = plane_from_graph(gamma);
  const Plane from_basis = plane_from_json(Json::parse(to_json(g).dump()));
  EXPECT_LT(plane_distance(from_basis, g), 1e-12);

  const Plane from_graph = plane_from_any_json(Json{{"gamma", to_json(gamma)}});
  EXPECT_LT(plane_distance(from_graph, g), 1e-10);

  const Plane from_rows = plane_from_any_json(Json{{"b_star", to_json(b_star(g))}, {"d_star", to_json(d_star(g))}});
  EXPECT_LT(plane_distance(from_rows, g), 1e-10);
}

TEST(Points, GMPointRoundTrip) {
  const GMPoint pt = random_gm_point(2, 1, 2, 0, 5);
  const GMPoint back = gm_point_from_json(Json::parse(to_json(pt).dump()));
  EXPECT_EQ(back.delta0, pt.delta0);
  ASSERT_EQ(back.planes.size(), pt.planes.size());
  for (std::size_t i = 0; i < pt.planes.size(); ++i) EXPECT_LT(plane_distance(back.planes[i], pt.planes[i]), 1e-12);
  EXPECT_EQ(back.em.delta[1], pt.em.delta[1]);
  EXPECT_LT(relation_residual(back.em), 1e-10);
}

TEST(Points, FramedModelRoundTrip) {
  Rng rng(63);
  const FramedBundleModel m = random_genus0_model(rng, 3, 2);
  const FramedBundleModel back = framed_model_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(back.n, m.n);
  EXPECT_EQ(back.delta0, m.delta0);
  EXPECT_EQ(back.split_type, m.split_type);
  for (int i = 0; i < m.ell; ++i) EXPECT_LT(plane_distance(back.g[i], m.g[i]), 1e-12);
}

TEST(ParseError, ReportsLineAndColumn) {
  const std::string msg = parse_error_message("{\n  \"a\": 1,\n  \"b\": ]\n}");
  EXPECT_NE(msg.find("input.json:3:8:"), std::string::npos) << msg;
  const std::string first = parse_error_message("[1, 2,, 3]");
  EXPECT_NE(first.find("input.json:1:7:"), std::string::npos) << first;
}

TEST(ParseError, MissingFile) {
  EXPECT_THROW(read_json_file("/nonexistent/gfb_input.json"), Error);
}

TEST(ParseError, FileRoundTrip) {
  const std::string path = ::testing::TempDir() + "gfb_serialize_test.json";
  {
    std::ofstream out(path);
    out << "{\"rows\": 1, \"cols\": 1, \"data\": [2]}";
  }
  EXPECT_EQ(matrix_from_json(read_json_file(path))(0, 0), cd(2.0));
  std::remove(path.c_str());
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(2.0), "2");
}

}  // namespace
}  // namespace gfb
