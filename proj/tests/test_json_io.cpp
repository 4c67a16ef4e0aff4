#include <gtest/gtest.h>

#include "idcubic/certifier.hpp"
#include "idcubic/forge.hpp"
#include "idcubic/json_io.hpp"
#include "test_support.hpp"

using namespace idc;
using idc::testing::RatGen;

TEST(JsonIo, MatrixRoundTrip) {
  RatGen g(81);
  for (int t = 0; t < 50; ++t) {
    const RatMatrix a = g.matrix(static_cast<std::size_t>(g.integer(1, 5)), 7, 5);
    const Json j = matrix_json(a);
    EXPECT_EQ(matrix_from_json(parse_json_text(j.dump(), "t")), a);
  }
  const Json j = parse_json_text(R"({"m": 2, "rows": [["1/2", "0"], [-3, "4/6"]]})", "t");
  const RatMatrix a = matrix_from_json(j);
  EXPECT_EQ(a(0, 0), Rational(1, 2));
  EXPECT_EQ(a(1, 0), Rational(-3));
  EXPECT_EQ(a(1, 1), Rational(2, 3));
  EXPECT_EQ(matrix_json(a)["rows"][1][1], "2/3");
}

TEST(JsonIo, ErrorsNameTheField) {
  auto msg = [](const std::string& text) {
    try {
      matrix_from_json(parse_json_text(text, "input"));
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(msg(R"({"m": 2, "rows": [["1", "0"], ["1/0", "1"]]})").find("rows[1][0]"), std::string::npos);
  EXPECT_NE(msg(R"({"m": 2, "rows": [["1", "0"], ["x", "1"]]})").find("rows[1][0]"), std::string::npos);
  EXPECT_NE(msg(R"({"m": 2, "rows": [["1", "0"], ["1"]]})").find("rows[1]"), std::string::npos);
  EXPECT_NE(msg(R"({"m": 3, "rows": [["1"]]})").find("m:"), std::string::npos);
  EXPECT_NE(msg(R"({"m": 1, "rows": [[0.5]]})").find("rows[0][0]"), std::string::npos);
  EXPECT_NE(msg(R"({"m": 1, "rows": )").find("malformed"), std::string::npos);
  EXPECT_NE(msg(R"({"m": 1})").find("rows"), std::string::npos);
  EXPECT_THROW(matrix_from_json(parse_json_text(R"({"m": 2, "rows": [["1", "0"], ["1"]]})", "t")), DimensionError);
}

TEST(JsonIo, CertificateRoundTripStillVerifies) {
  const RatMatrix f = forge_3x3({Rational(1), Rational(0), Rational(1), Rational(2), std::nullopt});
  std::mt19937_64 rng(82);
  const RatMatrix irr = make_rat_matrix({{2, 1, -2, 0}, {2, 1, 2, 0}, {-1, 0, -2, 0}, {-1, 0, -2, 0}});
  std::vector<RatMatrix> cases = {f, shift_5x5(), RatMatrix::identity(3), sample_ones_kernel_nonproper(4, rng),
                                  sample_ones_kernel_borderline(4, rng)};
  RatMatrix irr2 = irr;
  const RatVector last = {Rational(1, 2), Rational(-7, 2), Rational(5, 2), Rational(5, 2)};
  for (std::size_t i = 0; i < 4; ++i) irr2(i, 3) = last[i];
  cases.push_back(irr2);
  for (const auto& a : cases) {
    const Certificate c = certify(a);
    const std::string text = certificate_json(c).dump(2);
    const Certificate back = certificate_from_json(parse_json_text(text, "t"));
    EXPECT_EQ(back.verdict, c.verdict);
    EXPECT_EQ(back.reason, c.reason);
    EXPECT_EQ(back.audit.size(), c.audit.size());
    EXPECT_EQ(certificate_json(back).dump(2), text);
    EXPECT_FALSE(verify_certificate(a, back)) << text;
  }
}

TEST(JsonIo, RecipeFieldsAreStrings) {
  const RatMatrix f = forge_3x3({Rational(1), Rational(0), Rational(1), Rational(2), std::nullopt});
  const auto c = certify(f);
  ASSERT_TRUE(c.evidence.recipe);
  const Json j = recipe_json(*c.evidence.recipe);
  for (const auto& x : j["x_inf"]) EXPECT_TRUE(x.is_string());
  EXPECT_EQ(j["k"], 3);
  const auto back = recipe_from_json<Rational>(j);
  EXPECT_EQ(back.x_inf, c.evidence.recipe->x_inf);
  EXPECT_EQ(back.stages.size(), c.evidence.recipe->stages.size());
  EXPECT_THROW(recipe_from_json<Rational>(Json{{"kind", "Simple"}}), InputError);
  EXPECT_THROW(recipe_from_json<Rational>(Json{{"kind", "Other"}, {"x_inf", Json::array()}, {"u", Json::array()}}),
               InputError);
}
