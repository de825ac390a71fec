#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "lattika/io.hpp"

using namespace lattika;

namespace {

std::string data(std::string const& name) { return std::string(LATTIKA_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Io, ReadsSampleLattices) {
  auto const z2 = io::read_lattice(data("z2.json"));
  EXPECT_EQ(z2.gram(), RationalMatrix::identity(2));
  EXPECT_EQ(*z2.label(), "Z^2");
  auto const hex = io::read_lattice(data("hexagonal.json"));
  EXPECT_EQ(hex.determinant(), Rational(3, 4));
  auto const e8 = io::read_lattice(data("e8.json"));
  EXPECT_EQ(e8.rank(), 8u);
  EXPECT_EQ(e8.determinant(), Rational(1));
}

TEST(Io, RejectsNonReducedRationals) {
  try {
    io::read_lattice(data("bad_denominator.json"));
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
  EXPECT_THROW(io::read_json_file(data("missing.json")), Error);
  EXPECT_THROW(io::rational_from_json(nlohmann::json::parse("[1]")), Error);
  EXPECT_THROW(io::lattice_from_json(nlohmann::json::parse(R"({"rank": 2, "gram": [[1]]})")), Error);
}

TEST(Io, RationalForms) {
  EXPECT_EQ(io::rational_from_json(nlohmann::json::parse("7")), Rational(7));
  EXPECT_EQ(io::rational_from_json(nlohmann::json::parse(R"("-3/4")")), Rational(-3, 4));
  EXPECT_EQ(io::rational_from_json(nlohmann::json::parse(R"({"num": "5", "den": "6"})")), Rational(5, 6));
}

TEST(Io, RoundTrip) {
  auto const hex = io::read_lattice(data("hexagonal.json"));
  auto const again = io::lattice_from_json(io::lattice_to_json(hex));
  EXPECT_EQ(again.gram(), hex.gram());
  EXPECT_EQ(again.label(), hex.label());
}

TEST(Io, FormsAndDivisors) {
  auto const forms = io::read_forms(data("forms_rank2.json"));
  ASSERT_EQ(forms.size(), 4u);
  EXPECT_EQ(forms[3], (GramMatrix{{4, 1}, {1, 6}}));
  auto const d = io::divisor_from_json(io::read_json_file(data("divisor_2.json")));
  EXPECT_EQ(d.order_at(Integer(2)), 1);
  auto const exact = io::divisor_from_json(io::read_json_file(data("divisor_log2.json")));
  ASSERT_TRUE(exact.exp_lambda().has_value());
  EXPECT_EQ(*exact.exp_lambda(), Rational(2));
  EXPECT_NEAR(exact.lambda(), std::log(2.0), 1e-15);
}
