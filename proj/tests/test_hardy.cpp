#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "he/hardy.hpp"

using namespace he;

TEST_CASE("parser and formatter round trip") {
  const HardyFunction f = parse_hardy("1*t^1.5");
  REQUIRE(f.monomials().size() == 1);
  CHECK(f.monomials()[0].coef == 1.0);
  CHECK(f.monomials()[0].power == 1.5);
  CHECK(f.monomials()[0].logpower == 0.0);
  CHECK(format_hardy(f) == "1*t^1.5");

  // normalization: sorted by descending growth, duplicates merged
  CHECK(format_hardy(parse_hardy("t^1.5 + t^1.5")) == "2*t^1.5");
  CHECK(format_hardy(parse_hardy("2*t^0.5*log^1 + 1*t^1.5")) == "1*t^1.5 + 2*t^0.5*log^1");
  CHECK(format_hardy(parse_hardy("-t^2 + 5")) == "-1*t^2 + 5");

  // bare names: t is t^1, log is log^1, a number is a constant
  const HardyFunction g = parse_hardy("3*t*log");
  CHECK(g.monomials()[0].power == 1.0);
  CHECK(g.monomials()[0].logpower == 1.0);
  CHECK(g.monomials()[0].coef == 3.0);

  // 17 significant digits make format/parse the identity on monomials
  const HardyFunction h = parse_hardy("0.3333333333333333*t^0.1*log^-2.5 - 7e-3*t^2.25");
  const HardyFunction h2 = parse_hardy(format_hardy(h));
  REQUIRE(h2.monomials().size() == h.monomials().size());
  for (std::size_t i = 0; i < h.monomials().size(); ++i) {
    CHECK(h.monomials()[i].coef == h2.monomials()[i].coef);
    CHECK(h.monomials()[i].power == h2.monomials()[i].power);
    CHECK(h.monomials()[i].logpower == h2.monomials()[i].logpower);
  }

  CHECK_THROWS_AS(parse_hardy(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_hardy("x^2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_hardy("t^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_hardy("t^1.5 - t^1.5"), std::invalid_argument);  // zero function
}

TEST_CASE("growth type is the leading exponent") {
  CHECK(growth_type(parse_hardy("1*t^1.5")) == 1.5);
  CHECK(growth_type(parse_hardy("2*t^2.5*log^-1 + t")) == 2.5);
  CHECK(growth_type(parse_hardy("log")) == 0.0);
}

TEST_CASE("symbolic derivative") {
  const HardyFunction f = parse_hardy("t^1.5");
  const HardyFunction df = derivative(f);
  REQUIRE(df.monomials().size() == 1);
  CHECK(df.monomials()[0].coef == 1.5);
  CHECK(df.monomials()[0].power == 0.5);

  // d/dt [t^a log2(t)^b] = a t^(a-1) log2^b + (b/ln2) t^(a-1) log2^(b-1)
  const HardyFunction g = parse_hardy("t^0.5*log^2");
  const HardyFunction dg = derivative(g);
  REQUIRE(dg.monomials().size() == 2);
  CHECK(dg.monomials()[0].coef == 0.5);
  CHECK(dg.monomials()[0].power == -0.5);
  CHECK(dg.monomials()[0].logpower == 2.0);
  CHECK(dg.monomials()[1].coef == doctest::Approx(2.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(dg.monomials()[1].power == -0.5);
  CHECK(dg.monomials()[1].logpower == 1.0);

  // the growth type drops by exactly one per order
  for (const char* txt : {"t^1.5", "2*t^2.5 + t^0.5", "t^0.25*log^3"}) {
    const HardyFunction p = parse_hardy(txt);
    CHECK(growth_type(derivative(p)) == growth_type(p) - 1.0);
    CHECK(growth_type(derivative(p, 2)) == growth_type(p) - 2.0);
  }

  CHECK(format_hardy(derivative(f, 0)) == format_hardy(f));
  CHECK_THROWS_AS(derivative(parse_hardy("5")), std::invalid_argument);
}

TEST_CASE("derivative matches central differences") {
  for (const char* txt : {"t^1.5", "1*t^1.5 + 2*t^0.5*log^1", "t^2.5*log^-1", "log^2"}) {
    const HardyFunction f = parse_hardy(txt);
    const HardyFunction df = derivative(f);
    for (double t : {10.0, 100.0}) {
      const double h = 1e-4 * t;
      const double numeric = (eval(f, t + h) - eval(f, t - h)) / (2.0 * h);
      const double symbolic = eval(df, t);
      CHECK(std::abs(numeric - symbolic) <= 1e-6 * std::max(1.0, std::abs(symbolic)));
    }
  }
}

TEST_CASE("family classification") {
  const auto fam = [](std::initializer_list<const char*> fs) {
    HardyFamily family;
    for (const char* f : fs) family.push_back(parse_hardy(f));
    return family;
  };

  CHECK(classify_family(fam({"t^1.5", "t^2.5"})).verdict == FamilyVerdict::MemberOfPPrime);
  CHECK(classify_family(fam({"t^1.5", "t^2.5"})).violations.empty());
  CHECK(classify_family(fam({"2*t^0.5 + t^0.25"})).verdict == FamilyVerdict::MemberOfPPrime);

  // a log factor on the leading term bars the stricter class only
  const FamilyClass with_log = classify_family(fam({"t^1.5*log"}));
  CHECK(with_log.verdict == FamilyVerdict::MemberOfP);
  CHECK(!with_log.violations.empty());

  // integer leading power is polynomial-like
  const FamilyClass poly = classify_family(fam({"t^2"}));
  CHECK(poly.verdict == FamilyVerdict::NotMember);
  REQUIRE(!poly.violations.empty());

  // growth types must be pairwise distinct
  CHECK(classify_family(fam({"t^1.5", "2*t^1.5"})).verdict == FamilyVerdict::NotMember);

  // growth type 0 is outside (0, inf)
  CHECK(classify_family(fam({"log"})).verdict == FamilyVerdict::NotMember);

  CHECK(to_string(FamilyVerdict::MemberOfPPrime) != to_string(FamilyVerdict::NotMember));
}

TEST_CASE("floor orbit frozen values") {
  CHECK(floor_orbit(parse_hardy("t^2.5"), 5) == std::vector<std::int64_t>{1, 5, 15, 32, 55});
  CHECK(floor_orbit(parse_hardy("t^1.5"), 9) ==
        std::vector<std::int64_t>{1, 2, 5, 8, 11, 14, 18, 22, 27});
  const auto sqrt_orbit = floor_orbit(parse_hardy("t^0.5"), 16);
  CHECK(sqrt_orbit[1] == 1);
  CHECK(sqrt_orbit[3] == 2);
  CHECK(sqrt_orbit[8] == 3);
  CHECK(sqrt_orbit[14] == 3);
  CHECK(sqrt_orbit[15] == 4);
}

TEST_CASE("floor orbit is exact at perfect powers") {
  const HardyFunction f = parse_hardy("t^1.5");
  const auto orbit = floor_orbit(f, 10000);
  for (std::int64_t s = 1; s * s <= 10000; ++s)
    CHECK(orbit[static_cast<std::size_t>(s * s - 1)] == s * s * s);

  const auto doubled = floor_orbit(parse_hardy("2*t^0.5"), 10000);
  for (std::int64_t s = 1; s * s <= 10000; ++s)
    CHECK(doubled[static_cast<std::size_t>(s * s - 1)] == 2 * s);

  // log2 factor is exact at powers of two
  const auto logged = floor_orbit(parse_hardy("t^2*log"), 256);
  for (std::int64_t j = 1; (1ll << j) <= 256; ++j)
    CHECK(logged[static_cast<std::size_t>((1ll << j) - 1)] == (1ll << (2 * j)) * j);
}

TEST_CASE("floor orbit limit convention at n = 1") {
  CHECK(floor_orbit(parse_hardy("t^2.5"), 1) == std::vector<std::int64_t>{1});
  CHECK(floor_orbit(parse_hardy("t^0.5*log"), 2)[0] == 0);      // log2(1)^1 -> 0
  CHECK(floor_orbit(parse_hardy("3 + t^0.5*log^2"), 1)[0] == 3);
  CHECK_THROWS_AS(floor_orbit(parse_hardy("t^1.5*log^-1"), 3), std::domain_error);
}

TEST_CASE("floor orbit sign and range guards") {
  // all-negative functions are fine
  CHECK(floor_orbit(parse_hardy("-1*t^1.5"), 3) == std::vector<std::int64_t>{-1, -3, -6});
  // sign changes on [2, N] are rejected
  CHECK_THROWS_AS(floor_orbit(parse_hardy("t^0.5 - 3"), 100), std::domain_error);
  // 2^53 is where exact integer floors stop
  CHECK_THROWS_AS(floor_orbit(parse_hardy("t^3"), 1 << 20), std::range_error);
  CHECK_THROWS_AS(floor_orbit(parse_hardy("t^1.5"), 0), std::invalid_argument);
}

TEST_CASE("eval guards and accuracy") {
  const HardyFunction f = parse_hardy("1*t^1.5 + 2*t^0.5*log^1");
  CHECK_THROWS_AS(eval(f, 1.9), std::domain_error);
  const double t = 37.5;
  const double direct = std::pow(t, 1.5) + 2.0 * std::sqrt(t) * std::log2(t);
  CHECK(eval(f, t) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(eval(f, 2.0L) == doctest::Approx(std::pow(2.0, 1.5) + 2.0 * std::sqrt(2.0)).epsilon(1e-14));
}
