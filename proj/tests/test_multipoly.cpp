#include <doctest.h>

#include "oracles.hpp"
#include "oscidecay/parser.hpp"

using namespace oscidecay;

namespace {

const VarSet kXyz({"x", "y", "z"});

MultiPoly term(const VarSet& vars, std::initializer_list<unsigned> exps, QuadExt c) {
  MultiPoly p(vars);
  p.add_term(Exponents(exps), c);
  return p;
}

std::vector<QuadExt> dir3(long long a, long long b, long long c) {
  return {QuadExt(a), QuadExt(b), QuadExt(c)};
}

}  // namespace

TEST_CASE("parser: flagship phase") {
  MultiPoly p = parse_polynomial("x^2*y + 2*x*y*z", kXyz);
  MultiPoly expected = term(kXyz, {2, 1, 0}, QuadExt(1)) + term(kXyz, {1, 1, 1}, QuadExt(2));
  CHECK(p == expected);
  CHECK(p.degree() == 3);
}

TEST_CASE("parser: expansion of a squared light-cone form") {
  MultiPoly p = parse_polynomial("(x+y+sqrt(2)*z)^2", kXyz);
  QuadExt two_rt2(Rational(0), Rational(2), 2);
  MultiPoly expected = term(kXyz, {2, 0, 0}, QuadExt(1)) + term(kXyz, {0, 2, 0}, QuadExt(1)) +
                       term(kXyz, {0, 0, 2}, QuadExt(2)) + term(kXyz, {1, 1, 0}, QuadExt(2)) +
                       term(kXyz, {1, 0, 1}, two_rt2) + term(kXyz, {0, 1, 1}, two_rt2);
  CHECK(p == expected);
}

TEST_CASE("parser: single monomial and fractions") {
  CHECK(parse_polynomial("x^3", kXyz) == term(kXyz, {3, 0, 0}, QuadExt(1)));
  CHECK(parse_polynomial("-1/3", kXyz) ==
        MultiPoly::constant(kXyz, QuadExt(Rational(BigInt(-1), BigInt(3)))));
  CHECK(parse_polynomial("x/2 - y", kXyz) ==
        term(kXyz, {1, 0, 0}, QuadExt(Rational(BigInt(1), BigInt(2)))) +
            term(kXyz, {0, 1, 0}, QuadExt(-1)));
}

TEST_CASE("parser: errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_polynomial("x + q", kXyz), doctest::Contains("unknown identifier"),
                       ParseError);
  try {
    parse_polynomial("x +* y", kXyz);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_WITH_AS(parse_polynomial("sqrt(3)*x", kXyz, 2),
                       doctest::Contains("mixed radicands"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x^y", kXyz), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x/(x+1)", kXyz), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x/0", kXyz), ParseError);
}

TEST_CASE("print-parse identity on random polynomials") {
  oracles::Rng rng(31415);
  for (int i = 0; i < 200; ++i) {
    MultiPoly p = rng.poly(kXyz, 5, 7, /*with_irr=*/true);
    CHECK(parse_polynomial(p.to_string(), kXyz) == p);
  }
}

TEST_CASE("directional derivative: flagship compositions") {
  MultiPoly p = parse_polynomial("x^2*y + 2*x*y*z", kXyz);
  MultiPoly q = p.directional_derivative(dir3(1, 0, 0))
                    .directional_derivative(dir3(0, 1, 0))
                    .directional_derivative(dir3(1, -1, 0));
  CHECK(q == MultiPoly::constant(kXyz, QuadExt(2)));

  MultiPoly cube = parse_polynomial("(x+y)^3", kXyz);
  CHECK(cube.directional_derivative(dir3(1, -1, 0)).is_zero());

  // Wave-style second-order combination on x^3.
  MultiPoly x3 = parse_polynomial("x^3", kXyz);
  MultiPoly box = x3.derivative(0).derivative(0) + x3.derivative(1).derivative(1) -
                  x3.derivative(2).derivative(2);
  CHECK(box == term(kXyz, {1, 0, 0}, QuadExt(6)));
}

TEST_CASE("directional derivative dimension mismatch") {
  MultiPoly p = parse_polynomial("x^2", kXyz);
  CHECK_THROWS_AS(p.directional_derivative({QuadExt(1), QuadExt(0)}), Error);
}

TEST_CASE("derivative product rule on random pairs") {
  oracles::Rng rng(777);
  for (int i = 0; i < 60; ++i) {
    MultiPoly p = rng.poly(kXyz, 3), q = rng.poly(kXyz, 3);
    std::vector<QuadExt> u = {rng.scalar(), rng.scalar(), rng.scalar()};
    MultiPoly lhs = (p * q).directional_derivative(u);
    MultiPoly rhs = p * q.directional_derivative(u) + q * p.directional_derivative(u);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("shift difference: flagship and binomial examples") {
  MultiPoly p = parse_polynomial("x^2*y + 2*x*y*z", kXyz);
  MultiPoly d = shift_difference(p, "x", "zeta");
  VarSet ext({"x", "y", "z", "zeta"});
  MultiPoly expected = term(ext, {1, 1, 0, 1}, QuadExt(-2)) +
                       term(ext, {0, 1, 0, 2}, QuadExt(-1)) +
                       term(ext, {0, 1, 1, 1}, QuadExt(-2));
  CHECK(d == expected);

  MultiPoly x3 = parse_polynomial("x^3", kXyz);
  MultiPoly d3 = shift_difference(x3, "x", "zeta");
  MultiPoly expected3 = term(ext, {2, 0, 0, 1}, QuadExt(-3)) +
                        term(ext, {1, 0, 0, 2}, QuadExt(-3)) +
                        term(ext, {0, 0, 0, 3}, QuadExt(-1));
  CHECK(d3 == expected3);

  CHECK(shift_difference(parse_polynomial("y^2", kXyz), "x", "zeta").is_zero());
  CHECK_THROWS_AS(shift_difference(p, "x", "y"), Error);  // name collision
}

TEST_CASE("shift difference vanishes at parameter zero") {
  oracles::Rng rng(4242);
  for (int i = 0; i < 60; ++i) {
    MultiPoly p = rng.poly(kXyz, 4);
    MultiPoly d = shift_difference(p, "x", "zeta");
    CHECK(d.substitute(d.vars().require("zeta"), QuadExt(0)).is_zero());
  }
}

TEST_CASE("collect by frozen variables") {
  MultiPoly p = parse_polynomial("x^2*y + 2*x*y*z", kXyz);
  auto parts = p.collect_by({2});  // freeze z
  REQUIRE(parts.size() == 2);
  CHECK(parts.at({0}) == term(kXyz, {2, 1, 0}, QuadExt(1)));
  CHECK(parts.at({1}) == term(kXyz, {1, 1, 0}, QuadExt(2)));

  auto only = parse_polynomial("x^3", kXyz).collect_by({2});
  REQUIRE(only.size() == 1);
  CHECK(only.at({0}) == term(kXyz, {3, 0, 0}, QuadExt(1)));

  auto indep = parse_polynomial("x^2*y^2", kXyz).collect_by({2});
  REQUIRE(indep.size() == 1);
  CHECK(indep.at({0}) == term(kXyz, {2, 2, 0}, QuadExt(1)));
}

TEST_CASE("collect-by round trip reassembles exactly") {
  oracles::Rng rng(5150);
  for (int i = 0; i < 60; ++i) {
    MultiPoly p = rng.poly(kXyz, 5, 8);
    auto parts = p.collect_by({1, 2});
    MultiPoly sum(kXyz);
    for (const auto& [key, val] : parts) {
      MultiPoly mono(kXyz);
      mono.add_term({0, key[0], key[1]}, QuadExt(1));
      sum += mono * val;
    }
    CHECK(sum == p);
  }
}

TEST_CASE("canonical printer is stable") {
  MultiPoly p = parse_polynomial("2*x*y*z + x^2*y", kXyz);
  CHECK(p.to_string() == "x^2*y + 2*x*y*z");
  MultiPoly d = shift_difference(p, "x", "zeta");
  CHECK(d.to_string() == "-2*x*y*zeta - 2*y*z*zeta - y*zeta^2");
  CHECK(MultiPoly::zero(kXyz).to_string() == "0");
}
