#include <doctest.h>

#include "oracles.hpp"
#include "oscidecay/linalg.hpp"
#include "oscidecay/nondegeneracy.hpp"
#include "oscidecay/parser.hpp"

using namespace oscidecay;

namespace {

QuadExt det3(const std::vector<ScalarVector>& v) {
  return v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) -
         v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
         v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
}

ScalarVector vec(std::initializer_list<long long> xs) {
  ScalarVector v;
  for (long long x : xs) v.push_back(QuadExt(x));
  return v;
}

const QuadExt kRt2 = QuadExt::sqrt_of(2);

}  // namespace

TEST_CASE("rank examples against determinant oracle") {
  std::vector<ScalarVector> a = {vec({0, 1, 1}), vec({0, 1, -1}), vec({1, 0, 1})};
  CHECK(det3(a) == QuadExt(-2));  // nonzero determinant, so full rank
  CHECK(rank(a) == 3);

  CHECK(rank({vec({1, 0, 1}), vec({2, 0, 2})}) == 1);

  std::vector<ScalarVector> lc = {{QuadExt(1), QuadExt(1), kRt2},
                                  {QuadExt(1), QuadExt(1), QuadExt(0) - kRt2},
                                  vec({0, 1, 1})};
  CHECK(det3(lc).sign() != 0);
  CHECK(rank(lc) == 3);

  CHECK(rank({}) == 0);
}

TEST_CASE("rank invariance under scaling and permutation") {
  oracles::Rng rng(2025);
  for (int i = 0; i < 40; ++i) {
    std::vector<ScalarVector> vs;
    for (int r = 0; r < 4; ++r) {
      ScalarVector v;
      for (int c = 0; c < 3; ++c) v.push_back(rng.scalar());
      vs.push_back(v);
    }
    std::size_t r0 = rank(vs);
    std::vector<ScalarVector> scaled = vs;
    for (auto& v : scaled) {
      QuadExt s = rng.nonzero_scalar();
      for (auto& x : v) x = s * x;
    }
    CHECK(rank(scaled) == r0);
    std::vector<ScalarVector> perm = {vs[2], vs[0], vs[3], vs[1]};
    CHECK(rank(perm) == r0);
  }
}

TEST_CASE("membership reproduces the five-square identity") {
  const VarSet xyz({"x", "y", "z"});
  MonomialBasis basis(3, 2);
  auto form_sq = [&](const std::string& s) {
    return basis.coefficient_vector(parse_polynomial(s, xyz));
  };
  std::vector<ScalarVector> squares = {
      form_sq("(y-z)^2"), form_sq("(x+z)^2"), form_sq("(x-z)^2"),
      form_sq("(x+y+sqrt(2)*z)^2"), form_sq("(x+y-sqrt(2)*z)^2")};
  ScalarVector target = basis.coefficient_vector(parse_polynomial("4*x*y + 4*y*z", xyz));

  auto coeffs = solve_membership(target, squares);
  REQUIRE(coeffs.has_value());
  CHECK((*coeffs)[0] == QuadExt(-2));
  CHECK((*coeffs)[1] == QuadExt(-1));
  CHECK((*coeffs)[2] == QuadExt(-1));
  CHECK((*coeffs)[3] == QuadExt(1));
  CHECK((*coeffs)[4] == QuadExt(1));

  // The identity itself, checked as polynomials.
  MultiPoly lhs = parse_polynomial("4*x*y + 4*y*z", xyz);
  MultiPoly rhs = parse_polynomial(
      "-2*(y-z)^2 - (x+z)^2 - (x-z)^2 + (x+y+sqrt(2)*z)^2 + (x+y-sqrt(2)*z)^2", xyz);
  CHECK(lhs == rhs);
  CHECK(parse_polynomial("y", xyz) ==
        parse_polynomial("(y-z) + 1/2*(x+z) - 1/2*(x-z)", xyz));
}

TEST_CASE("membership of a basis element is a unit vector") {
  std::vector<ScalarVector> basis = {vec({1, 2, 0}), vec({0, 1, 1}), vec({3, 0, 1})};
  auto c = solve_membership(basis[1], basis);
  REQUIRE(c.has_value());
  CHECK((*c)[0] == QuadExt(0));
  CHECK((*c)[1] == QuadExt(1));
  CHECK((*c)[2] == QuadExt(0));
}

TEST_CASE("membership rejects targets outside the span (rank oracle)") {
  const VarSet xyz({"x", "y", "z"});
  MonomialBasis basis(3, 3);
  std::vector<ScalarVector> squares = {
      basis.coefficient_vector(parse_polynomial("(y-z)^2", xyz)),
      basis.coefficient_vector(parse_polynomial("(x+z)^2", xyz)),
      basis.coefficient_vector(parse_polynomial("(x-z)^2", xyz))};
  ScalarVector target = basis.coefficient_vector(parse_polynomial("x^3", xyz));
  CHECK(!solve_membership(target, squares).has_value());
  auto with_target = squares;
  with_target.push_back(target);
  CHECK(rank(with_target) == rank(squares) + 1);
}

TEST_CASE("membership reconstruction is exact") {
  oracles::Rng rng(808);
  for (int i = 0; i < 40; ++i) {
    std::vector<ScalarVector> basis;
    for (int b = 0; b < 4; ++b) {
      ScalarVector v;
      for (int c = 0; c < 5; ++c) v.push_back(rng.scalar());
      basis.push_back(v);
    }
    ScalarVector target(5, QuadExt(0));
    for (const auto& b : basis) {
      QuadExt c = rng.scalar();
      for (std::size_t k = 0; k < 5; ++k) target[k] += c * b[k];
    }
    auto coeffs = solve_membership(target, basis);
    REQUIRE(coeffs.has_value());
    ScalarVector rebuilt(5, QuadExt(0));
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (std::size_t k = 0; k < 5; ++k) rebuilt[k] += (*coeffs)[b] * basis[b][k];
    CHECK(rebuilt == target);
  }
}

TEST_CASE("residual examples") {
  std::vector<ScalarVector> basis = {vec({1, 1})};
  CHECK(residual_norm_sq(vec({2, 2}), basis) == QuadExt(0));
  CHECK(residual_norm_sq(vec({1, 0}), basis) ==
        QuadExt(Rational(BigInt(1), BigInt(2))));
}

TEST_CASE("residual zero iff membership, and quadratic scaling") {
  oracles::Rng rng(606);
  for (int i = 0; i < 60; ++i) {
    std::vector<ScalarVector> basis;
    for (int b = 0; b < 3; ++b) {
      ScalarVector v;
      for (int c = 0; c < 4; ++c) v.push_back(rng.scalar());
      basis.push_back(v);
    }
    ScalarVector target;
    for (int c = 0; c < 4; ++c) target.push_back(rng.scalar());
    QuadExt r = residual_norm_sq(target, basis);
    CHECK((r.is_zero()) == solve_membership(target, basis).has_value());
    CHECK(r.sign() >= 0);

    QuadExt c = rng.scalar();
    ScalarVector scaled = target;
    for (auto& x : scaled) x = c * x;
    CHECK(residual_norm_sq(scaled, basis) == c * c * r);
  }
}

TEST_CASE("regression: cubic residual of x^3 against the light-cone span") {
  const VarSet xyz({"x", "y", "z"});
  std::vector<ScalarVector> dirs = {
      vec({0, 1, 1}), vec({0, 1, -1}), vec({1, 0, 1}), vec({1, 0, -1}),
      {QuadExt(1), QuadExt(1), kRt2}, {QuadExt(1), QuadExt(1), QuadExt(0) - kRt2}};
  ProjectionSystem sys(xyz, dirs);
  DegenerateSpan span(sys, 3);
  ScalarVector target = span.basis.coefficient_vector(parse_polynomial("x^3", xyz));
  QuadExt dist = residual_norm_sq(target, span.columns);
  CHECK(dist.sign() > 0);
  CHECK(!solve_membership(target, span.columns).has_value());
  // Frozen regression value of the exact squared distance.
  CHECK(dist == QuadExt(Rational(BigInt(189), BigInt(220))));
}
