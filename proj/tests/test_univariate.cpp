#include <doctest.h>

#include "oracles.hpp"
#include "oscidecay/univariate.hpp"

using namespace oscidecay;

namespace {

const VarSet kT({"t"});

MultiPoly upoly(std::initializer_list<long long> coeffs_low_to_high) {
  MultiPoly p(kT);
  unsigned k = 0;
  for (long long c : coeffs_low_to_high) {
    p.add_term({k}, QuadExt(c));
    ++k;
  }
  return p;
}

}  // namespace

TEST_CASE("univariate gcd examples") {
  auto g1 = gcd_univariate({upoly({-1, 0, 1}), upoly({-1, 1})});
  CHECK(g1 == upoly({-1, 1}));  // t - 1

  auto g2 = gcd_univariate({upoly({0, 0, 1}), upoly({0, 0, 0, 1})});
  CHECK(g2 == upoly({0, 0, 1}));  // monic t^2

  auto g3 = gcd_univariate({upoly({2, 2}), upoly({3})});
  CHECK(g3 == upoly({1}));  // constant member forces trivial gcd

  CHECK_THROWS_AS(gcd_univariate({MultiPoly(kT), MultiPoly(kT)}), Error);
}

TEST_CASE("gcd divides every input exactly") {
  oracles::Rng rng(1234);
  VarSet vt({"t"});
  for (int i = 0; i < 40; ++i) {
    MultiPoly a = rng.poly(vt, 4), b = rng.poly(vt, 4);
    if (a.is_zero() || b.is_zero()) continue;
    MultiPoly common = rng.poly(vt, 2);
    if (common.is_zero()) continue;
    MultiPoly pa = a * common, pb = b * common;
    MultiPoly g = gcd_univariate({pa, pb});
    Univariate ug = Univariate::from_multipoly(g);
    CHECK(Univariate::from_multipoly(pa).divmod(ug).second.is_zero());
    CHECK(Univariate::from_multipoly(pb).divmod(ug).second.is_zero());
  }
}

TEST_CASE("gcd vanishes at common rational roots") {
  oracles::Rng rng(5678);
  VarSet vt({"t"});
  for (int i = 0; i < 40; ++i) {
    Rational r = rng.rational(9, 5);
    // (t - r) divides every member of the family.
    MultiPoly root_factor(vt);
    root_factor.add_term({1}, QuadExt(1));
    root_factor.add_term({0}, QuadExt(-r));
    MultiPoly a = rng.poly(vt, 3), b = rng.poly(vt, 3);
    if (a.is_zero() || b.is_zero()) continue;
    MultiPoly g = gcd_univariate({a * root_factor, b * root_factor});
    CHECK(Univariate::from_multipoly(g).eval(QuadExt(r)).is_zero());
  }
}

TEST_CASE("root counting: whole line") {
  CHECK(count_real_roots(upoly({-2, 0, 1}), RootDomain::all_reals()) == 2);  // t^2 - 2
  CHECK(count_real_roots(upoly({1, 0, 1}), RootDomain::all_reals()) == 0);   // t^2 + 1
  CHECK(count_real_roots(upoly({5}), RootDomain::all_reals()) == 0);         // constant
  CHECK_THROWS_AS(count_real_roots(MultiPoly(kT), RootDomain::all_reals()), Error);
}

TEST_CASE("root counting handles multiple roots via the square-free part") {
  // (t-1)^2 has one distinct real root.
  MultiPoly p = upoly({1, -2, 1});
  CHECK(count_real_roots(p, RootDomain::all_reals()) == 1);
}

TEST_CASE("root counting: complement domain") {
  // t (t^2 - 1/4): roots 0, +/- 1/2, all inside (-1, 1).
  MultiPoly p(kT);
  p.add_term({3}, QuadExt(1));
  p.add_term({1}, QuadExt(Rational(BigInt(-1), BigInt(4))));
  auto roots = oracles::isolate_real_roots({0.0, -0.25, 0.0, 1.0});
  REQUIRE(roots.has_value());
  REQUIRE(roots->size() == 3);
  for (double r : *roots) CHECK(std::abs(r) < 1.0);
  CHECK(count_real_roots(p, RootDomain::complement(Rational(1))) == 0);
  CHECK(count_real_roots(p, RootDomain::complement(Rational(BigInt(1), BigInt(4)))) == 2);
  CHECK(count_real_roots(p, RootDomain::complement(Rational(0))) == 3);
  // Roots exactly on the boundary are included.
  CHECK(count_real_roots(upoly({-1, 0, 1}), RootDomain::complement(Rational(1))) == 2);
}

TEST_CASE("root counting: closed intervals with endpoint roots") {
  // (t-1)(t-2)(t-3) = t^3 - 6 t^2 + 11 t - 6
  MultiPoly p = upoly({-6, 11, -6, 1});
  CHECK(count_real_roots(p, RootDomain::interval(Rational(1), Rational(3))) == 3);
  CHECK(count_real_roots(p, RootDomain::interval(Rational(1), Rational(2))) == 2);
  CHECK(count_real_roots(p, RootDomain::interval(Rational(0), Rational(1))) == 1);
  CHECK(count_real_roots(p, RootDomain::interval(Rational(BigInt(3), BigInt(2)),
                                                 Rational(BigInt(5), BigInt(2)))) == 1);
  CHECK(count_real_roots(p, RootDomain::interval(Rational(4), Rational(9))) == 0);
  CHECK(count_real_roots(p, RootDomain::interval(Rational(2), Rational(2))) == 1);
  CHECK_THROWS_AS(count_real_roots(p, RootDomain::interval(Rational(3), Rational(1))), Error);
}

TEST_CASE("Sturm counts agree with floating bisection isolation") {
  oracles::Rng rng(987654);
  int done = 0;
  while (done < 100) {
    const unsigned deg = static_cast<unsigned>(rng.int_in(1, 8));
    std::vector<double> dc(deg + 1);
    MultiPoly p(kT);
    for (unsigned k = 0; k <= deg; ++k) {
      long long c = rng.int_in(-9, 9);
      if (k == deg && c == 0) c = 1 + rng.int_in(0, 8);
      dc[k] = static_cast<double>(c);
      if (c != 0) p.add_term({k}, QuadExt(c));
    }
    auto roots = oracles::isolate_real_roots(dc);
    if (!roots) continue;  // ill-conditioned draw; resample
    ++done;
    CHECK(count_real_roots(p, RootDomain::all_reals()) ==
          static_cast<long>(roots->size()));
  }
}

TEST_CASE("Sturm interval counts agree with the isolator on random draws") {
  oracles::Rng rng(246810);
  int done = 0;
  while (done < 60) {
    const unsigned deg = static_cast<unsigned>(rng.int_in(2, 7));
    std::vector<double> dc(deg + 1);
    MultiPoly p(kT);
    for (unsigned k = 0; k <= deg; ++k) {
      long long c = rng.int_in(-9, 9);
      if (k == deg && c == 0) c = 1 + rng.int_in(0, 8);
      dc[k] = static_cast<double>(c);
      if (c != 0) p.add_term({k}, QuadExt(c));
    }
    auto roots = oracles::isolate_real_roots(dc);
    if (!roots) continue;
    // Random rational interval, nudged away from any isolated root so the
    // float count is unambiguous.
    Rational a = rng.rational(6, 3), b = rng.rational(6, 3);
    if (b < a) std::swap(a, b);
    if (a == b) continue;
    bool too_close = false;
    long expected = 0;
    for (double r : *roots) {
      if (std::abs(r - a.to_double()) < 1e-5 || std::abs(r - b.to_double()) < 1e-5)
        too_close = true;
      if (r > a.to_double() && r < b.to_double()) ++expected;
    }
    if (too_close) continue;
    ++done;
    CHECK(count_real_roots(p, RootDomain::interval(a, b)) == expected);
  }
}

TEST_CASE("root witness isolation") {
  // z (z^2 + 1): only real root is exactly 0.
  MultiPoly p = upoly({0, 1, 0, 1});
  auto w = find_root_witness(Univariate::from_multipoly(p), RootDomain::all_reals());
  REQUIRE(w.has_value());
  REQUIRE(w->exact.has_value());
  CHECK(*w->exact == Rational(0));

  // t^2 - 2 on |t| >= 1: witness isolates sqrt(2).
  auto w2 = find_root_witness(Univariate::from_multipoly(upoly({-2, 0, 1})),
                              RootDomain::complement(Rational(1)));
  REQUIRE(w2.has_value());
  CHECK(!w2->exact.has_value());
  CHECK(w2->lo.to_double() <= 1.4142136);
  CHECK(w2->hi.to_double() >= 1.4142135);

  CHECK(!find_root_witness(Univariate::from_multipoly(upoly({1, 0, 1})),
                           RootDomain::all_reals())
             .has_value());
}
