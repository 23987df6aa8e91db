#include <doctest.h>

#include <functional>

#include "oracles.hpp"
#include "oscidecay/problem.hpp"

using namespace oscidecay;

namespace {

const VarSet kX({"x"});

OscillatoryIntegrand one_dim_x2() {
  return OscillatoryIntegrand(parse_polynomial("x^2", kX), {}, {1.0});
}

QuadratureConfig quick(double tol = 1e-5) {
  QuadratureConfig cfg;
  cfg.rel_tol = tol;
  cfg.max_points = 1LL << 30;
  return cfg;
}

Functional cltt2d(const std::string& phase) {
  VarSet xy({"x", "y"});
  ProjectionSystem sys(xy, {{QuadExt(1), QuadExt(0)},
                            {QuadExt(0), QuadExt(1)},
                            {QuadExt(1), QuadExt(1)}});
  return Functional(sys, parse_polynomial(phase, xy), 3, {1.0, 1.0});
}

}  // namespace

TEST_CASE("one-dimensional oscillatory value against a dense reference") {
  const double lambda = 100.0;
  auto v = evaluate_oscillatory(one_dim_x2(), lambda, quick(1e-7));
  auto ref = oracles::simpson_reference(
      [&](double x) {
        const double amp = bump(x);
        return std::complex<double>(amp * std::cos(lambda * x * x),
                                    amp * std::sin(lambda * x * x));
      },
      -1.0, 1.0, 1u << 20);
  CHECK(std::abs(v - ref) / std::abs(ref) < 1e-6);
}

TEST_CASE("lambda = 0 equals the separable bump reference") {
  Functional fn = ProblemFile::preset("lightcone6").to_functional();
  std::vector<FactorSpec> ones(6, FactorSpec::one());
  QuadratureConfig cfg = quick(1e-7);
  auto v = evaluate_functional(fn, ones, CutoffSpec::bump_product({1, 1, 1}), 0.0, cfg);
  auto b1 = oracles::simpson_reference(
      [](double x) { return std::complex<double>(bump(x), 0.0); }, -1.0, 1.0, 1u << 18);
  const double ref = std::pow(b1.real(), 3.0);
  CHECK(std::abs(v.real() - ref) / ref < 1e-6);
  CHECK(std::abs(v.imag()) < 1e-12);
}

TEST_CASE("conjugation symmetry at +/- lambda for real data") {
  Functional fn = cltt2d("x^2*y");
  std::vector<FactorSpec> gs(3, FactorSpec::gaussian(0, 1));
  CutoffSpec cut = CutoffSpec::bump_product({1, 1});
  QuadratureConfig cfg = quick(1e-5);
  auto plus = evaluate_functional(fn, gs, cut, 37.0, cfg);
  auto minus = evaluate_functional(fn, gs, cut, -37.0, cfg);
  CHECK(std::abs(minus - std::conj(plus)) <= cfg.rel_tol * std::abs(plus));
}

TEST_CASE("factor counts must match") {
  Functional fn = cltt2d("x^2*y");
  std::vector<FactorSpec> two(2, FactorSpec::one());
  CHECK_THROWS_AS(make_integrand(fn, two, CutoffSpec::bump_product({1, 1})), Error);
}

TEST_CASE("refinement: accepted value is stable under one more doubling") {
  OscillatoryIntegrand f = one_dim_x2();
  QuadratureConfig cfg = quick(1e-6);
  const double lambda = 50.0;
  auto accepted = evaluate_oscillatory(f, lambda, cfg);
  std::vector<long long> panels = initial_panels(f, lambda);
  for (auto& p : panels) p *= 8;
  auto dense = evaluate_fixed(f, lambda, panels, cfg);
  CHECK(std::abs(accepted - dense) <= 2 * cfg.rel_tol * std::abs(dense));
}

TEST_CASE("linearity in one factor") {
  Functional fn = cltt2d("x^2*y");
  CutoffSpec cut = CutoffSpec::bump_product({1, 1});
  QuadratureConfig cfg = quick(1e-6);
  std::vector<FactorSpec> base = {FactorSpec::trig({1.0}), FactorSpec::gaussian(0, 1),
                                  FactorSpec::gaussian(0, 1)};
  std::vector<FactorSpec> scaled = base;
  scaled[0] = FactorSpec::trig({2.5});
  auto v1 = evaluate_functional(fn, base, cut, 25.0, cfg);
  auto v2 = evaluate_functional(fn, scaled, cut, 25.0, cfg);
  CHECK(std::abs(v2 - 2.5 * v1) <= 10 * cfg.rel_tol * std::abs(v2));
}

TEST_CASE("trig-poly factors evaluate as cosine series") {
  FactorSpec f = FactorSpec::trig({0.5, 2.0, -1.0});
  const double t = 0.7;
  CHECK(f.eval(t) == doctest::Approx(0.5 + 2.0 * std::cos(t) - std::cos(2 * t)));
  CHECK(FactorSpec::one().eval(3.0) == 1.0);
  CHECK(FactorSpec::gaussian(1, 2).eval(1.0) == 1.0);
  CHECK_THROWS_AS(FactorSpec::gaussian(0, 0), Error);
}

TEST_CASE("decay fit: quick stationary-phase sanity") {
  DecayFit fit = decay_exponent(one_dim_x2(), geometric_grid(16, 256, 9), quick(1e-4));
  CHECK(fit.epsilon > 0.35);
  CHECK(fit.epsilon < 0.65);
  CHECK(fit.fit_quality > 0.9);
  CHECK(fit.csv().rfind("lambda,re,im,abs\n", 0) == 0);
}

TEST_CASE("decay fit: zero phase has zero exponent") {
  OscillatoryIntegrand f(MultiPoly::zero(kX), {}, {1.0});
  DecayFit fit = decay_exponent(f, geometric_grid(16, 1024, 13), quick(1e-5));
  CHECK(fit.epsilon < 0.02);
}

TEST_CASE("decay fit: grid validation") {
  OscillatoryIntegrand f = one_dim_x2();
  CHECK_THROWS_AS(decay_exponent(f, {1, 2, 4, 8, 16}, quick()), Error);          // 5 points
  CHECK_THROWS_AS(decay_exponent(f, geometric_grid(0.5, 64, 8), quick()), Error);  // < 1
  CHECK_THROWS_AS(decay_exponent(f, {16, 18, 20, 22, 24, 26}, quick()), Error);  // ratio < sqrt 2
}

TEST_CASE("non-convergence carries the last iterates") {
  OscillatoryIntegrand f = one_dim_x2();
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-16;  // unreachable
  cfg.max_refinements = 1;
  try {
    evaluate_oscillatory(f, 30.0, cfg);
    FAIL("expected non-convergence");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.last_iterate().real()));
    CHECK(std::isfinite(e.previous_iterate().real()));
  }
}

TEST_CASE("point budget is enforced") {
  OscillatoryIntegrand f = one_dim_x2();
  QuadratureConfig cfg;
  cfg.max_points = 8;
  CHECK_THROWS_AS(evaluate_oscillatory(f, 1000.0, cfg), Error);
}

TEST_CASE("panel reduction is bitwise worker-independent") {
  Functional fn = cltt2d("x^2*y");
  std::vector<FactorSpec> gs(3, FactorSpec::gaussian(0, 1));
  OscillatoryIntegrand f = make_integrand(fn, gs, CutoffSpec::bump_product({1, 1}));
  std::vector<long long> panels = {37, 23};
  for (double lambda : {0.0, 19.5}) {
    QuadratureConfig one = quick(), four = quick();
    one.threads = 1;
    four.threads = 4;
    auto a = evaluate_fixed(f, lambda, panels, one);
    auto b = evaluate_fixed(f, lambda, panels, four);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
  }
}
