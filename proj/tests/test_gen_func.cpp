#include <catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"

using namespace cmh;
using Catch::Approx;

namespace {

TFunction T(Measure m) { return TFunction(std::move(m)); }

} // namespace

TEST_CASE("eval_T closed forms", "[gen_func]") {
  CHECK(eval_T(T(Measure::dirac(1.0)), 0.5).real() == 2.0);
  CHECK(eval_T(T(Measure::lebesgue()), 0.5).real() == Approx(2 * std::log(2.0)).epsilon(1e-13));
  // -log(1-z)/z off the real axis.
  const cplx z(-0.4, 0.7);
  CHECK(std::abs(eval_T(T(Measure::lebesgue()), z) + std::log(1.0 - z) / z) <= 1e-12);
  // Far out on Λ.
  const cplx w(5.0, 0.5);
  CHECK(std::abs(eval_T(T(Measure::lebesgue()), w) + std::log(1.0 - w) / w) <= 1e-11);
}

TEST_CASE("slit guard", "[gen_func]") {
  CHECK_THROWS_AS(eval_T(T(Measure::lebesgue()), 1.0), SlitProximity);
  CHECK_THROWS_AS(eval_T(T(Measure::lebesgue()), cplx(2.0, 1e-13)), SlitProximity);
  CHECK_NOTHROW(eval_T(T(Measure::lebesgue()), cplx(2.0, 1e-3)));
}

TEST_CASE("class T requires a probability measure", "[gen_func]") {
  CHECK_THROWS_AS(T(Measure({{0.5, 0.5}}, {})), DomainError);
}

TEST_CASE("shifted functions", "[gen_func]") {
  CHECK(eval_shifted(ShiftedTFunction(Measure::dirac(1.0)), 0.5).real() == 1.0);
  CHECK(eval_shifted(ShiftedTFunction(Measure::loggamma(1.0)), 0.5).real() == Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(eval_shifted(ShiftedTFunction(Measure::beta(2, 5)), 0.0) == cplx(0.0));
  CHECK(std::abs(eval_shifted_derivative(ShiftedTFunction(Measure::beta(2, 5)), 0.0, 1) - 1.0) <= 1e-12);
}

TEST_CASE("derivatives agree with finite differences", "[gen_func]") {
  const ShiftedTFunction h(Measure({{0.3, 0.4}}, {{Density::beta(0.5, 2.5), 0.6}}));
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.1), cplx(0.1, -0.85)}) {
    const double d = 1e-5;
    for (int m = 1; m <= 3; ++m) {
      const cplx fd = (eval_shifted_derivative(h, z + d, m - 1) - eval_shifted_derivative(h, z - d, m - 1)) / (2 * d);
      CHECK(std::abs(fd - eval_shifted_derivative(h, z, m)) <= 1e-5 * (1 + std::abs(fd)));
    }
    const TFunction F(h.measure());
    const cplx fd = (eval_T(F, z + d) - eval_T(F, z - d)) / (2 * d);
    CHECK(std::abs(fd - eval_T_derivative(F, z, 1)) <= 1e-6);
  }
}

TEST_CASE("limit at one", "[gen_func]") {
  CHECK(limit_at_one(T(Measure::dirac(1.0))).infinite);
  CHECK(limit_at_one(T(Measure::dirac(0.5))).value == 2.0);
  const ExtendedReal z3 = limit_at_one(T(Measure::loggamma(3.0)));
  REQUIRE_FALSE(z3.infinite);
  CHECK(z3.value == Approx(zeta(3.0)).epsilon(1e-9));
  CHECK(limit_at_one(T(Measure::lebesgue())).infinite);
  CHECK(limit_at_one(T(Measure::loggamma(1.0))).infinite);
  // Σ (n+1)^{-α} = ζ(α) stays finite for α > 1.
  const ExtendedReal z15 = limit_at_one(T(Measure::loggamma(1.5)));
  REQUIRE_FALSE(z15.infinite);
  CHECK(z15.value == Approx(zeta(1.5)).epsilon(1e-6));
  // Beta(a,c): Σ (a)_n/(c)_n = (c-1)/(c-a-1) for c - a > 1.
  CHECK(limit_at_one(T(Measure::beta(1, 4))).value == Approx(1.5).epsilon(1e-8));
  CHECK(limit_at_one(T(Measure::beta(0.5, 3.2))).value == Approx(2.2 / 1.7).epsilon(1e-8));
}

TEST_CASE("lower bound of the real part", "[gen_func]") {
  CHECK(lower_bound_re(T(Measure::dirac(1.0))) == 0.5);
  CHECK(lower_bound_re(T(Measure::dirac(0.0))) == 1.0);
  CHECK(lower_bound_re(T(Measure::lebesgue())) == Approx(std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("class T membership reports", "[gen_func]") {
  const RectGrid grid{-3, 0.99, 0.01, 3, 30, 30};
  const TFunction F(Measure::beta(1.2, 3.1));
  CHECK(check_T_membership([&](cplx z) { return eval_T(F, z); }, grid).consistent);
  const TMembershipReport bad = check_T_membership([](cplx z) { return 1.0 - z; }, grid);
  CHECK_FALSE(bad.consistent);
  CHECK(bad.min_im_upper < 0);
  // Li₁/Li₂ (α ≤ β direction).
  const TFunction L1(Measure::loggamma(1.0));
  const TFunction L2(Measure::loggamma(2.0));
  CHECK(check_T_membership([&](cplx z) { return eval_T(L1, z) / eval_T(L2, z); }, grid).consistent);
  CHECK_FALSE(check_T_membership([&](cplx z) { return eval_T(L2, z) / eval_T(L1, z); }, grid).consistent);
}

TEST_CASE("series matches quadrature", "[gen_func][property]") {
  cmh_test::Gen gen(61);
  for (int trial = 0; trial < 10; ++trial) {
    const TFunction F(gen.measure());
    const std::vector<double> a = moments(F.measure(), 400);
    for (int i = 0; i < 5; ++i) {
      const cplx z = gen.disk_point(0.9);
      REQUIRE(std::abs(eval_series(a, z) - eval_T(F, z)) <= 1e-8);
    }
  }
}

TEST_CASE("property: modulus bound and Harnack floor", "[gen_func][property]") {
  cmh_test::Gen gen(67);
  for (int trial = 0; trial < 40; ++trial) {
    const TFunction F(gen.measure());
    const ExtendedReal top = limit_at_one(F);
    const double floor = lower_bound_re(F);
    REQUIRE(floor >= 0.5 - 1e-12);
    REQUIRE(floor <= 1.0 + 1e-12);
    for (int i = 0; i < 10; ++i) {
      const cplx z = gen.disk_point(0.95);
      const cplx v = eval_T(F, z);
      const double radial = eval_T(F, std::abs(z)).real();
      REQUIRE(std::abs(v) <= radial + 1e-9);
      if (!top.infinite) REQUIRE(radial <= top.value + 1e-9);
      REQUIRE(v.real() >= floor - 1e-9);
    }
  }
}

TEST_CASE("property: monotone on the real axis", "[gen_func][property]") {
  cmh_test::Gen gen(71);
  for (int trial = 0; trial < 20; ++trial) {
    const TFunction F(gen.measure());
    double prev = -1.0;
    for (int i = 0; i <= 60; ++i) {
      const double x = -3.0 + 3.98 * i / 60.0;
      const double v = eval_T(F, x).real();
      REQUIRE(v >= prev - 1e-12);
      prev = v;
    }
  }
}
