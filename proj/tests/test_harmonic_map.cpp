#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace cmh;
using Catch::Approx;

namespace {

const Measure f1 = Measure::dirac(1.0);   // z/(1-z)
const Measure ident = Measure::dirac(0.0); // z

HarmonicMap exqc(double c) { return HarmonicMap::from_measures(f1, ident, c); }

const DiskGrid coarse{0.1, 0.9, 8, 24};
const RectGrid small_rect{-3, 0.99, 0.01, 3, 12, 12};

} // namespace

TEST_CASE("evaluation", "[harmonic_map]") {
  CHECK(eval_harmonic(HarmonicMap::from_measures(f1, f1, 0.0), 0.5).real() == 1.0);
  const cplx z(0.0, 0.5);
  const cplx expected = z / (1.0 - z) + 0.3 * std::conj(z);
  CHECK(std::abs(eval_harmonic(HarmonicMap::from_measures(f1, ident, 0.3), z) - expected) <= 1e-15);
  CHECK(eval_harmonic(exqc(0.2), 0.0) == cplx(0.0));
  CHECK_THROWS_AS(HarmonicMap::from_measures(f1, f1, 1.0), DomainError);
}

TEST_CASE("collapse of the arc |z-1| = 1/sqrt(c)", "[harmonic_map]") {
  const double c = 0.36;
  const double R = 1.0 / std::sqrt(c);
  const double half = std::acos(-0.5 * R); // |1 + R e^{iθ}| < 1 iff cos θ < -R/2
  const HarmonicMap f = exqc(c);
  for (int j = 1; j <= 12; ++j) {
    const double theta = std::numbers::pi - (std::numbers::pi - half) * (2.0 * j / 13.0 - 1.0);
    const cplx z = 1.0 + std::polar(R, theta);
    REQUIRE(std::abs(z) < 1.0);
    CHECK(std::abs(eval_harmonic(f, z) - (c - 1.0)) <= 1e-10);
  }
}

TEST_CASE("dilatation and jacobian", "[harmonic_map]") {
  const Measure mu = Measure::beta(1.5, 4.0);
  const HarmonicMap same = HarmonicMap::from_measures(mu, mu, 0.4);
  for (cplx z : {cplx(0.2, 0.3), cplx(-0.8, 0.1)}) {
    CHECK(std::abs(dilatation(same, z) - 0.4) <= 1e-12);
    const double hp = std::norm(same.h().derivative(z, 1));
    CHECK(jacobian(same, z) == Approx(0.84 * hp).epsilon(1e-12));
  }
  CHECK(std::abs(dilatation(exqc(0.3), 0.0) - 0.3) <= 1e-15);
  CHECK(std::abs(dilatation(exqc(0.2), -0.9) - 0.722) <= 1e-14);
  CHECK(jacobian(HarmonicMap::from_measures(f1, f1, 0.0), cplx(0.3, 0.3)) > 0);
  CHECK_THROWS_AS(dilatation(exqc(0.2), 1.0), DomainError);
}

TEST_CASE("jacobian changes sign on (-1, 0) for c > 1/4", "[harmonic_map]") {
  const HarmonicMap f = exqc(0.3);
  CHECK(jacobian(f, -0.1) > 0);
  CHECK(jacobian(f, -0.95) < 0);
}

TEST_CASE("property: jacobian sign tracks |omega| < 1", "[harmonic_map][property]") {
  cmh_test::Gen gen(83);
  for (int trial = 0; trial < 12; ++trial) {
    const HarmonicMap f = HarmonicMap::from_measures(gen.measure(), gen.measure(), gen.uniform(0.0, 0.99));
    for (int i = 0; i < 15; ++i) {
      const cplx z = gen.disk_point(0.95);
      const double w = std::abs(dilatation(f, z));
      if (std::abs(w - 1.0) < 1e-9) continue;
      REQUIRE((jacobian(f, z) > 0) == (w < 1.0));
    }
  }
}

TEST_CASE("grid certificates", "[harmonic_map]") {
  const QCCertificate ok = certify_qc_grid(exqc(0.2), 0.8);
  CHECK(ok.status == CertStatus::certified);
  CHECK(*ok.sup_estimate == Approx(0.2 * 1.95 * 1.95).epsilon(1e-12));
  CHECK(ok.argsup.real() == Approx(-0.95));
  const QCCertificate bad = certify_qc_grid(exqc(0.3), 0.8);
  CHECK(bad.status == CertStatus::violated);
  const Measure mu = Measure::lebesgue();
  CHECK(*certify_qc_grid(HarmonicMap::from_measures(mu, mu, 0.5), 0.5, coarse).sup_estimate == Approx(0.5));
  CHECK_THROWS_AS(certify_qc_grid(exqc(0.2), 1.0), DomainError);
}

TEST_CASE("refining the grid pushes the estimate towards 4c", "[harmonic_map]") {
  double prev = 0.0;
  for (double rmax : {0.95, 0.98, 0.99, 0.995}) {
    const double sup = *certify_qc_grid(exqc(0.2), 0.8, DiskGrid{0.1, rmax, 18, 64}).sup_estimate;
    CHECK(sup > prev);
    CHECK(sup <= 0.8);
    prev = sup;
  }
  CHECK(prev >= 0.78);
}

TEST_CASE("modulus lower bound", "[harmonic_map]") {
  const HarmonicMap f = HarmonicMap::from_measures(f1, f1, 0.5);
  std::vector<cplx> samples = DiskGrid{0.1, 0.95, 6, 16}.nodes();
  const ModulusReport r = modulus_lower_bound_check(f, 0.75, samples);
  CHECK(r.limit_value == Approx(-0.75));
  CHECK(r.holds);
  // Real negative z: equality in the pointwise bound.
  const ModulusReport eq = modulus_lower_bound_check(f, 0.75, {cplx(-0.5, 0.0)});
  CHECK(std::abs(eq.worst_pointwise_margin) <= 1e-15);
  const ModulusReport plain = modulus_lower_bound_check(HarmonicMap::from_measures(f1, f1, 0.0), 0.5, samples);
  CHECK(plain.holds);
  CHECK(plain.limit_value == Approx(-0.5));
}

TEST_CASE("property: a + f(-r) is non-increasing in r", "[harmonic_map][property]") {
  cmh_test::Gen gen(89);
  for (int trial = 0; trial < 10; ++trial) {
    const HarmonicMap f = HarmonicMap::from_measures(gen.measure(), gen.measure(), gen.uniform(0.0, 0.99));
    double prev = 1.0;
    for (int i = 0; i <= 40; ++i) {
      const double v = eval_harmonic(f, -0.999 * i / 40.0).real();
      REQUIRE(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("partial signs", "[harmonic_map]") {
  const Measure mu = Measure::beta(1.0, 3.0);
  const PartialSignReport same = partial_sign_check(HarmonicMap::from_measures(mu, mu, 0.4), small_rect);
  CHECK(same.i_holds);
  CHECK(same.ii_checked);
  CHECK(same.ii_holds);
  CHECK(same.degenerate == 0);
  CHECK(same.nodes == 2 * 12 * 12);

  const PartialSignReport mixed = partial_sign_check(exqc(0.5), small_rect);
  CHECK(mixed.i_holds);
  CHECK_FALSE(mixed.ii_checked);
  CHECK_FALSE(mixed.ii_skip_reason.empty());

  const PartialSignReport lin = partial_sign_check(HarmonicMap::from_measures(ident, ident, 0.3), small_rect);
  CHECK(lin.degenerate == lin.nodes);
  CHECK(lin.i_violations == 0);
}

TEST_CASE("nonnegativity probe", "[harmonic_map]") {
  CHECK(probe_difference_nonnegative(Measure::lebesgue(), Measure::lebesgue(), 0.7).ok);
  CHECK_FALSE(probe_difference_nonnegative(f1, ident, 0.5).ok);
  const Measure mu({{0.5, 0.5}}, {{Density::lebesgue(), 0.5}});
  const Measure nu({{0.5, 0.6}}, {{Density::lebesgue(), 0.4}});
  CHECK(probe_difference_nonnegative(mu, nu, 0.8).ok);
  CHECK_FALSE(probe_difference_nonnegative(mu, nu, 0.9).ok);
}

TEST_CASE("property: cross-inequality kernel positivity", "[harmonic_map][property]") {
  cmh_test::Gen gen(97);
  for (int i = 0; i < 2000; ++i) {
    const double s = gen.uniform(0, 1), t = gen.uniform(0, 1), x = gen.uniform(-5, 1);
    const double r2 = x * x + gen.uniform(0, 4);
    REQUIRE(1 - (s + t) * x + s * t * r2 >= (1 - s) * (1 - t) - 1e-12);
    REQUIRE((1 - s) * (1 - t) >= 0);
  }
}

TEST_CASE("convolution algebra", "[harmonic_map]") {
  const Measure lg2 = Measure::loggamma(2.0);
  const Measure lg3 = Measure::loggamma(3.0);
  const HarmonicMap a = HarmonicMap::from_measures(lg2, lg3, 0.4);
  const HarmonicMap unit = HarmonicMap::from_measures(f1, ident, 0.5);
  const HarmonicMap p = convolve(a, unit, 24);
  CHECK(p.c() == cplx(0.2));
  const std::vector<double> h = p.h().coefficients(24);
  const std::vector<double> g = p.g().coefficients(24);
  for (std::size_t n = 0; n < 24; ++n) CHECK(h[n] == Approx(std::pow(n + 1.0, -2.0)).epsilon(1e-10));
  CHECK(g[0] == 1.0);
  for (std::size_t n = 1; n < 24; ++n) CHECK(g[n] == 0.0);

  const HarmonicMap q = convolve(a, a, 24);
  const std::vector<double> hq = q.h().coefficients(24);
  for (std::size_t n = 0; n < 24; ++n) CHECK(hq[n] == Approx(std::pow(n + 1.0, -4.0)).epsilon(1e-9));
  CHECK(std::abs(q.h().value(0.5) - polylog(4.0, 0.5)) <= 1e-8);
  CHECK_THROWS_AS(q.h().value(0.96), DomainError);

  const HarmonicMap complex_c(AnalyticPart::measure(lg2), AnalyticPart::measure(lg2), cplx(0.3, 0.4));
  CHECK(std::abs(convolve(complex_c, complex_c, 8).c() - cplx(0.3, 0.4) * cplx(0.3, 0.4)) <= 1e-16);
}

TEST_CASE("series parts differentiate term by term", "[harmonic_map]") {
  const AnalyticPart p = AnalyticPart::series({1.0, 0.5, 0.25, 0.125});
  const cplx z(0.3, -0.2);
  auto poly = [&](cplx w) { return w + 0.5 * w * w + 0.25 * w * w * w + 0.125 * w * w * w * w; };
  CHECK(std::abs(p.value(z) - poly(z)) <= 1e-15);
  CHECK(std::abs(p.derivative(z, 1) - (1.0 + z + 0.75 * z * z + 0.5 * z * z * z)) <= 1e-15);
  CHECK(std::abs(p.derivative(z, 2) - (1.0 + 1.5 * z + 1.5 * z * z)) <= 1e-15);
  CHECK(std::abs(p.derivative(z, 3) - (1.5 + 3.0 * z)) <= 1e-15);
}

TEST_CASE("convex combinations", "[harmonic_map]") {
  const HarmonicMap a = exqc(0.3);
  const HarmonicMap b = HarmonicMap::from_measures(ident, f1, 0.3);
  CHECK(convex_combination(a, b, 1.0).h() == a.h());
  const HarmonicMap m = convex_combination(HarmonicMap::from_measures(ident, ident, 0.3),
                                           HarmonicMap::from_measures(f1, ident, 0.3), 0.5);
  const cplx z(0.2, 0.4);
  CHECK(std::abs(m.h().value(z) - (z / 2.0 + z / (2.0 * (1.0 - z)))) <= 1e-15);
  CHECK(m.h().representing_measure()->mass() == Approx(1.0));
  CHECK_THROWS_AS(convex_combination(a, exqc(0.2), 0.5), DomainError);
}

TEST_CASE("convolution-built maps", "[harmonic_map]") {
  const ShiftedTFunction h(Measure::beta(1, 3));
  const ShiftedTFunction id_g(f1);
  const HarmonicMap same = construct_conv_map(h, id_g, 0.3);
  CHECK(std::abs(dilatation(same, cplx(0.4, 0.4)) - 0.3) <= 1e-10);
  const HarmonicMap lin = construct_conv_map(h, ShiftedTFunction(ident), 0.3);
  const cplx z(0.1, 0.6);
  CHECK(std::abs(eval_harmonic(lin, z) - (eval_shifted(h, z) + 0.3 * std::conj(z))) <= 1e-12);

  const QCCertificate ex41 = certify_qc_grid(construct_conv_map(ShiftedTFunction(f1), ShiftedTFunction(Measure::lebesgue()), 0.2), 0.8, coarse);
  CHECK(ex41.status == CertStatus::certified);
}

TEST_CASE("property: convolution dilatation matches the coefficient quotient", "[harmonic_map][property]") {
  cmh_test::Gen gen(101);
  for (int trial = 0; trial < 4; ++trial) {
    const ShiftedTFunction h(gen.measure());
    const ShiftedTFunction g(gen.measure());
    const double c = gen.uniform(0.0, 0.9);
    const HarmonicMap f = construct_conv_map(h, g, c);
    const std::vector<double> a = moments(h.measure(), 400);
    const std::vector<double> b = moments(g.measure(), 400);
    for (int i = 0; i < 4; ++i) {
      const cplx z = gen.disk_point(0.9);
      cplx num = 0.0, den = 0.0, zn = 1.0;
      for (std::size_t n = 0; n <= 400; ++n) {
        num += (n + 1.0) * a[n] * b[n] * zn;
        den += (n + 1.0) * a[n] * zn;
        zn *= z;
      }
      REQUIRE(std::abs(dilatation(f, z) - c * num / den) <= 1e-8);
    }
  }
}

TEST_CASE("ratio bounds", "[harmonic_map]") {
  CHECK(ratio_bound_sup(ShiftedTFunction(ident), coarse).sup == 1.0);
  const RatioSupReport r = ratio_bound_sup(ShiftedTFunction(f1));
  CHECK(r.sup == Approx(1.95 * 1.95));
  CHECK(r.sup < 4.0);
  const HarnackReport hk = harnack_ratio_bound(ShiftedTFunction(f1), 1.0, coarse);
  CHECK(hk.hypothesis_holds);
  CHECK(hk.bound == Approx(std::exp(2.0)));
  CHECK(hk.ratio_within_bound);
  const HarnackReport lin = harnack_ratio_bound(ShiftedTFunction(ident), 0.1, coarse);
  CHECK(lin.hypothesis_holds);
  CHECK(lin.ratio.sup == 1.0);
  const HarnackReport l13 = harnack_ratio_bound(ShiftedTFunction(Measure::beta(1, 3)), 1.0, coarse);
  CHECK(l13.hypothesis_holds);
  CHECK(l13.ratio.sup < std::exp(2.0));
}

TEST_CASE("density ratio condition", "[harmonic_map]") {
  DensityRatioOptions o;
  o.samples = 60;
  o.grid = small_rect;
  const DensityRatioReport beta = density_ratio_condition(Measure::beta(1, 3), Measure::beta(2, 3), o);
  CHECK(beta.holds);
  REQUIRE(beta.derivative_quotient);
  CHECK(beta.derivative_quotient->consistent);
  CHECK(beta.quotient->consistent);
  CHECK(density_ratio_condition(Measure::lebesgue(), Measure::lebesgue(), o).worst_value == 0.0);
  const DensityRatioReport lg = density_ratio_condition(Measure::loggamma(2), Measure::loggamma(1), o);
  CHECK(lg.holds);
  CHECK(lg.derivative_quotient->consistent);
  CHECK_FALSE(density_ratio_condition(Measure::beta(2, 3), Measure::beta(1, 3), o).holds);
  CHECK_THROWS_AS(density_ratio_condition(f1, Measure::lebesgue(), o), DomainError);
}

TEST_CASE("certificates via the limit at one", "[harmonic_map]") {
  const ShiftedTFunction h(Measure::beta(1.5, 5.0));
  const QCCertificate same = certify_qc_via_limit(h, h, 0.4, 0.5, coarse);
  CHECK(same.status == CertStatus::certified);
  CHECK(*same.constant == 1.0);
  CHECK(certify_qc_via_limit(h, h, 0.6, 0.5, coarse).status == CertStatus::violated);

  const ShiftedTFunction li4(Measure::loggamma(4.0));
  const ShiftedTFunction li3(Measure::loggamma(3.0));
  const QCCertificate pl = certify_qc_via_limit(li4, li3, 0.5, 0.7, coarse);
  CHECK(pl.status == CertStatus::certified);
  CHECK(*pl.constant == Approx(zeta(2.0) / zeta(3.0)).epsilon(1e-7));

  // F(1-) infinite: Li_2 over Li_1.5.
  const QCCertificate inf = certify_qc_via_limit(ShiftedTFunction(Measure::loggamma(2.0)),
                                                 ShiftedTFunction(Measure::loggamma(1.5)), 0.1, 0.7, coarse);
  CHECK(inf.status == CertStatus::inconclusive);
}

TEST_CASE("convolution certificates", "[harmonic_map]") {
  const ShiftedTFunction h(f1);
  const ShiftedTFunction g(Measure::beta(1, 2));
  CHECK(certify_qc_conv(h, g, 0.2, 0.8, 4.0, coarse).status == CertStatus::certified);
  CHECK(certify_qc_conv(h, g, 0.3, 0.8, 4.0, coarse).status == CertStatus::violated);
  const QCCertificate est = certify_qc_conv(h, g, 0.2, 0.8, std::nullopt, coarse);
  CHECK(est.status == CertStatus::certified);
  CHECK(*est.constant < 4.0);
}
