#pragma once

// Real-parameter special functions: Γ, ζ, Li_α, ₂F₁ and the shifted
// hypergeometric L_{a,c}(z) = z·₂F₁(a,1;c;z).
//
// Series evaluations stop once the remaining tail is below
// tol·(1 + |partial sum|), estimated geometrically from |z|. They give up
// after max_series_terms() terms and throw Inconclusive instead of returning
// a truncated value.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "cmh/error.hpp"

namespace cmh {

using cplx = std::complex<double>;

inline constexpr double kDefaultSeriesTol = 1e-14;

/// Hard cap on the number of series terms; CMH_MAX_TERMS overrides the
/// default of one million.
inline std::size_t max_series_terms() {
  static const std::size_t cap = [] {
    std::size_t value = 1'000'000;
    if (const char *env = std::getenv("CMH_MAX_TERMS")) {
      char *end = nullptr;
      const unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && parsed > 0) value = static_cast<std::size_t>(parsed);
    }
    return value;
  }();
  return cap;
}

// ---------------------------------------------------------------------------
// Gamma

/// Γ(x) for x > 0. Backed by the C library's tgamma, which is accurate to a
/// few ulp on (0, 171).
inline double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be positive, got " + std::to_string(x));
  return std::tgamma(x);
}

/// log Γ(x) for x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (x < 170.0) return std::log(std::tgamma(x));
  // Stirling with four correction terms; x >= 170 makes the remainder < 1e-20.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

/// Rising factorial (a)_n = a(a+1)...(a+n-1), (a)_0 = 1.
inline double pochhammer(double a, std::size_t n) {
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p *= a + static_cast<double>(i);
  return p;
}

// ---------------------------------------------------------------------------
// Riemann zeta

/// ζ(s) for real s > 1.
///
/// Partial sum up to N-1, the integral tail N^{1-s}/(s-1), and Euler-Maclaurin
/// corrections through B_14. With N = 20 the remainder is below 1e-17·ζ(s)
/// for every s > 1, so `tol` only has to be non-negative.
inline double zeta(double s, double tol = kDefaultSeriesTol) {
  if (!(s > 1.0 + 1e-6)) throw DomainError("zeta: requires s > 1");
  if (tol < 0.0) throw DomainError("zeta: tolerance must be non-negative");

  constexpr int N = 20;
  // B_{2j} / (2j)!
  constexpr double kB[] = {1.0 / 12.0,         -1.0 / 720.0,          1.0 / 30240.0,
                           -1.0 / 1209600.0,   1.0 / 47900160.0,      -691.0 / 1307674368000.0,
                           1.0 / 74724249600.0};

  double head = 0.0;
  for (int n = N - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -s);

  const double nn = N;
  double tail = std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s);
  // j-th correction: B_{2j}/(2j)! · s(s+1)...(s+2j-2) · N^{-s-2j+1}
  double rising = s;
  double power = std::pow(nn, -s - 1.0);
  for (int j = 0; j < 7; ++j) {
    tail += kB[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= nn * nn;
  }
  return head + tail;
}

// ---------------------------------------------------------------------------
// Polylogarithm

namespace detail {

inline void require_series_disk(const cplx &z, const char *who) {
  if (!(std::abs(z) <= 1.0 - 1e-9))
    throw DomainError(std::string(who) + ": series requires |z| <= 1 - 1e-9");
}

} // namespace detail

/// Li_α(z) = Σ_{n≥1} zⁿ/n^α for α ≥ 0 and |z| ≤ 1 - 1e-9. Li_0 uses the
/// closed form z/(1-z). z = 1 exactly is accepted for α > 1 and returns ζ(α).
inline cplx polylog(double alpha, cplx z, double tol = kDefaultSeriesTol) {
  if (!(alpha >= 0.0)) throw DomainError("polylog: order must be >= 0");
  if (z == cplx(1.0, 0.0) && alpha > 1.0) return zeta(alpha);
  detail::require_series_disk(z, "polylog");
  if (alpha == 0.0) return z / (1.0 - z);

  const double r = std::abs(z);
  const double tail_factor = 1.0 / (1.0 - r);
  const std::size_t cap = max_series_terms();
  cplx sum = 0.0;
  cplx zn = 1.0;
  for (std::size_t n = 1; n <= cap; ++n) {
    zn *= z;
    const cplx term = zn * std::pow(static_cast<double>(n), -alpha);
    sum += term;
    if (std::abs(term) * tail_factor <= tol * (1.0 + std::abs(sum))) return sum;
  }
  throw Inconclusive("polylog: series did not converge within the term cap",
                     std::pow(r, static_cast<double>(cap)) * tail_factor);
}

/// Li_α'(z) by the term-wise differentiated series Σ n^{1-α} z^{n-1}.
inline cplx polylog_derivative(double alpha, cplx z, double tol = kDefaultSeriesTol) {
  if (!(alpha >= 0.0)) throw DomainError("polylog_derivative: order must be >= 0");
  detail::require_series_disk(z, "polylog_derivative");

  const double r = std::abs(z);
  const double tail_factor = 1.0 / (1.0 - r);
  const std::size_t cap = max_series_terms();
  cplx sum = 1.0;
  cplx zn = 1.0; // z^{n-1}
  for (std::size_t n = 2; n <= cap; ++n) {
    zn *= z;
    const double nd = static_cast<double>(n);
    const cplx term = zn * std::pow(nd, 1.0 - alpha);
    sum += term;
    if (std::abs(term) * tail_factor * (1.0 + 1.0 / nd) <= tol * (1.0 + std::abs(sum))) return sum;
  }
  throw Inconclusive("polylog_derivative: series did not converge within the term cap",
                     std::pow(r, static_cast<double>(cap)) * tail_factor);
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function

namespace detail {

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::floor(x) == x;
}

} // namespace detail

/// ₂F₁(a,b;c;z) by its power series, |z| ≤ 1 - 1e-9.
inline cplx hyp2f1(double a, double b, double c, cplx z, double tol = kDefaultSeriesTol) {
  if (detail::is_nonpositive_integer(c))
    throw DomainError("hyp2f1: c must not be a non-positive integer");
  detail::require_series_disk(z, "hyp2f1");

  const double r = std::abs(z);
  const double tail_factor = 1.0 / (1.0 - r);
  // Past this index the coefficient ratio has settled near one.
  const double transient = std::abs(a) + std::abs(b) + std::abs(c) + 10.0;
  const std::size_t cap = max_series_terms();
  cplx sum = 1.0;
  cplx term = 1.0;
  for (std::size_t n = 0; n < cap; ++n) {
    const double nd = static_cast<double>(n);
    term *= (a + nd) * (b + nd) / ((c + nd) * (nd + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum; // a or b a non-positive integer: polynomial
    if (nd > transient && std::abs(term) * tail_factor <= tol * (1.0 + std::abs(sum))) return sum;
  }
  throw Inconclusive("hyp2f1: series did not converge within the term cap",
                     std::abs(term) * tail_factor);
}

/// ₂F₁(a,b;c;1⁻) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b)), defined for c - a - b > 0.
inline double gauss_value(double a, double b, double c) {
  if (!(c - a - b > 0.0)) throw DomainError("gauss_value: requires c - a - b > 0");
  if (detail::is_nonpositive_integer(c))
    throw DomainError("gauss_value: c must not be a non-positive integer");
  // 1/Γ vanishes at the poles, which is the correct limit for a terminating series.
  auto rgamma = [](double x) { return detail::is_nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); };
  return std::tgamma(c) * std::tgamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
}

/// L_{a,c}(z) = z·₂F₁(a,1;c;z) by the series, for real c > a > 0 and |z| < 1.
/// The Euler-measure path for the rest of the slit plane lives in
/// special_maps.hpp.
inline cplx shifted_hyp2f1_series(double a, double c, cplx z, double tol = kDefaultSeriesTol) {
  if (!(c > a && a > 0.0)) throw DomainError("L_{a,c}: requires c > a > 0");
  return z * hyp2f1(a, 1.0, c, z, tol);
}

/// L_{a,c}'(1⁻) = (c-1)(c-2) / ((c-a-1)(c-a-2)), finite when c - a > 2.
inline double shifted_hyp2f1_derivative_at_one(double a, double c) {
  if (!(c > a && a > 0.0)) throw DomainError("L_{a,c}: requires c > a > 0");
  if (!(c - a > 2.0)) throw DomainError("L_{a,c}'(1-) is infinite unless c - a > 2");
  return (c - 1.0) * (c - 2.0) / ((c - a - 1.0) * (c - a - 2.0));
}

/// The constant M = L_{a2,c2}'(1⁻) / L_{a,c}'(1⁻) written without Γ:
/// (c2-1)(c2-2)(c-a-1)(c-a-2) / ((c-1)(c-2)(c2-a2-1)(c2-a2-2)).
inline double hypergeom_dilatation_constant(double a, double c, double a2, double c2) {
  if (!(c > a && a > 0.0 && c2 > a2 && a2 > 0.0))
    throw DomainError("hypergeometric constant: requires c > a > 0 and c2 > a2 > 0");
  return (c2 - 1.0) * (c2 - 2.0) * (c - a - 1.0) * (c - a - 2.0) /
         ((c - 1.0) * (c - 2.0) * (c2 - a2 - 1.0) * (c2 - a2 - 2.0));
}

} // namespace cmh
