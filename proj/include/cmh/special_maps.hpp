#pragma once

// Harmonic maps built from polylogarithms and shifted hypergeometric
// functions, and their closed-form quasiconformality certificates.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cmh/error.hpp"
#include "cmh/gen_func.hpp"
#include "cmh/harmonic_map.hpp"
#include "cmh/measure.hpp"
#include "cmh/special_fn.hpp"

namespace cmh {

/// Representing measure of Li_α: (-log t)^{α-1}/Γ(α) dt, or δ₁ for α = 0.
inline Measure polylog_measure(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("polylog order must be >= 0");
  return alpha == 0.0 ? Measure::dirac(1.0) : Measure::loggamma(alpha);
}

/// Li_α(z) through its integral representation z/Γ(α)·∫(-log t)^{α-1}/(1-tz) dt.
inline cplx polylog_integral(double alpha, cplx z) {
  if (!(alpha > 0.0)) throw DomainError("polylog_integral: order must be > 0");
  return eval_shifted(ShiftedTFunction(Measure::loggamma(alpha)), z);
}

/// L_{a,c}(z) through the Euler (Beta) measure; valid on all of Λ.
inline cplx shifted_hyp2f1_euler(double a, double c, cplx z) {
  if (!(c > a && a > 0.0)) throw DomainError("L_{a,c}: requires c > a > 0");
  return eval_shifted(ShiftedTFunction(Measure::beta(a, c)), z);
}

/// L_{a,c}(z): series on |z| ≤ 0.9, Euler quadrature elsewhere on Λ.
inline cplx shifted_hyp2f1(double a, double c, cplx z) {
  if (std::abs(z) <= 0.9) return shifted_hyp2f1_series(a, c, z);
  return shifted_hyp2f1_euler(a, c, z);
}

/// f = Li_α + c·conj(Li_β).
inline HarmonicMap polylog_map(double alpha, double beta, double c) {
  return HarmonicMap::from_measures(polylog_measure(alpha), polylog_measure(beta), c);
}

/// f = L_{a,c} + b·conj(L_{a2,c2}).
inline HarmonicMap hypergeom_map(double a, double c, double a2, double c2, double b) {
  return HarmonicMap::from_measures(Measure::beta(a, c), Measure::beta(a2, c2), b);
}

/// Aitken Δ² on the last three of v(1 - 10^{-j}), j = jmin..jmax.
template <class Fn> double extrapolate_to_one(Fn &&v, int jmin = 2, int jmax = 5) {
  if (jmax - jmin < 2) throw DomainError("extrapolate_to_one: need at least three samples");
  std::vector<double> s;
  for (int j = jmin; j <= jmax; ++j) s.push_back(v(1.0 - std::pow(10.0, -j)));
  const std::size_t m = s.size();
  const double d1 = s[m - 2] - s[m - 3];
  const double d2 = s[m - 1] - s[m - 2];
  const double denom = d2 - d1;
  if (denom == 0.0) return s[m - 1];
  return s[m - 1] - d2 * d2 / denom;
}

namespace detail {

inline void require_map_constant(double c) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("harmonic coefficient must lie in [0, 1)");
}

} // namespace detail

/// Certificate for f = Li_α + c·conj(Li_β), α, β ≥ 1.
///
/// (i)  α ≤ β and 2c ≤ k.
/// (ii) 2 < β ≤ α and c·ζ(β-1)/ζ(α-1) ≤ k. This bound equals sup|ω_f|, so
///      exceeding k is reported as a violation.
/// α = β with neither branch firing falls back to ω ≡ c.
inline QCCertificate certify_polylog_map(double alpha, double beta, double c, double k,
                                         const DiskGrid &spot = {}) {
  if (!(alpha >= 1.0 && beta >= 1.0))
    throw DomainError("polylog certificate requires alpha, beta >= 1");
  detail::require_map_constant(c);
  detail::require_k(k);

  QCCertificate cert;
  cert.bound_k = k;
  const bool i_shape = alpha <= beta;
  const bool ii_shape = 2.0 < beta && beta <= alpha;
  double ii_constant = 0.0;
  if (ii_shape) {
    ii_constant = zeta(beta - 1.0) / zeta(alpha - 1.0);
    cert.diagnostics.emplace_back("zeta(beta-1)/zeta(alpha-1)", ii_constant);
  }

  if (i_shape && 2.0 * c <= k) {
    cert.method = QCMethod::thm1_7i;
    cert.status = CertStatus::certified;
    cert.constant = 2.0;
    cert.hypothesis = "alpha <= beta and 2c <= k";
  } else if (ii_shape) {
    cert.method = QCMethod::thm1_7ii;
    cert.constant = ii_constant;
    cert.status = c * ii_constant <= k ? CertStatus::certified : CertStatus::violated;
    cert.hypothesis = "2 < beta <= alpha, bound c*zeta(beta-1)/zeta(alpha-1)";
  } else if (alpha == beta) {
    cert.method = QCMethod::thm1_9;
    cert.constant = 1.0;
    cert.status = c <= k ? CertStatus::certified : CertStatus::violated;
    cert.hypothesis = "identical parts, omega = c";
  } else {
    cert.method = i_shape ? QCMethod::thm1_7i : QCMethod::thm1_7ii;
    cert.hypothesis = i_shape ? "alpha <= beta but 2c > k" : "beta <= 2 < alpha or beta > alpha: no branch applies";
    return cert;
  }
  cert.diagnostics.emplace_back("c*constant", c * *cert.constant);
  detail::spot_check(cert, polylog_map(alpha, beta, c), spot);
  return cert;
}

/// Certificate for f = L_{a,c} + b·conj(L_{a2,c2}).
///
/// (i)  a ≥ a2, c - a ≤ c2 - a2 and 2b ≤ k.
/// (ii) a2 ≥ a, 2 < c2 - a2 ≤ c - a and b·M ≤ k, M = g'(1⁻)/h'(1⁻).
/// The closed form of h'(1⁻) is cross-checked against an extrapolated
/// quadrature limit whenever it is finite.
inline QCCertificate certify_hypergeom_map(double a, double c, double a2, double c2, double b, double k,
                                           const DiskGrid &spot = {}) {
  if (!(c > a && a > 0.0 && c2 > a2 && a2 > 0.0))
    throw DomainError("hypergeometric certificate requires c > a > 0 and c2 > a2 > 0");
  detail::require_map_constant(b);
  detail::require_k(k);

  QCCertificate cert;
  cert.method = QCMethod::hypergeom;
  cert.bound_k = k;

  const ShiftedTFunction h(Measure::beta(a, c));
  if (c - a > 2.0) {
    const double closed = shifted_hyp2f1_derivative_at_one(a, c);
    const double numeric =
        extrapolate_to_one([&](double x) { return eval_shifted_derivative(h, x, 1).real(); });
    cert.diagnostics.emplace_back("h'(1-) closed form", closed);
    cert.diagnostics.emplace_back("h'(1-) extrapolated", numeric);
    cert.diagnostics.emplace_back("h'(1-) relative gap", std::abs(numeric - closed) / closed);
  }

  const bool i_shape = a >= a2 && c - a <= c2 - a2;
  const bool ii_shape = a2 >= a && 2.0 < c2 - a2 && c2 - a2 <= c - a;
  double M = 0.0;
  if (ii_shape) {
    M = hypergeom_dilatation_constant(a, c, a2, c2);
    cert.diagnostics.emplace_back("M", M);
  }

  if (i_shape && 2.0 * b <= k) {
    cert.constant = 2.0;
    cert.status = CertStatus::certified;
    cert.hypothesis = "branch (i): a >= a2, c-a <= c2-a2 and 2b <= k";
  } else if (ii_shape) {
    cert.constant = M;
    cert.status = b * M <= k ? CertStatus::certified : CertStatus::violated;
    cert.hypothesis = "branch (ii): a2 >= a, 2 < c2-a2 <= c-a, bound b*M";
  } else if (a == a2 && c == c2) {
    cert.constant = 1.0;
    cert.status = b <= k ? CertStatus::certified : CertStatus::violated;
    cert.hypothesis = "identical parts, omega = b";
  } else {
    cert.hypothesis = i_shape ? "branch (i) shape holds but 2b > k" : "neither branch applies";
    return cert;
  }
  cert.diagnostics.emplace_back("b*constant", b * *cert.constant);
  detail::spot_check(cert, hypergeom_map(a, c, a2, c2, b), spot);
  return cert;
}

} // namespace cmh
