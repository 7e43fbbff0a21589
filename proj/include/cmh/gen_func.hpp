#pragma once

// Class T: F(z) = ∫ dμ(t)/(1-tz) for probability measures μ on [0,1],
// analytic on the slit plane Λ = C \ [1, +inf). Class T̃: h(z) = z F(z).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cmh/error.hpp"
#include "cmh/grid.hpp"
#include "cmh/measure.hpp"
#include "cmh/quadrature.hpp"

namespace cmh {

using cplx = std::complex<double>;

class TFunction {
public:
  explicit TFunction(Measure mu) : mu_(std::move(mu)) {
    if (!mu_.is_normalized())
      throw DomainError("class T requires a probability measure (mass " +
                        std::to_string(mu_.mass()) + ")");
  }
  const Measure &measure() const noexcept { return mu_; }
  bool operator==(const TFunction &) const = default;

private:
  Measure mu_;
};

/// z·F(z) for F in T.
class ShiftedTFunction {
public:
  explicit ShiftedTFunction(TFunction base) : base_(std::move(base)) {}
  explicit ShiftedTFunction(Measure mu) : base_(std::move(mu)) {}

  const TFunction &base() const noexcept { return base_; }
  const Measure &measure() const noexcept { return base_.measure(); }
  bool operator==(const ShiftedTFunction &) const = default;

private:
  TFunction base_;
};

/// Finite value or +inf, as for F(1⁻). `reliable` is false when divergence or
/// the value was inferred from the trend of truncated integrals rather than
/// observed directly.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;
  bool reliable = true;

  static ExtendedReal infinity(bool reliable) {
    return {std::numeric_limits<double>::infinity(), true, reliable};
  }
};

namespace detail {

inline void check_slit(const cplx &z) {
  if (z.real() >= 1.0 && std::abs(z.imag()) < 1e-12)
    throw SlitProximity("z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                        ") lies on or next to the cut [1, +inf)");
}

template <class F> cplx integrate_or_throw(const Measure &mu, F &&f, const char *what) {
  const Estimate<cplx> e = integrate(mu, std::forward<F>(f));
  if (!e.converged) throw Inconclusive(std::string(what) + ": quadrature did not converge", e.error);
  return e.value;
}

/// ∫ dμ(t)/(1-t)^power as an improper integral at t = 1.
///
/// Densities are integrated over [0, 1-δ] with δ halving from 1e-2 to 1e-8.
/// The value is accepted once an increment drops to quadrature noise,
/// otherwise the last increment ratio decides: ratio ≥ 0.999 (no contraction)
/// means +inf, anything smaller is extrapolated geometrically. Values above
/// 1e12 are treated as +inf outright.
inline ExtendedReal limit_at_one(const Measure &mu, int power) {
  double atoms = 0.0;
  for (const Atom &a : mu.atoms()) {
    if (a.t == 1.0) return ExtendedReal::infinity(true);
    atoms += a.w * std::pow(1.0 - a.t, -power);
  }
  if (mu.densities().empty()) return {atoms, false, true};

  auto kernel = [power](double, double u) { return std::pow(u, -power); };
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;

  constexpr double kDivergent = 1e12;
  std::vector<double> values;
  double noise = 0.0;
  for (double delta = 1e-2; delta >= 1e-8; delta *= 0.5) {
    double value = atoms;
    double error = 0.0;
    for (const WeightedDensity &d : mu.densities()) {
      const Estimate<double> e = integrate_density(d.density, kernel, opts, delta);
      value += d.w * e.value;
      error += d.w * e.error;
    }
    if (value > kDivergent) return ExtendedReal::infinity(true);
    noise = std::max(noise, 10.0 * error + 1e-14 * std::abs(value));
    if (!values.empty() && value - values.back() <= noise) return {value, false, true};
    values.push_back(value);
  }

  const std::size_t m = values.size();
  const double last = values[m - 1] - values[m - 2];
  const double prev = values[m - 2] - values[m - 3];
  const double ratio = last / prev;
  if (!(ratio < 0.999)) return ExtendedReal::infinity(false);
  const double tail = last * ratio / (1.0 - ratio);
  const double value = values.back() + tail;
  return {value, false, tail <= 1e-6 * std::max(1.0, value)};
}

} // namespace detail

/// F(z) = ∫ dμ(t)/(1-tz) on Λ.
inline cplx eval_T(const TFunction &F, cplx z) {
  detail::check_slit(z);
  return detail::integrate_or_throw(F.measure(), [z](double t) { return 1.0 / (1.0 - t * z); },
                                    "eval_T");
}

/// F^{(m)}(z) = ∫ m!·t^m/(1-tz)^{m+1} dμ(t).
inline cplx eval_T_derivative(const TFunction &F, cplx z, int order) {
  if (order < 0) throw DomainError("derivative order must be >= 0");
  if (order == 0) return eval_T(F, z);
  detail::check_slit(z);
  double factorial = 1.0;
  for (int i = 2; i <= order; ++i) factorial *= i;
  return detail::integrate_or_throw(
      F.measure(),
      [=](double t) { return factorial * std::pow(t, order) / std::pow(1.0 - t * z, order + 1); },
      "eval_T_derivative");
}

/// h(z) = z F(z).
inline cplx eval_shifted(const ShiftedTFunction &h, cplx z) { return z * eval_T(h.base(), z); }

/// h^{(m)}(z) = ∫ m!·t^{m-1}/(1-tz)^{m+1} dμ(t) for m ≥ 1, straight from the
/// differentiated kernel z/(1-tz).
inline cplx eval_shifted_derivative(const ShiftedTFunction &h, cplx z, int order) {
  if (order < 0) throw DomainError("derivative order must be >= 0");
  if (order == 0) return eval_shifted(h, z);
  detail::check_slit(z);
  double factorial = 1.0;
  for (int i = 2; i <= order; ++i) factorial *= i;
  if (order == 1)
    return detail::integrate_or_throw(
        h.measure(), [z](double t) { return 1.0 / ((1.0 - t * z) * (1.0 - t * z)); },
        "eval_shifted_derivative");
  return detail::integrate_or_throw(
      h.measure(),
      [=](double t) { return factorial * std::pow(t, order - 1) / std::pow(1.0 - t * z, order + 1); },
      "eval_shifted_derivative");
}

/// F(1⁻) = ∫ dμ(t)/(1-t) = Σ a_n, possibly +inf.
inline ExtendedReal limit_at_one(const TFunction &F) { return detail::limit_at_one(F.measure(), 1); }

/// ∫ dμ(t)/(1+t), the floor for Re F on the unit disk; always in [1/2, 1].
inline double lower_bound_re(const TFunction &F) {
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  const Estimate<double> e = integrate(F.measure(), [](double t) { return 1.0 / (1.0 + t); }, opts);
  if (!e.converged) throw Inconclusive("lower_bound_re: quadrature did not converge", e.error);
  return e.value;
}

/// Σ_{n<N} a_n zⁿ from a coefficient list.
inline cplx eval_series(const std::vector<double> &coeffs, cplx z) {
  cplx sum = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) sum = sum * z + *it;
  return sum;
}

/// Numerical evidence for membership in T via the three conditions
/// F(0) = 1, F ≥ 0 on real samples of (-inf, 1), Im F ≥ 0 on the upper
/// half-plane. Analyticity of a black-box F cannot be checked; the report is
/// evidence only.
struct TMembershipReport {
  double f0_error = 0.0;          // |F(0) - 1|
  double min_re_real = 0.0;       // min Re F(x) over real samples
  double max_abs_im_real = 0.0;   // max |Im F(x)| over real samples
  double min_im_upper = 0.0;      // min Im F(z) over upper half-plane samples
  cplx argmin_im_upper{};
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  bool consistent = false;
  std::string limitation = "analyticity on the slit plane is assumed, not checked";
};

inline TMembershipReport check_T_membership(const std::function<cplx(cplx)> &F,
                                            const RectGrid &grid = {}, double slack = 1e-9) {
  grid.validate();
  TMembershipReport r;
  r.min_re_real = std::numeric_limits<double>::infinity();
  r.min_im_upper = std::numeric_limits<double>::infinity();

  auto try_eval = [&](cplx z, cplx &out) {
    try {
      out = F(z);
    } catch (const Error &) {
      ++r.skipped;
      return false;
    }
    if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
      ++r.skipped;
      return false;
    }
    ++r.evaluated;
    return true;
  };

  cplx value;
  bool f0_ok = try_eval(0.0, value);
  r.f0_error = f0_ok ? std::abs(value - 1.0) : std::numeric_limits<double>::infinity();

  for (double x : grid.real_samples()) {
    if (!try_eval(x, value)) continue;
    r.min_re_real = std::min(r.min_re_real, value.real());
    r.max_abs_im_real = std::max(r.max_abs_im_real, std::abs(value.imag()) / (1.0 + std::abs(value)));
  }
  for (const cplx &z : grid.upper_nodes()) {
    if (!try_eval(z, value)) continue;
    if (value.imag() < r.min_im_upper) {
      r.min_im_upper = value.imag();
      r.argmin_im_upper = z;
    }
  }
  r.consistent = f0_ok && r.f0_error <= slack && r.min_re_real >= -slack &&
                 r.max_abs_im_real <= slack && r.min_im_upper >= -slack;
  return r;
}

} // namespace cmh
