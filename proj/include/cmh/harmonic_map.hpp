#pragma once

// Harmonic maps f = h + c·conj(g) with h, g in T̃ (the class HT(c)), their
// dilatation and Jacobian, and the grid/theorem-based certifiers built on
// them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cmh/error.hpp"
#include "cmh/gen_func.hpp"
#include "cmh/grid.hpp"
#include "cmh/measure.hpp"
#include "cmh/moment_seq.hpp"

namespace cmh {

inline constexpr std::size_t kDefaultSeriesOrder = 64;
inline constexpr double kSeriesRadius = 0.95;
inline constexpr double kSingularDerivative = 1e-13;

/// An analytic part h(z) = z + a_1 z² + ... of a harmonic map, held either as
/// a representing measure, as the convolution h∗g (via ∫ h(tz)/t dν(t)), or as
/// truncated Taylor coefficients.
class AnalyticPart {
public:
  struct FromMeasure {
    ShiftedTFunction fn;
    bool operator==(const FromMeasure &) const = default;
  };
  /// Σ coeffs[n] z^{n+1}; evaluated only on |z| ≤ 0.95.
  struct FromSeries {
    std::vector<double> coeffs;
    bool operator==(const FromSeries &) const = default;
  };
  /// (h∗g)(z) = ∫ h(tz)/t dν(t) = z ∫ F_h(tz) dν(t).
  struct FromConvolution {
    ShiftedTFunction h;
    Measure nu;
    bool operator==(const FromConvolution &) const = default;
  };
  using Repr = std::variant<FromMeasure, FromSeries, FromConvolution>;

  static AnalyticPart measure(Measure mu) { return AnalyticPart(FromMeasure{ShiftedTFunction(std::move(mu))}); }
  static AnalyticPart shifted(ShiftedTFunction h) { return AnalyticPart(FromMeasure{std::move(h)}); }
  static AnalyticPart series(std::vector<double> coeffs) {
    if (coeffs.empty()) throw DomainError("series part needs at least one coefficient");
    return AnalyticPart(FromSeries{std::move(coeffs)});
  }
  static AnalyticPart convolution(ShiftedTFunction h, Measure nu) {
    if (!nu.is_normalized()) throw DomainError("convolution factor must be a probability measure");
    return AnalyticPart(FromConvolution{std::move(h), std::move(nu)});
  }

  const Repr &repr() const noexcept { return repr_; }

  /// Representing measure, when held directly.
  const Measure *representing_measure() const {
    if (const auto *m = std::get_if<FromMeasure>(&repr_)) return &m->fn.measure();
    return nullptr;
  }

  cplx value(cplx z) const { return derivative(z, 0); }

  cplx derivative(cplx z, int order) const {
    if (order < 0 || order > 3) throw DomainError("derivative order must be in 0..3");
    return std::visit([&](const auto &r) { return eval(r, z, order); }, repr_);
  }

  /// First `count` Taylor coefficients a_0.. of h(z)/z.
  std::vector<double> coefficients(std::size_t count) const {
    return std::visit([&](const auto &r) { return coeffs(r, count); }, repr_);
  }

  std::string kind() const {
    switch (repr_.index()) {
    case 0: return "measure";
    case 1: return "series";
    default: return "convolution";
    }
  }

  bool operator==(const AnalyticPart &) const = default;

private:
  explicit AnalyticPart(Repr r) : repr_(std::move(r)) {}

  static cplx eval(const FromMeasure &r, cplx z, int order) {
    return eval_shifted_derivative(r.fn, z, order);
  }

  static cplx eval(const FromSeries &r, cplx z, int order) {
    if (!(std::abs(z) <= kSeriesRadius))
      throw DomainError("series-represented part is only evaluated on |z| <= 0.95");
    // d^order/dz^order of Σ a_n z^{n+1}
    cplx sum = 0.0;
    for (std::size_t i = r.coeffs.size(); i-- > 0;) {
      const long p = static_cast<long>(i) + 1;
      if (p < order) {
        sum *= z;
        continue;
      }
      double falling = 1.0;
      for (int j = 0; j < order; ++j) falling *= static_cast<double>(p - j);
      sum = sum * z + falling * r.coeffs[i];
    }
    // Horner above produced Σ c_p z^{i}; shift to powers p - order.
    const int shift = 1 - order;
    if (shift >= 0) return sum * std::pow(z, shift);
    // order ≥ 2: the lowest surviving power is p = order, i.e. index order-1
    cplx tail = 0.0;
    for (std::size_t i = r.coeffs.size(); i-- > static_cast<std::size_t>(order - 1);) {
      const long p = static_cast<long>(i) + 1;
      double falling = 1.0;
      for (int j = 0; j < order; ++j) falling *= static_cast<double>(p - j);
      tail = tail * z + falling * r.coeffs[i];
    }
    return tail;
  }

  static cplx eval(const FromConvolution &r, cplx z, int order) {
    detail::check_slit(z);
    if (order == 0) {
      const cplx inner = detail::integrate_or_throw(
          r.nu, [&](double t) { return eval_T(r.h.base(), t * z); }, "convolution value");
      return z * inner;
    }
    // (h∗g)^{(m)}(z) = ∫ t^{m-1} h^{(m)}(tz) dν(t)
    return detail::integrate_or_throw(
        r.nu,
        [&](double t) {
          const double scale = order == 1 ? 1.0 : std::pow(t, order - 1);
          if (scale == 0.0) return cplx(0.0);
          return scale * eval_shifted_derivative(r.h, t * z, order);
        },
        "convolution derivative");
  }

  static std::vector<double> coeffs(const FromMeasure &r, std::size_t count) {
    return count == 0 ? std::vector<double>{} : moments(r.fn.measure(), count - 1);
  }
  static std::vector<double> coeffs(const FromSeries &r, std::size_t count) {
    std::vector<double> out(count, 0.0);
    std::copy_n(r.coeffs.begin(), std::min(count, r.coeffs.size()), out.begin());
    return out;
  }
  static std::vector<double> coeffs(const FromConvolution &r, std::size_t count) {
    if (count == 0) return {};
    const MomentSequence a(moments(r.h.measure(), count - 1));
    const MomentSequence b(moments(r.nu, count - 1));
    return hadamard(a, b).values();
  }

  Repr repr_;
};

/// f = h + c·conj(g) in HT(c). The theorems need real 0 ≤ c < 1; complex
/// |c| < 1 is accepted for the convolution algebra.
class HarmonicMap {
public:
  HarmonicMap(AnalyticPart h, AnalyticPart g, cplx c) : h_(std::move(h)), g_(std::move(g)), c_(c) {
    if (!(std::abs(c_) < 1.0)) throw DomainError("harmonic map requires |c| < 1");
  }

  static HarmonicMap from_measures(Measure mu, Measure nu, double c) {
    return HarmonicMap(AnalyticPart::measure(std::move(mu)), AnalyticPart::measure(std::move(nu)), c);
  }

  const AnalyticPart &h() const noexcept { return h_; }
  const AnalyticPart &g() const noexcept { return g_; }
  cplx c() const noexcept { return c_; }

  /// c as a real number in [0, 1); throws otherwise.
  double real_c(const char *who) const {
    if (c_.imag() != 0.0 || !(c_.real() >= 0.0))
      throw DomainError(std::string(who) + " requires real c in [0, 1)");
    return c_.real();
  }

private:
  AnalyticPart h_;
  AnalyticPart g_;
  cplx c_;
};

inline cplx eval_harmonic(const HarmonicMap &f, cplx z) {
  return f.h().value(z) + f.c() * std::conj(f.g().value(z));
}

namespace detail {

inline void require_disk(cplx z, const char *who) {
  if (!(std::abs(z) < 1.0)) throw DomainError(std::string(who) + " requires |z| < 1");
}

inline cplx checked_h_prime(const HarmonicMap &f, cplx z) {
  const cplx hp = f.h().derivative(z, 1);
  if (std::abs(hp) < kSingularDerivative) throw SingularDerivative("|h'(z)| below 1e-13");
  return hp;
}

} // namespace detail

/// Second complex dilatation conj(f_zbar)/f_z = conj(c)·g'(z)/h'(z).
inline cplx dilatation(const HarmonicMap &f, cplx z) {
  detail::require_disk(z, "dilatation");
  const cplx hp = detail::checked_h_prime(f, z);
  return std::conj(f.c()) * f.g().derivative(z, 1) / hp;
}

/// |h'(z)|² - |c|²|g'(z)|².
inline double jacobian(const HarmonicMap &f, cplx z) {
  detail::require_disk(z, "jacobian");
  const cplx hp = detail::checked_h_prime(f, z);
  return std::norm(hp) - std::norm(f.c()) * std::norm(f.g().derivative(z, 1));
}

// ---------------------------------------------------------------------------
// Certificates

enum class CertStatus { certified, violated, inconclusive };
enum class QCMethod { grid, thm1_6, thm1_7i, thm1_7ii, thm1_9, hypergeom };

inline const char *to_string(CertStatus s) {
  switch (s) {
  case CertStatus::certified: return "certified";
  case CertStatus::violated: return "violated";
  default: return "inconclusive";
  }
}

inline const char *to_string(QCMethod m) {
  switch (m) {
  case QCMethod::grid: return "grid";
  case QCMethod::thm1_6: return "thm1.6";
  case QCMethod::thm1_7i: return "thm1.7i";
  case QCMethod::thm1_7ii: return "thm1.7ii";
  case QCMethod::thm1_9: return "thm1.9";
  default: return "hypergeom";
  }
}

/// Evidence that |ω_f| ≤ k < 1. Grid certificates never claim the sup norm:
/// they report the largest sampled |ω_f| and the grid it came from. Analytic
/// certificates record the theorem constant and which hypothesis held; their
/// grid sup is a spot check.
struct QCCertificate {
  CertStatus status = CertStatus::inconclusive;
  QCMethod method = QCMethod::grid;
  double bound_k = 0.0;
  std::optional<double> sup_estimate;
  cplx argsup{};
  std::optional<DiskGrid> grid;
  std::size_t nodes = 0;
  std::size_t skipped = 0;
  std::optional<double> constant; // M, F(1⁻), 2, ... with |ω| ≤ c·constant
  std::string hypothesis;
  std::vector<std::pair<std::string, double>> diagnostics;

  bool holds() const noexcept { return status == CertStatus::certified; }
};

namespace detail {

inline void require_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("quasiconformality bound k must lie in [0, 1)");
}

struct GridSup {
  double sup = 0.0;
  cplx argsup{};
  std::size_t nodes = 0;
  std::size_t skipped = 0;
};

inline GridSup dilatation_sup(const HarmonicMap &f, const DiskGrid &grid) {
  GridSup out;
  for (const cplx &z : grid.nodes()) {
    double w;
    try {
      w = std::abs(dilatation(f, z));
    } catch (const SingularDerivative &) {
      ++out.skipped;
      continue;
    } catch (const Inconclusive &) {
      ++out.skipped;
      continue;
    }
    ++out.nodes;
    if (w > out.sup) {
      out.sup = w;
      out.argsup = z;
    }
  }
  return out;
}

/// Attaches a grid spot check to an analytic certificate; a sampled |ω| above
/// k contradicts the certificate and turns it into a violation.
inline void spot_check(QCCertificate &cert, const HarmonicMap &f, const DiskGrid &grid) {
  const GridSup s = dilatation_sup(f, grid);
  cert.sup_estimate = s.sup;
  cert.argsup = s.argsup;
  cert.grid = grid;
  cert.nodes = s.nodes;
  cert.skipped = s.skipped;
  if (cert.status == CertStatus::certified && s.sup > cert.bound_k + 1e-9) {
    cert.status = CertStatus::violated;
    cert.hypothesis += "; grid spot check exceeded k";
  }
}

} // namespace detail

/// sup |ω_f| over the grid; certified when it is ≤ k and no node was skipped.
inline QCCertificate certify_qc_grid(const HarmonicMap &f, double k, const DiskGrid &grid = {}) {
  detail::require_k(k);
  const detail::GridSup s = detail::dilatation_sup(f, grid);
  QCCertificate cert;
  cert.method = QCMethod::grid;
  cert.bound_k = k;
  cert.sup_estimate = s.sup;
  cert.argsup = s.argsup;
  cert.grid = grid;
  cert.nodes = s.nodes;
  cert.skipped = s.skipped;
  cert.hypothesis = "sampled sup |omega_f| <= k (grid evidence, not a sup-norm proof)";
  if (s.sup > k) cert.status = CertStatus::violated;
  else if (s.skipped > 0 || s.nodes == 0) cert.status = CertStatus::inconclusive;
  else cert.status = CertStatus::certified;
  return cert;
}

// ---------------------------------------------------------------------------
// |a + f(z)| ≥ a + f(-|z|) ≥ a + lim f(-r)

struct ModulusReport {
  double a = 0.0;
  double limit_value = 0.0; // lim_{r→1⁻} f(-r) = f(-1)
  std::size_t samples = 0;
  std::size_t pointwise_failures = 0;
  std::size_t chain_failures = 0;
  double worst_pointwise_margin = std::numeric_limits<double>::infinity();
  double worst_chain_margin = std::numeric_limits<double>::infinity();
  cplx worst_z{};
  bool holds = true;
};

inline ModulusReport modulus_lower_bound_check(const HarmonicMap &f, double a,
                                               const std::vector<cplx> &samples,
                                               double slack = 1e-9) {
  f.real_c("modulus_lower_bound_check");
  if (!(a >= 0.0)) throw DomainError("modulus_lower_bound_check requires a >= 0");
  ModulusReport r;
  r.a = a;
  // f is continuous on Λ ∋ -1, so the radial limit is a plain evaluation.
  r.limit_value = eval_harmonic(f, -1.0).real();
  for (const cplx &z : samples) {
    detail::require_disk(z, "modulus_lower_bound_check");
    const double lhs = std::abs(a + eval_harmonic(f, z));
    const double mid = a + eval_harmonic(f, -std::abs(z)).real();
    const double pointwise = lhs - mid;
    const double chain = mid - (a + r.limit_value);
    ++r.samples;
    if (pointwise < r.worst_pointwise_margin) {
      r.worst_pointwise_margin = pointwise;
      r.worst_z = z;
    }
    r.worst_chain_margin = std::min(r.worst_chain_margin, chain);
    if (pointwise < -slack) ++r.pointwise_failures;
    if (chain < -slack) ++r.chain_failures;
  }
  r.holds = r.pointwise_failures == 0 && r.chain_failures == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Sign of the partials y·∂Re f/∂y and y·∂Im f/∂x on H \ R

struct NonnegativityProbe {
  bool ok = true;
  std::string reason;
};

/// Sufficient structural test that μ - c·ν ≥ 0: every atom of ν is matched by
/// an atom of μ at the same point with weight ≥ c·w, and the density of μ
/// dominates c times that of ν on 1000 midpoints of [0,1].
inline NonnegativityProbe probe_difference_nonnegative(const Measure &mu, const Measure &nu, double c) {
  NonnegativityProbe p;
  for (const Atom &a : nu.atoms()) {
    const auto it = std::find_if(mu.atoms().begin(), mu.atoms().end(),
                                 [&](const Atom &b) { return b.t == a.t; });
    if (it == mu.atoms().end() || it->w < c * a.w * (1.0 - 1e-12)) {
      p.ok = false;
      p.reason = "atom of nu at t=" + std::to_string(a.t) + " is not dominated by an atom of mu";
      return p;
    }
  }
  constexpr int kSamples = 1000;
  for (int i = 0; i < kSamples; ++i) {
    const double t = (i + 0.5) / kSamples;
    const double m = mu.density_at(t);
    const double n = c * nu.density_at(t);
    if (m < n * (1.0 - 1e-12) - 1e-15) {
      p.ok = false;
      p.reason = "density of mu falls below c * density of nu at t=" + std::to_string(t);
      return p;
    }
  }
  return p;
}

struct PartialSignReport {
  std::size_t nodes = 0;
  std::size_t degenerate = 0;
  // (i) y·∂Re f/∂y < 0
  bool i_holds = true;
  std::size_t i_violations = 0;
  double i_max = -std::numeric_limits<double>::infinity();
  cplx i_worst{};
  // (ii) y·∂Im f/∂x > 0, only when μ - cν ≥ 0 passes the probe
  bool ii_checked = false;
  std::string ii_skip_reason;
  bool ii_holds = true;
  std::size_t ii_violations = 0;
  double ii_min = std::numeric_limits<double>::infinity();
  cplx ii_worst{};
};

/// Evaluates y·∂Re f/∂y = -∫ K d(μ + cν) and y·∂Im f/∂x = ∫ K d(μ - cν) with
/// K(t) = 2y²t(1-xt)/(1 - 2xt + t²|z|²)² at every grid node and its mirror
/// image below the real axis. Nodes where both integrals vanish identically
/// (all mass at t = 0) are reported as degenerate, not as violations.
inline PartialSignReport partial_sign_check(const HarmonicMap &f, const RectGrid &grid = {},
                                            double slack = 1e-9) {
  const double c = f.real_c("partial_sign_check");
  const Measure *mu = f.h().representing_measure();
  const Measure *nu = f.g().representing_measure();
  if (mu == nullptr || nu == nullptr)
    throw DomainError("partial_sign_check needs measure-represented parts");

  PartialSignReport r;
  const NonnegativityProbe probe = probe_difference_nonnegative(*mu, *nu, c);
  r.ii_checked = probe.ok;
  if (!probe.ok) r.ii_skip_reason = probe.reason;

  const bool all_at_zero = mu->concentrated_at_zero() && (c == 0.0 || nu->concentrated_at_zero());

  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  auto integral = [&](const Measure &m, double x, double y) {
    const double r2 = x * x + y * y;
    const Estimate<double> e = integrate(
        m,
        [=](double t) {
          const double d = 1.0 - 2.0 * x * t + t * t * r2;
          return 2.0 * y * y * t * (1.0 - x * t) / (d * d);
        },
        opts);
    if (!e.converged) throw Inconclusive("partial_sign_check: quadrature did not converge", e.error);
    return e.value;
  };

  for (const cplx &upper : grid.upper_nodes()) {
    for (const double sign : {1.0, -1.0}) {
      const double x = upper.real();
      const double y = sign * upper.imag();
      ++r.nodes;
      if (all_at_zero) {
        ++r.degenerate;
        continue;
      }
      const double A = integral(*mu, x, y);
      const double B = c == 0.0 ? 0.0 : integral(*nu, x, y);
      if (A == 0.0 && B == 0.0) {
        ++r.degenerate;
        continue;
      }
      const double di = -(A + c * B);
      if (di > r.i_max) {
        r.i_max = di;
        r.i_worst = {x, y};
      }
      if (di >= slack) ++r.i_violations;
      if (r.ii_checked) {
        const double dii = A - c * B;
        if (dii < r.ii_min) {
          r.ii_min = dii;
          r.ii_worst = {x, y};
        }
        if (dii <= -slack) ++r.ii_violations;
      }
    }
  }
  r.i_holds = r.i_violations == 0;
  r.ii_holds = r.ii_checked && r.ii_violations == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Algebra on HT(c)

/// f1 ∗ f2 = (h1∗h2) + c1c2·conj(g1∗g2), carried as truncated coefficients.
inline HarmonicMap convolve(const HarmonicMap &f1, const HarmonicMap &f2,
                            std::size_t order = kDefaultSeriesOrder) {
  if (order == 0) throw DomainError("convolution order must be positive");
  const MomentSequence h1(f1.h().coefficients(order));
  const MomentSequence h2(f2.h().coefficients(order));
  const MomentSequence g1(f1.g().coefficients(order));
  const MomentSequence g2(f2.g().coefficients(order));
  return HarmonicMap(AnalyticPart::series(hadamard(h1, h2).values()),
                     AnalyticPart::series(hadamard(g1, g2).values()), f1.c() * f2.c());
}

namespace detail {

inline AnalyticPart mix_parts(double s, const AnalyticPart &p1, const AnalyticPart &p2) {
  const Measure *m1 = p1.representing_measure();
  const Measure *m2 = p2.representing_measure();
  if (m1 != nullptr && m2 != nullptr) return AnalyticPart::measure(Measure::mix(s, *m1, *m2));
  const std::vector<double> a = p1.coefficients(kDefaultSeriesOrder);
  const std::vector<double> b = p2.coefficients(kDefaultSeriesOrder);
  std::vector<double> mixed(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) mixed[n] = s * a[n] + (1.0 - s) * b[n];
  return AnalyticPart::series(std::move(mixed));
}

} // namespace detail

/// s·f1 + (1-s)·f2 for maps sharing the same c.
inline HarmonicMap convex_combination(const HarmonicMap &f1, const HarmonicMap &f2, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("convex_combination: s must lie in [0,1]");
  if (f1.c() != f2.c()) throw DomainError("convex_combination: the maps have different c");
  return HarmonicMap(detail::mix_parts(s, f1.h(), f2.h()), detail::mix_parts(s, f1.g(), f2.g()),
                     f1.c());
}

/// f = h + c·conj(h∗g) with the co-part evaluated as ∫ h(tz)/t dν(t).
inline HarmonicMap construct_conv_map(const ShiftedTFunction &h, const ShiftedTFunction &g, double c) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("construct_conv_map requires 0 <= c < 1");
  return HarmonicMap(AnalyticPart::shifted(h), AnalyticPart::convolution(h, g.measure()), c);
}

// ---------------------------------------------------------------------------
// sup |h'(tz)/h'(z)| and its Harnack bound

struct RatioSupReport {
  double sup = 0.0;
  cplx z_at{};
  double t_at = 0.0;
  std::size_t nodes = 0;
  std::size_t skipped = 0;
};

inline RatioSupReport ratio_bound_sup(const AnalyticPart &h, const DiskGrid &grid = {}, int nt = 21) {
  if (nt < 2) throw DomainError("ratio_bound_sup: need at least two t samples");
  RatioSupReport r;
  for (const cplx &z : grid.nodes()) {
    cplx hz;
    try {
      hz = h.derivative(z, 1);
    } catch (const Inconclusive &) {
      ++r.skipped;
      continue;
    }
    if (std::abs(hz) < kSingularDerivative) {
      ++r.skipped;
      continue;
    }
    ++r.nodes;
    for (int j = 0; j < nt; ++j) {
      const double t = static_cast<double>(j) / (nt - 1);
      const double ratio = std::abs(h.derivative(t * z, 1) / hz);
      if (ratio > r.sup) {
        r.sup = ratio;
        r.z_at = z;
        r.t_at = t;
      }
    }
  }
  return r;
}

inline RatioSupReport ratio_bound_sup(const ShiftedTFunction &h, const DiskGrid &grid = {}, int nt = 21) {
  return ratio_bound_sup(AnalyticPart::shifted(h), grid, nt);
}

struct HarnackReport {
  bool hypothesis_holds = false; // Re[z h''/h'] > -m on every node
  double min_re = std::numeric_limits<double>::infinity();
  cplx argmin{};
  double bound = 0.0; // e^{2m}
  RatioSupReport ratio;
  bool ratio_within_bound = false;
};

inline HarnackReport harnack_ratio_bound(const AnalyticPart &h, double m, const DiskGrid &grid = {},
                                         int nt = 21, double slack = 1e-9) {
  if (!(m > 0.0)) throw DomainError("harnack_ratio_bound requires m > 0");
  HarnackReport r;
  r.bound = std::exp(2.0 * m);
  for (const cplx &z : grid.nodes()) {
    const cplx hp = h.derivative(z, 1);
    if (std::abs(hp) < kSingularDerivative) throw SingularDerivative("|h'(z)| below 1e-13");
    const double re = (z * h.derivative(z, 2) / hp).real();
    if (re < r.min_re) {
      r.min_re = re;
      r.argmin = z;
    }
  }
  r.hypothesis_holds = r.min_re > -m - slack;
  if (r.hypothesis_holds) {
    r.ratio = ratio_bound_sup(h, grid, nt);
    r.ratio_within_bound = r.ratio.sup <= r.bound;
  }
  return r;
}

inline HarnackReport harnack_ratio_bound(const ShiftedTFunction &h, double m, const DiskGrid &grid = {},
                                         int nt = 21) {
  return harnack_ratio_bound(AnalyticPart::shifted(h), m, grid, nt);
}

// ---------------------------------------------------------------------------
// φ(s)ψ(t) ≥ φ(t)ψ(s) for s ≤ t, and what it buys

struct DensityRatioOptions {
  int samples = 200;
  bool spot_check = true;
  RectGrid grid{};
};

struct DensityRatioReport {
  bool holds = true;
  std::size_t pairs = 0;
  double worst_value = 0.0; // most negative relative cross difference
  double worst_s = 0.0;
  double worst_t = 0.0;
  std::optional<TMembershipReport> quotient;            // g/h
  std::optional<TMembershipReport> derivative_quotient; // g'/h'
};

/// phi and psi are the (absolutely continuous) representing measures of h and g.
inline DensityRatioReport density_ratio_condition(const Measure &phi, const Measure &psi,
                                                  const DensityRatioOptions &opts = {}) {
  if (!phi.atoms().empty() || !psi.atoms().empty())
    throw DomainError("density_ratio_condition needs measures without atoms");
  if (opts.samples < 2) throw DomainError("density_ratio_condition needs at least two samples");

  const int n = opts.samples;
  std::vector<double> p(n), q(n), ts(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = (i + 0.5) / n;
    p[i] = phi.density_at(ts[i]);
    q[i] = psi.density_at(ts[i]);
  }

  DensityRatioReport r;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ++r.pairs;
      const double lhs = p[i] * q[j];
      const double rhs = p[j] * q[i];
      const double scale = std::abs(lhs) + std::abs(rhs);
      const double rel = scale > 0.0 ? (lhs - rhs) / scale : 0.0;
      if (rel < r.worst_value) {
        r.worst_value = rel;
        r.worst_s = ts[i];
        r.worst_t = ts[j];
      }
    }
  }
  r.holds = r.worst_value >= -1e-12;

  if (r.holds && opts.spot_check) {
    const TFunction H(phi);
    const TFunction G(psi);
    const ShiftedTFunction h(H);
    const ShiftedTFunction g(G);
    r.quotient = check_T_membership([&](cplx z) { return eval_T(G, z) / eval_T(H, z); }, opts.grid);
    r.derivative_quotient = check_T_membership(
        [&](cplx z) { return eval_shifted_derivative(g, z, 1) / eval_shifted_derivative(h, z, 1); },
        opts.grid);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Theorem-backed certificates

namespace detail {

/// F(1⁻) for F = g'/h'. Direct quotient when either one-sided limit is
/// finite, otherwise the quotient g''/h'' at x = 1 - 10^{-j}.
struct DerivativeQuotientLimit {
  ExtendedReal value;
  std::string route;
};

inline DerivativeQuotientLimit derivative_quotient_at_one(const ShiftedTFunction &h,
                                                          const ShiftedTFunction &g) {
  if (h.measure() == g.measure()) return {{1.0, false, true}, "identical parts"};
  const ExtendedReal hp = limit_at_one(h.measure(), 2);
  const ExtendedReal gp = limit_at_one(g.measure(), 2);
  if (!gp.infinite && !hp.infinite)
    return {{gp.value / hp.value, false, gp.reliable && hp.reliable}, "g'(1-)/h'(1-)"};
  if (!gp.infinite) return {{0.0, false, gp.reliable}, "h'(1-) infinite"};
  if (!hp.infinite) return {ExtendedReal::infinity(hp.reliable), "g'(1-) infinite"};

  // The quotient only has to settle to 1e-3; 1e-9 relative keeps the quadrature
  // within budget at 1 - 1e-7.
  QuadratureOptions opts;
  opts.rel_tol = 1e-9;
  auto second = [&opts](const Measure &mu, double x) {
    const Estimate<double> e =
        integrate(mu, [x](double t) { return 2.0 * t / std::pow(1.0 - t * x, 3); }, opts);
    if (!e.converged) throw Inconclusive("derivative quotient: quadrature did not converge", e.error);
    return e.value;
  };
  std::vector<double> q;
  for (int j = 2; j <= 7; ++j) {
    const double x = 1.0 - std::pow(10.0, -j);
    q.push_back(second(g.measure(), x) / second(h.measure(), x));
  }
  const double last = q.back();
  const double prev = q[q.size() - 2];
  if (std::abs(last - prev) <= 1e-3 * std::abs(last)) return {{last, false, false}, "g''/h'' (l'Hopital)"};
  return {ExtendedReal::infinity(false), "g''/h'' did not settle"};
}

} // namespace detail

/// |ω_f| ≤ c·F(1⁻) for F = g'/h' in T. Requires h = g, or absolutely
/// continuous parts satisfying the cross inequality of their densities.
inline QCCertificate certify_qc_via_limit(const ShiftedTFunction &h, const ShiftedTFunction &g, double c,
                                          double k, const DiskGrid &spot = {}) {
  detail::require_k(k);
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("certify_qc_via_limit requires 0 <= c < 1");
  QCCertificate cert;
  cert.method = QCMethod::thm1_9;
  cert.bound_k = k;

  if (!(h.measure() == g.measure())) {
    if (!h.measure().atoms().empty() || !g.measure().atoms().empty()) {
      cert.hypothesis = "parts have atoms; the density cross inequality cannot be tested";
      return cert;
    }
    DensityRatioOptions o;
    o.spot_check = false;
    const DensityRatioReport dr = density_ratio_condition(h.measure(), g.measure(), o);
    if (!dr.holds) {
      cert.hypothesis = "density cross inequality fails at s=" + std::to_string(dr.worst_s) +
                        ", t=" + std::to_string(dr.worst_t);
      return cert;
    }
  }

  const detail::DerivativeQuotientLimit lim = detail::derivative_quotient_at_one(h, g);
  if (lim.value.infinite) {
    cert.hypothesis = "F(1-) is numerically infinite (" + lim.route + ")";
    return cert;
  }
  cert.constant = lim.value.value;
  cert.diagnostics.emplace_back("F(1-)", lim.value.value);
  const double bound = c * lim.value.value;
  cert.diagnostics.emplace_back("c*F(1-)", bound);
  cert.hypothesis = "F = g'/h' in T, F(1-) via " + lim.route;
  cert.status = bound <= k ? CertStatus::certified : CertStatus::violated;
  detail::spot_check(cert, HarmonicMap(AnalyticPart::shifted(h), AnalyticPart::shifted(g), c), spot);
  return cert;
}

/// f = h + c·conj(h∗g) is k-quasiconformal when c·M ≤ k with
/// M ≥ sup |h'(tz)/h'(z)|. Without a supplied M the grid estimate is used,
/// which can only under-estimate the true sup.
inline QCCertificate certify_qc_conv(const ShiftedTFunction &h, const ShiftedTFunction &g, double c, double k,
                                     std::optional<double> M = std::nullopt, const DiskGrid &grid = {},
                                     int nt = 21) {
  detail::require_k(k);
  QCCertificate cert;
  cert.method = QCMethod::thm1_6;
  cert.bound_k = k;
  const HarmonicMap f = construct_conv_map(h, g, c);
  if (M) {
    if (!(*M >= 1.0)) throw DomainError("ratio bound M must be >= 1 (t = 1 gives ratio 1)");
    cert.constant = *M;
    cert.hypothesis = "supplied M bounds |h'(tz)/h'(z)|";
  } else {
    const RatioSupReport rs = ratio_bound_sup(h, grid, nt);
    cert.constant = rs.sup;
    cert.hypothesis = "M from grid sup of |h'(tz)/h'(z)| (evidence only)";
  }
  cert.diagnostics.emplace_back("M", *cert.constant);
  cert.diagnostics.emplace_back("c*M", c * *cert.constant);
  cert.status = c * *cert.constant <= k ? CertStatus::certified : CertStatus::violated;
  if (cert.status == CertStatus::violated && !M) cert.status = CertStatus::inconclusive;
  detail::spot_check(cert, f, grid);
  return cert;
}

} // namespace cmh
