#pragma once

// Borel probability measures on [0,1]: finitely many atoms plus a weighted sum
// of named densities. Everything that integrates "dμ(t)" goes through
// cmh::integrate below.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cmh/error.hpp"
#include "cmh/quadrature.hpp"
#include "cmh/special_fn.hpp"

namespace cmh {

struct Lebesgue {
  bool operator==(const Lebesgue &) const = default;
};

/// Γ(c)/(Γ(a)Γ(c-a)) t^{a-1}(1-t)^{c-a-1}, c > a > 0.
struct BetaDensity {
  double a;
  double c;
  bool operator==(const BetaDensity &) const = default;
};

/// (-log t)^{α-1}/Γ(α), α > 0. Represents Li_α(z)/z.
struct LogGammaDensity {
  double alpha;
  bool operator==(const LogGammaDensity &) const = default;
};

/// Piecewise-linear density through (grid[i], values[i]), zero outside the
/// grid, renormalized to unit mass.
struct SampledDensity {
  std::vector<double> grid;
  std::vector<double> values;
  bool operator==(const SampledDensity &) const = default;
};

class Density {
public:
  using Family = std::variant<Lebesgue, BetaDensity, LogGammaDensity, SampledDensity>;

  static Density lebesgue() { return Density(Lebesgue{}); }

  static Density beta(double a, double c) {
    if (!(a > 0.0 && c > a && std::isfinite(c)))
      throw DomainError("beta density: requires c > a > 0");
    Density d(BetaDensity{a, c});
    d.norm_ = std::exp(log_gamma(c) - log_gamma(a) - log_gamma(c - a));
    d.verify_unit_mass();
    return d;
  }

  static Density loggamma(double alpha) {
    if (!(alpha > 0.0 && std::isfinite(alpha)))
      throw DomainError("loggamma density: requires alpha > 0");
    Density d(LogGammaDensity{alpha});
    d.norm_ = std::exp(-log_gamma(alpha));
    d.verify_unit_mass();
    return d;
  }

  static Density sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size())
      throw DomainError("sampled density: need >= 2 grid points and matching values");
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
        throw DomainError("sampled density: grid must lie in [0,1]");
      if (!(values[i] >= 0.0 && std::isfinite(values[i])))
        throw DomainError("sampled density: values must be finite and non-negative");
      if (i > 0) {
        if (!(grid[i] > grid[i - 1])) throw DomainError("sampled density: grid must increase");
        mass += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
      }
    }
    if (!(mass > 0.0)) throw DomainError("sampled density: zero mass");
    for (double &v : values) v /= mass;
    return Density(SampledDensity{std::move(grid), std::move(values)});
  }

  const Family &family() const noexcept { return family_; }

  /// Density at t, with u = 1 - t supplied separately so that points close to
  /// 1 keep their relative accuracy.
  double pdf(double t, double u) const {
    return std::visit([&](const auto &f) { return pdf_impl(f, t, u); }, family_);
  }
  double pdf(double t) const { return pdf(t, 1.0 - t); }

  /// Initial quadrature segments. The integrand is evaluated via map().
  /// `cut` > 0 restricts the support to [0, 1 - cut].
  std::vector<Segment> segments(double cut = 0.0) const {
    std::vector<Segment> out;
    if (const auto *s = std::get_if<SampledDensity>(&family_)) {
      for (std::size_t i = 0; i + 1 < s->grid.size(); ++i) {
        const double hi = std::min(s->grid[i + 1], 1.0 - cut);
        if (hi > s->grid[i]) out.push_back({s->grid[i], hi, static_cast<int>(i)});
      }
      return out;
    }
    out.push_back({0.0, 1.0, kLeft});
    const double s_min = cut > 0.0 ? std::pow(2.0 * cut, 1.0 / right_power()) : 0.0;
    out.push_back({s_min, 1.0, kRight});
    return out;
  }

  /// Maps a segment coordinate to (t, 1-t, dt/ds).
  struct Point {
    double t;
    double u;
    double jacobian;
  };
  Point map(int id, double s) const {
    if (std::holds_alternative<SampledDensity>(family_)) return {s, 1.0 - s, 1.0};
    if (id == kLeft) {
      const int p = left_power();
      const double t = 0.5 * std::pow(s, p);
      return {t, 1.0 - t, 0.5 * p * std::pow(s, p - 1)};
    }
    const int q = right_power();
    const double u = 0.5 * std::pow(s, q);
    return {1.0 - u, u, 0.5 * q * std::pow(s, q - 1)};
  }

  std::string describe() const {
    return std::visit(
        [](const auto &f) -> std::string {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Lebesgue>) return "lebesgue";
          else if constexpr (std::is_same_v<F, BetaDensity>)
            return "beta(a=" + std::to_string(f.a) + ", c=" + std::to_string(f.c) + ")";
          else if constexpr (std::is_same_v<F, LogGammaDensity>)
            return "loggamma(alpha=" + std::to_string(f.alpha) + ")";
          else return "sampled(" + std::to_string(f.grid.size()) + " knots)";
        },
        family_);
  }

  bool operator==(const Density &o) const { return family_ == o.family_; }

private:
  static constexpr int kLeft = 0;
  static constexpr int kRight = 1;

  explicit Density(Family f) : family_(std::move(f)) {}

  // Substitution power that turns t^e (e > -1) into an integrand vanishing at
  // least linearly in the new variable.
  static int regularizing_power(double e) {
    if (e >= 1.0 || (e >= 0.0 && std::floor(e) == e)) return 1;
    return static_cast<int>(std::ceil(2.0 / (1.0 + e)));
  }

  int left_power() const {
    if (const auto *b = std::get_if<BetaDensity>(&family_)) return regularizing_power(b->a - 1.0);
    if (const auto *g = std::get_if<LogGammaDensity>(&family_)) return g->alpha == 1.0 ? 1 : 2;
    return 1;
  }
  int right_power() const {
    if (const auto *b = std::get_if<BetaDensity>(&family_))
      return regularizing_power(b->c - b->a - 1.0);
    if (const auto *g = std::get_if<LogGammaDensity>(&family_))
      return regularizing_power(g->alpha - 1.0);
    return 1;
  }

  double pdf_impl(const Lebesgue &, double t, double) const {
    return (t >= 0.0 && t <= 1.0) ? 1.0 : 0.0;
  }
  double pdf_impl(const BetaDensity &b, double t, double u) const {
    if (t < 0.0 || u < 0.0) return 0.0;
    return norm_ * std::pow(t, b.a - 1.0) * std::pow(u, b.c - b.a - 1.0);
  }
  double pdf_impl(const LogGammaDensity &g, double t, double u) const {
    if (t < 0.0 || u < 0.0) return 0.0;
    const double minus_log_t = t > 0.5 ? -std::log1p(-u) : -std::log(t);
    return norm_ * std::pow(minus_log_t, g.alpha - 1.0);
  }
  double pdf_impl(const SampledDensity &s, double t, double) const {
    if (t < s.grid.front() || t > s.grid.back()) return 0.0;
    const auto it = std::upper_bound(s.grid.begin(), s.grid.end(), t);
    if (it == s.grid.end()) return s.values.back();
    const std::size_t i = static_cast<std::size_t>(it - s.grid.begin()) - 1;
    const double w = (t - s.grid[i]) / (s.grid[i + 1] - s.grid[i]);
    return (1.0 - w) * s.values[i] + w * s.values[i + 1];
  }

  void verify_unit_mass() const;

  Family family_;
  double norm_ = 1.0;
};

struct Atom {
  double t;
  double w;
  bool operator==(const Atom &) const = default;
};

struct WeightedDensity {
  Density density;
  double w;
  bool operator==(const WeightedDensity &) const = default;
};

/// Positive Borel measure on [0,1]. Atoms are kept sorted by location with
/// coincident locations merged; equal density families are merged too, so
/// operator== is structural equality.
class Measure {
public:
  Measure(std::vector<Atom> atoms, std::vector<WeightedDensity> densities) {
    for (const Atom &a : atoms) {
      if (!(a.t >= 0.0 && a.t <= 1.0)) throw DomainError("atom location outside [0,1]");
      if (!(a.w > 0.0 && std::isfinite(a.w))) throw DomainError("atom weight must be positive");
    }
    for (const WeightedDensity &d : densities)
      if (!(d.w > 0.0 && std::isfinite(d.w))) throw DomainError("density weight must be positive");

    std::sort(atoms.begin(), atoms.end(), [](const Atom &x, const Atom &y) { return x.t < y.t; });
    for (const Atom &a : atoms) {
      if (!atoms_.empty() && atoms_.back().t == a.t) atoms_.back().w += a.w;
      else atoms_.push_back(a);
    }
    for (WeightedDensity &d : densities) {
      auto same = std::find_if(densities_.begin(), densities_.end(),
                               [&](const WeightedDensity &x) { return x.density == d.density; });
      if (same != densities_.end()) same->w += d.w;
      else densities_.push_back(std::move(d));
    }
    if (atoms_.empty() && densities_.empty()) throw DomainError("measure has no mass");
  }

  static Measure dirac(double t) { return Measure({{t, 1.0}}, {}); }
  static Measure lebesgue() { return Measure({}, {{Density::lebesgue(), 1.0}}); }
  static Measure beta(double a, double c) { return Measure({}, {{Density::beta(a, c), 1.0}}); }
  static Measure loggamma(double alpha) {
    return Measure({}, {{Density::loggamma(alpha), 1.0}});
  }
  static Measure sampled(std::vector<double> grid, std::vector<double> values) {
    return Measure({}, {{Density::sampled(std::move(grid), std::move(values)), 1.0}});
  }

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  const std::vector<WeightedDensity> &densities() const noexcept { return densities_; }

  double mass() const {
    double m = 0.0;
    for (const Atom &a : atoms_) m += a.w;
    for (const WeightedDensity &d : densities_) m += d.w;
    return m;
  }
  bool is_normalized() const { return std::abs(mass() - 1.0) <= 1e-12; }

  /// Absolutely continuous part Σ w_i φ_i(t).
  double density_at(double t, double u) const {
    double v = 0.0;
    for (const WeightedDensity &d : densities_) v += d.w * d.density.pdf(t, u);
    return v;
  }
  double density_at(double t) const { return density_at(t, 1.0 - t); }

  /// True when all mass sits at t = 0 (every kernel with a factor t vanishes).
  bool concentrated_at_zero() const {
    return densities_.empty() && atoms_.size() == 1 && atoms_.front().t == 0.0;
  }

  Measure scaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("measure scale factor must be positive");
    std::vector<Atom> atoms = atoms_;
    std::vector<WeightedDensity> dens = densities_;
    for (Atom &a : atoms) a.w *= factor;
    for (WeightedDensity &d : dens) d.w *= factor;
    return Measure(std::move(atoms), std::move(dens));
  }

  /// s·first + (1-s)·second, dropping whichever side has zero weight.
  static Measure mix(double s, const Measure &first, const Measure &second) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("mixing weight must lie in [0,1]");
    if (s == 1.0) return first;
    if (s == 0.0) return second;
    std::vector<Atom> atoms;
    std::vector<WeightedDensity> dens;
    for (const Atom &a : first.atoms_) atoms.push_back({a.t, s * a.w});
    for (const Atom &a : second.atoms_) atoms.push_back({a.t, (1.0 - s) * a.w});
    for (const WeightedDensity &d : first.densities_) dens.push_back({d.density, s * d.w});
    for (const WeightedDensity &d : second.densities_) dens.push_back({d.density, (1.0 - s) * d.w});
    return Measure(std::move(atoms), std::move(dens));
  }

  bool operator==(const Measure &) const = default;

private:
  std::vector<Atom> atoms_;
  std::vector<WeightedDensity> densities_;
};

/// Named family by tag: dirac (t), lebesgue, beta (a, c), loggamma (alpha).
/// beta(1, 2) and loggamma(1) have the constant density and come back as
/// lebesgue, so they compare equal to it.
inline Measure make_named(std::string_view family, const std::map<std::string, double, std::less<>> &params = {}) {
  auto param = [&](std::string_view key) {
    const auto it = params.find(key);
    if (it == params.end())
      throw DomainError(std::string(family) + ": missing parameter " + std::string(key));
    return it->second;
  };
  if (family == "dirac") return Measure::dirac(param("t"));
  if (family == "lebesgue") return Measure::lebesgue();
  if (family == "beta") {
    const double a = param("a"), c = param("c");
    if (a == 1.0 && c == 2.0) return Measure::lebesgue();
    return Measure::beta(a, c);
  }
  if (family == "loggamma") {
    const double alpha = param("alpha");
    if (alpha == 1.0) return Measure::lebesgue();
    return Measure::loggamma(alpha);
  }
  throw DomainError("unknown measure family " + std::string(family));
}

namespace detail {

template <class F> auto call_integrand(F &f, double t, double u) {
  if constexpr (std::is_invocable_v<F &, double, double>) return f(t, u);
  else return f(t);
}

template <class F>
using integrand_result_t =
    std::decay_t<decltype(call_integrand(std::declval<F &>(), 0.0, 1.0))>;

/// ∫ f φ over [0, 1 - cut] for a single density φ.
template <class F>
auto integrate_density(const Density &d, F &f, const QuadratureOptions &opts, double cut = 0.0) {
  using T = integrand_result_t<F>;
  auto integrand = [&](int id, double s) -> T {
    const Density::Point p = d.map(id, s);
    const double weight = d.pdf(p.t, p.u) * p.jacobian;
    if (weight == 0.0) return T{};
    const T value = call_integrand(f, p.t, p.u) * weight;
    // Underflow of t next to an integrable singularity: the exact product is 0.
    if (!std::isfinite(std::abs(value)) && (p.t == 0.0 || p.u == 0.0)) return T{};
    return value;
  };
  const std::vector<Segment> segs = d.segments(cut);
  return integrate_segments(integrand, std::span<const Segment>(segs), opts);
}

} // namespace detail

inline void Density::verify_unit_mass() const {
  auto one = [](double) { return 1.0; };
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  const Estimate<double> m = detail::integrate_density(*this, one, opts);
  if (!(std::abs(m.value - 1.0) <= 1e-10))
    throw DomainError("density " + describe() + " does not integrate to 1 (got " +
                      std::to_string(m.value) + ")");
}

/// ∫ f(t) dμ(t) (f may also take (t, 1-t)). Atoms are summed exactly; each
/// density goes through adaptive Gauss-Kronrod with endpoint substitution.
/// `cut` > 0 restricts the integral to [0, 1 - cut] (atoms included).
template <class F>
auto integrate(const Measure &mu, F &&f, const QuadratureOptions &opts = {}, double cut = 0.0) {
  using T = detail::integrand_result_t<F>;
  Estimate<T> out;
  for (const Atom &a : mu.atoms()) {
    if (cut > 0.0 && a.t > 1.0 - cut) continue;
    out.value += a.w * detail::call_integrand(f, a.t, 1.0 - a.t);
  }
  for (const WeightedDensity &d : mu.densities()) {
    const auto part = detail::integrate_density(d.density, f, opts, cut);
    out.value += d.w * part.value;
    out.error += d.w * part.error;
    out.converged = out.converged && part.converged;
  }
  return out;
}

/// a_n = ∫ tⁿ dμ(t).
inline double moment(const Measure &mu, std::size_t n, const QuadratureOptions &opts = {}) {
  const double power = static_cast<double>(n);
  auto tn = [power](double t) { return std::pow(t, power); };
  const Estimate<double> e = integrate(mu, tn, opts);
  if (!e.converged) throw Inconclusive("moment: quadrature did not converge", e.error);
  return std::clamp(e.value, 0.0, mu.mass());
}

/// a_0..a_last.
inline std::vector<double> moments(const Measure &mu, std::size_t last,
                                   const QuadratureOptions &opts = {}) {
  std::vector<double> out;
  out.reserve(last + 1);
  for (std::size_t n = 0; n <= last; ++n) out.push_back(moment(mu, n, opts));
  return out;
}

} // namespace cmh
