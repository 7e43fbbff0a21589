#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

namespace cmh {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  std::size_t max_panels = 4000;
};

/// Value with an a-posteriori error estimate. `converged` is false when the
/// requested tolerance was not reached within the panel budget.
template <class T> struct Estimate {
  T value{};
  double error = 0.0;
  bool converged = true;
};

/// One initial interval of an adaptive integration. `id` is handed back to the
/// integrand so that a single global error budget can span several changes of
/// variables.
struct Segment {
  double lo;
  double hi;
  int id = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double> &x) { return std::abs(x); }

template <class T> struct Panel {
  double lo;
  double hi;
  int id;
  T value;
  double error;
  double resabs;

  bool operator<(const Panel &o) const { return error < o.error; }
};

template <class T, class F> Panel<T> kronrod15(F &f, double lo, double hi, int id) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const T fc = f(id, center);
  T gauss = fc * kWg[3];
  T kronrod = fc * kWgk[7];
  double resabs = magnitude(fc) * kWgk[7];
  T fv1[7];
  T fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(id, center - dx);
    fv2[j] = f(id, center + dx);
    const T sum = fv1[j] + fv2[j];
    kronrod += kWgk[j] * sum;
    resabs += kWgk[j] * (magnitude(fv1[j]) + magnitude(fv2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }

  const T mean = kronrod * 0.5;
  double resasc = kWgk[7] * magnitude(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (magnitude(fv1[j] - mean) + magnitude(fv2[j] - mean));

  const double width = std::abs(half);
  resabs *= width;
  resasc *= width;
  double err = magnitude((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);

  return {lo, hi, id, kronrod * half, err, resabs};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) over a set of initial segments.
/// The integrand is called as f(segment_id, x).
template <class F>
auto integrate_segments(F &&f, std::span<const Segment> segments,
                        const QuadratureOptions &opts = {}) {
  using T = std::decay_t<std::invoke_result_t<F &, int, double>>;
  using PanelT = detail::Panel<T>;

  std::priority_queue<PanelT> heap;
  T total{};
  double total_err = 0.0;
  double total_abs = 0.0;
  for (const auto &s : segments) {
    if (!(s.hi > s.lo)) continue;
    PanelT p = detail::kronrod15<T>(f, s.lo, s.hi, s.id);
    total += p.value;
    total_err += p.error;
    total_abs += p.resabs;
    heap.push(p);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto satisfied = [&] {
    const double target = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total));
    return total_err <= target || total_err <= 50.0 * eps * total_abs;
  };

  // The largest remaining error sits at its roundoff floor: bisection cannot improve it.
  bool roundoff_limited = false;
  std::size_t panels = heap.size();
  while (!heap.empty() && !satisfied() && panels < opts.max_panels) {
    PanelT worst = heap.top();
    if (worst.error <= 50.0 * eps * worst.resabs * (1.0 + 1e-9)) {
      roundoff_limited = true;
      break;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break; // cannot bisect further
    heap.pop();
    PanelT left = detail::kronrod15<T>(f, worst.lo, mid, worst.id);
    PanelT right = detail::kronrod15<T>(f, mid, worst.hi, worst.id);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.resabs + right.resabs - worst.resabs;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum to shed the drift of the running updates.
  T sum{};
  double err = 0.0;
  double abs_sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    abs_sum += heap.top().resabs;
    heap.pop();
  }
  total = sum;
  total_err = err;
  total_abs = abs_sum;
  return Estimate<T>{total, total_err, roundoff_limited || satisfied()};
}

/// Adaptive integral of f over [lo, hi].
template <class F>
auto integrate_interval(F &&f, double lo, double hi, const QuadratureOptions &opts = {}) {
  auto wrapped = [&f](int, double x) { return f(x); };
  const Segment seg{lo, hi, 0};
  return integrate_segments(wrapped, std::span<const Segment>(&seg, 1), opts);
}

} // namespace cmh
