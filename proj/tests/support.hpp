#pragma once

// Random generators and independent oracles shared by the test programs.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cmh/cmh.hpp"

namespace cmh_test {

using cmh::cplx;

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Point of the disk with |z| ≤ rmax, uniform in radius and angle.
  cplx disk_point(double rmax) { return std::polar(uniform(0.0, rmax), uniform(0.0, 6.283185307179586)); }

  /// Probability measure with 0-3 atoms in [0, 1) and 0-2 named densities.
  cmh::Measure measure(bool allow_atoms = true) {
    std::vector<cmh::Atom> atoms;
    std::vector<cmh::WeightedDensity> dens;
    const int na = allow_atoms ? integer(0, 3) : 0;
    const int nd = integer(na == 0 ? 1 : 0, 2);
    for (int i = 0; i < na; ++i) atoms.push_back({integer(0, 4) == 0 ? 0.0 : uniform(0.0, 0.95), uniform(0.1, 1.0)});
    for (int i = 0; i < nd; ++i) {
      switch (integer(0, 2)) {
      case 0: dens.push_back({cmh::Density::lebesgue(), uniform(0.1, 1.0)}); break;
      case 1: {
        const double a = uniform(0.4, 3.0);
        dens.push_back({cmh::Density::beta(a, a + uniform(0.4, 3.0)), uniform(0.1, 1.0)});
        break;
      }
      default: dens.push_back({cmh::Density::loggamma(uniform(0.5, 4.0)), uniform(0.1, 1.0)}); break;
      }
    }
    double total = 0.0;
    for (const auto &a : atoms) total += a.w;
    for (const auto &d : dens) total += d.w;
    for (auto &a : atoms) a.w /= total;
    for (auto &d : dens) d.w /= total;
    return cmh::Measure(atoms, dens);
  }

  /// Moments a_0..a_N of w_0 δ_0 + w_1 δ_{1/2} + w_2 δ_1 with weights in
  /// eighths. Δ^k a_n then has at most N + 3 significant bits, a Leibniz
  /// term at most 2N + 16, so for N ≤ 12 both sides of the product rule are
  /// computed without rounding.
  std::vector<double> dyadic_cm_prefix(std::size_t N) {
    static constexpr double kNodes[3] = {0.0, 0.5, 1.0};
    double w[3] = {0, 0, 0};
    int left = 8;
    while (left > 0) {
      const int take = integer(1, left);
      w[integer(0, 2)] += take * 0.125;
      left -= take;
    }
    std::vector<double> a(N + 1, 0.0);
    for (std::size_t n = 0; n <= N; ++n)
      for (int i = 0; i < 3; ++i)
        if (w[i] != 0.0) a[n] += w[i] * std::pow(kNodes[i], static_cast<double>(n));
    return a;
  }

  /// Moments of a random measure with up to four atoms anywhere in [0,1].
  std::vector<double> atomic_cm_prefix(std::size_t N) {
    const int na = integer(1, 4);
    std::vector<double> t(na), w(na);
    double total = 0.0;
    for (int i = 0; i < na; ++i) {
      t[i] = uniform(0.0, 1.0);
      w[i] = uniform(0.1, 1.0);
      total += w[i];
    }
    std::vector<double> a(N + 1, 0.0);
    for (std::size_t n = 0; n <= N; ++n)
      for (int i = 0; i < na; ++i) a[n] += w[i] / total * std::pow(t[i], static_cast<double>(n));
    return a;
  }

private:
  std::mt19937_64 rng_;
};

/// Quadrature settings for oracles that difference moments up to 12 times.
inline cmh::QuadratureOptions tight() {
  cmh::QuadratureOptions o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-14;
  return o;
}

/// ∫₀¹ tⁿ(1-t)^k dt = n! k! / (n+k+1)!, by the product formula.
inline double beta_integral(unsigned n, unsigned k) {
  double v = 1.0 / (n + k + 1);
  for (unsigned j = 1; j <= k; ++j) v *= static_cast<double>(j) / (n + j);
  return v;
}

/// Σ_{n≥1} n^{-s} summed directly to 2e6 terms plus the midpoint tail integral.
inline double zeta_direct(double s) {
  const int N = 2000000;
  double sum = 0.0;
  for (int n = N; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  return sum + std::pow(N + 0.5, 1.0 - s) / (s - 1.0);
}

} // namespace cmh_test
