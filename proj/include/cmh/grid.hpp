#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cmh/error.hpp"

namespace cmh {

/// Polar sample of the unit disk: nr radii evenly spaced on [rmin, rmax]
/// times ntheta angles 2πj/ntheta (so θ = π, the negative axis, is hit for
/// even ntheta).
struct DiskGrid {
  double rmin = 0.1;
  double rmax = 0.95;
  int nr = 18;
  int ntheta = 64;

  void validate() const {
    if (!(rmin > 0.0 && rmin <= rmax && rmax < 1.0))
      throw DomainError("disk grid: need 0 < rmin <= rmax < 1");
    if (nr < 2 || ntheta < 2) throw DomainError("disk grid: counts must be >= 2");
  }

  double radius(int i) const { return rmin + (rmax - rmin) * i / (nr - 1); }

  std::vector<std::complex<double>> nodes() const {
    validate();
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(nr) * ntheta);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < ntheta; ++j)
        out.push_back(std::polar(radius(i), 2.0 * std::numbers::pi * j / ntheta));
    return out;
  }
};

/// Rectangle [x0, x1] × [y0, y1] in the upper half-plane, nx × ny nodes,
/// used for half-plane checks on Λ and on H = {Re z < 1}.
struct RectGrid {
  double x0 = -3.0;
  double x1 = 0.99;
  double y0 = 0.01;
  double y1 = 3.0;
  int nx = 100;
  int ny = 100;

  void validate() const {
    if (!(x0 < x1 && x1 < 1.0)) throw DomainError("rect grid: need x0 < x1 < 1");
    if (!(0.0 < y0 && y0 < y1)) throw DomainError("rect grid: need 0 < y0 < y1");
    if (nx < 2 || ny < 2) throw DomainError("rect grid: counts must be >= 2");
  }

  double x(int i) const { return x0 + (x1 - x0) * i / (nx - 1); }
  double y(int j) const { return y0 + (y1 - y0) * j / (ny - 1); }

  std::vector<std::complex<double>> upper_nodes() const {
    validate();
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) out.emplace_back(x(i), y(j));
    return out;
  }

  /// Real samples x0..x1 on the ray (-inf, 1).
  std::vector<double> real_samples() const {
    validate();
    std::vector<double> out;
    out.reserve(nx);
    for (int i = 0; i < nx; ++i) out.push_back(x(i));
    return out;
  }
};

struct GridSpec {
  DiskGrid disk;
  RectGrid rect;
  int nt = 21; // t-samples j/(nt-1) on [0,1]

  void validate() const {
    disk.validate();
    rect.validate();
    if (nt < 2) throw DomainError("grid: t-sample count must be >= 2");
  }
};

} // namespace cmh
