#pragma once

// Independent test oracles: finite differences, Richardson-extrapolated
// quadrature, polygon shoelace area. Kept free of the library's own
// integration helpers on purpose.

#include <cmath>
#include <functional>
#include <vector>

#include <landau/core.hpp>

namespace oracle {

inline landau::Vec3 fd_derivative(const std::function<landau::Vec3(double)>& f, double t,
                                  double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2 * h);
}

// Composite trapezoid + Richardson extrapolation (Romberg, 4 levels).
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      int base_n = 512) {
  auto trap = [&](int n) {
    double s = 0.5 * (f(a) + f(b));
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
  };
  const int levels = 5;
  std::vector<double> r(levels);
  for (int k = 0; k < levels; ++k) r[k] = trap(base_n << k);
  double f4 = 4;
  for (int m = 1; m < levels; ++m) {
    for (int k = levels - 1; k >= m; --k) r[k] = (f4 * r[k] - r[k - 1]) / (f4 - 1);
    f4 *= 4;
  }
  return r[levels - 1];
}

// Signed area of the polygon (0,0) -> p_0 -> ... -> p_{n-1} -> (0,0).
inline double shoelace_from_origin(const std::vector<std::pair<double, double>>& p) {
  double a = 0;
  double x0 = 0, y0 = 0;
  for (const auto& [x1, y1] : p) {
    a += x0 * y1 - x1 * y0;
    x0 = x1;
    y0 = y1;
  }
  a += x0 * 0.0 - 0.0 * y0;
  return 0.5 * a;
}

}  // namespace oracle
