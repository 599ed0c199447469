#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.14159265358979323846;
inline const cplx iu{0.0, 1.0};

inline Matrix expm(const Matrix& a) { return a.exp(); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline double hermiticity_residual(const Matrix& a) {
  return (a - a.adjoint()).norm() / std::max(1.0, a.norm());
}

inline double unitarity_residual(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * double(i) / double(n - 1);
  g.back() = b;
  return g;
}

// Classic fixed-step RK4 for y' = f(t, y) sampled on `grid`; returns y at every
// grid node. Each interval is subdivided into `substeps` RK4 steps.
inline std::vector<RealVector> integrate_ode(
    const std::function<RealVector(double, const RealVector&)>& f,
    RealVector y0, const std::vector<double>& grid, int substeps = 1) {
  std::vector<RealVector> out;
  out.reserve(grid.size());
  RealVector y = std::move(y0);
  out.push_back(y);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double t = grid[k];
    const double h = (grid[k + 1] - grid[k]) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const RealVector k1 = f(t, y);
      const RealVector k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
      const RealVector k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
      const RealVector k4 = f(t + h, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    out.push_back(y);
  }
  return out;
}

inline std::size_t lower_index(const std::vector<double>& grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t k = (it == grid.begin()) ? 0 : std::size_t(it - grid.begin()) - 1;
  if (k + 1 >= grid.size()) k = grid.size() - 2;
  return k;
}

// Cubic Hermite interpolation on a node pair (used for frame/functional tables).
template <typename T>
T hermite(double t0, double t1, const T& y0, const T& y1, const T& d0, const T& d1,
          double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * y0 + (h10 * h) * d0 + h01 * y1 + (h11 * h) * d1;
}

}  // namespace landau
