#pragma once

#include <array>
#include <cstdlib>

#include "core.hpp"

namespace landau {

// V(u) = Σ_{k=2..4} v_k u^k, stored as v[0..4] with v[0] = v[1] = 0.
struct PhysicalParams {
  double m = 1.0;
  double e = -1.0;
  double B = 1.0;
  double L = 0.0;
  double epsilon = 0.01;
  std::array<double, 5> v{0, 0, 0.5, 0, 0};

  double omega() const { return -e * B / m; }
  double l_B() const { return 1.0 / std::sqrt(-2.0 * e * B); }
  double axial_gap() const { return std::sqrt(2.0 * v[2] / m); }
  double T1() const { return 1.0 / epsilon; }
  double T2() const { return 2.0 * pi / omega(); }
  double T3() const { return 1.0 / axial_gap(); }

  void validate() const {
    if (m <= 0) throw std::invalid_argument("PhysicalParams: m must be positive");
    if (e >= 0) throw std::invalid_argument("PhysicalParams: e must be negative");
    if (B <= 0) throw std::invalid_argument("PhysicalParams: B must be positive");
    if (L < 0) throw std::invalid_argument("PhysicalParams: L must be nonnegative");
    if (epsilon <= 0) throw std::invalid_argument("PhysicalParams: epsilon must be positive");
    if (v[2] <= 0) throw std::invalid_argument("PhysicalParams: v2 must be positive");
    if (v[0] != 0 || v[1] != 0)
      throw std::invalid_argument("PhysicalParams: potential starts at u^2");
  }
};

struct BasisConfig {
  int Na = 6, Nb = 6, Nc = 8;
  int buffer = 1;
  double axial_ref_freq = 0;  // 0: use the harmonic frequency sqrt(2 v2 / m)

  long dim() const { return long(Na + 1) * (Nb + 1) * (Nc + 1); }

  void validate() const {
    if (Na < 0 || Nb < 0 || Nc < 0)
      throw std::invalid_argument("BasisConfig: negative cutoff");
    if (dim() < 8) throw std::invalid_argument("BasisConfig: total dimension below 8");
    if (buffer < 1) throw std::invalid_argument("BasisConfig: buffer must be >= 1");
    int live_min = INT32_MAX;
    for (int n : {Na, Nb, Nc})
      if (n > 0) live_min = std::min(live_min, n);
    if (live_min != INT32_MAX && buffer >= live_min)
      throw std::invalid_argument("BasisConfig: buffer must be below every live cutoff");
    if (axial_ref_freq < 0)
      throw std::invalid_argument("BasisConfig: axial_ref_freq must be nonnegative");
  }
};

inline long dimension_cap() {
  if (const char* s = std::getenv("LANDAU_FACTOR_DIM_CAP")) {
    const long v = std::atol(s);
    if (v > 0) return v;
  }
  return 20000;
}

namespace detail {

inline Matrix ladder(int N) {
  Matrix a = Matrix::Zero(N + 1, N + 1);
  for (int n = 1; n <= N; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

}  // namespace detail

// All elementary operators in the tensor basis |n_a> ⊗ |n_b> ⊗ |n_c>.
// Full-space index = (ia*(Nb+1) + ib)*(Nc+1) + ic, i.e. full = kron(landau, axial).
struct OperatorSet {
  PhysicalParams params;
  BasisConfig basis;
  int dim_landau = 0, dim_axial = 0, dim = 0;
  double axial_freq = 0;

  // Landau sector, dimension (Na+1)(Nb+1)
  Matrix aL, bL, pi1L, pi2L, eta1L, eta2L, x1L, x2L, p1L, p2L, A1L, A2L, hbL;
  // axial sector, dimension (Nc+1): xiA = x3 − L
  Matrix cA, xiA, x3A, p3A;
  // full space
  Matrix a, b, c, x1, x2, x3, p1, p2, p3, pi1, pi2, eta1, eta2, A1, A2, J1, J2, J3;
  Matrix interior;           // diagonal 0/1 projector
  Matrix interior_landau, interior_axial;

  Matrix lift_landau(const Matrix& mL) const {
    return kron(mL, Matrix::Identity(dim_axial, dim_axial));
  }
  Matrix lift_axial(const Matrix& mA) const {
    return kron(Matrix::Identity(dim_landau, dim_landau), mA);
  }
  Matrix lift(const Matrix& mL, const Matrix& mA) const { return kron(mL, mA); }
};

inline OperatorSet build_operator_set(const PhysicalParams& params, const BasisConfig& basis) {
  params.validate();
  basis.validate();
  if (basis.dim() > dimension_cap())
    throw std::runtime_error("build_operator_set: dimension " + std::to_string(basis.dim()) +
                             " above cap " + std::to_string(dimension_cap()));

  OperatorSet ops;
  ops.params = params;
  ops.basis = basis;
  ops.dim_landau = (basis.Na + 1) * (basis.Nb + 1);
  ops.dim_axial = basis.Nc + 1;
  ops.dim = ops.dim_landau * ops.dim_axial;
  ops.axial_freq = basis.axial_ref_freq > 0 ? basis.axial_ref_freq
                                            : std::sqrt(2.0 * params.v[2] / params.m);

  const Matrix Ia = Matrix::Identity(basis.Na + 1, basis.Na + 1);
  const Matrix Ib = Matrix::Identity(basis.Nb + 1, basis.Nb + 1);
  ops.aL = kron(detail::ladder(basis.Na), Ib);
  ops.bL = kron(Ia, detail::ladder(basis.Nb));

  const double s = 1.0 / params.l_B();  // sqrt(−2eB)
  const Matrix aH = ops.aL.adjoint(), bH = ops.bL.adjoint();
  ops.pi1L = s * (ops.aL + aH) / 2.0;
  ops.pi2L = iu * s * (ops.aL - aH) / 2.0;
  ops.eta1L = s * (ops.bL + bH) / 2.0;
  ops.eta2L = -iu * s * (ops.bL - bH) / 2.0;
  const double eB = params.e * params.B;
  ops.x1L = (ops.eta2L - ops.pi2L) / eB;
  ops.x2L = (ops.pi1L - ops.eta1L) / eB;
  ops.p1L = (ops.eta1L + ops.pi1L) / 2.0;
  ops.p2L = (ops.eta2L + ops.pi2L) / 2.0;
  ops.A1L = -(params.B / 2.0) * ops.x2L;
  ops.A2L = (params.B / 2.0) * ops.x1L;
  ops.hbL = (ops.pi1L * ops.pi1L + ops.pi2L * ops.pi2L) / (2.0 * params.m);

  ops.cA = detail::ladder(basis.Nc);
  const Matrix cH = ops.cA.adjoint();
  ops.xiA = (ops.cA + cH) / std::sqrt(2.0 * params.m * ops.axial_freq);
  ops.x3A = params.L * Matrix::Identity(ops.dim_axial, ops.dim_axial) + ops.xiA;
  ops.p3A = iu * std::sqrt(params.m * ops.axial_freq / 2.0) * (cH - ops.cA);

  ops.a = ops.lift_landau(ops.aL);
  ops.b = ops.lift_landau(ops.bL);
  ops.c = ops.lift_axial(ops.cA);
  ops.x1 = ops.lift_landau(ops.x1L);
  ops.x2 = ops.lift_landau(ops.x2L);
  ops.x3 = ops.lift_axial(ops.x3A);
  ops.p1 = ops.lift_landau(ops.p1L);
  ops.p2 = ops.lift_landau(ops.p2L);
  ops.p3 = ops.lift_axial(ops.p3A);
  ops.pi1 = ops.lift_landau(ops.pi1L);
  ops.pi2 = ops.lift_landau(ops.pi2L);
  ops.eta1 = ops.lift_landau(ops.eta1L);
  ops.eta2 = ops.lift_landau(ops.eta2L);
  ops.A1 = ops.lift_landau(ops.A1L);
  ops.A2 = ops.lift_landau(ops.A2L);

  ops.J1 = ops.lift(ops.x2L, ops.p3A) - ops.lift(ops.p2L, ops.x3A);
  ops.J2 = ops.lift(ops.p1L, ops.x3A) - ops.lift(ops.x1L, ops.p3A);
  ops.J3 = ops.lift_landau(ops.x1L * ops.p2L - ops.x2L * ops.p1L);

  auto keep = [&](int n, int N) { return N == 0 || n <= N - basis.buffer; };
  ops.interior_landau = Matrix::Zero(ops.dim_landau, ops.dim_landau);
  for (int ia = 0; ia <= basis.Na; ++ia)
    for (int ib = 0; ib <= basis.Nb; ++ib)
      if (keep(ia, basis.Na) && keep(ib, basis.Nb))
        ops.interior_landau(ia * (basis.Nb + 1) + ib, ia * (basis.Nb + 1) + ib) = 1.0;
  ops.interior_axial = Matrix::Zero(ops.dim_axial, ops.dim_axial);
  for (int ic = 0; ic <= basis.Nc; ++ic)
    if (keep(ic, basis.Nc)) ops.interior_axial(ic, ic) = 1.0;
  ops.interior = kron(ops.interior_landau, ops.interior_axial);
  return ops;
}

// Σ_k coeffs[k]·X^k by Horner evaluation; degree at most 4.
inline Matrix operator_polynomial(const Matrix& X, const std::vector<double>& coeffs) {
  if (X.rows() != X.cols()) throw std::invalid_argument("operator_polynomial: X not square");
  if (coeffs.size() > 5) throw std::invalid_argument("operator_polynomial: degree above 4");
  const Matrix I = Matrix::Identity(X.rows(), X.cols());
  if (coeffs.empty()) return Matrix::Zero(X.rows(), X.cols());
  Matrix P = coeffs.back() * I;
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) P = (P * X + coeffs[k] * I).eval();
  return P;
}

// V(X) for the confining potential of `params`.
inline Matrix potential_matrix(const PhysicalParams& params, const Matrix& X) {
  std::vector<double> c(params.v.begin(), params.v.end());
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return operator_polynomial(X, c);
}

}  // namespace landau
