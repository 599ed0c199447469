#pragma once

#include "geometry.hpp"
#include "hilbert.hpp"

namespace landau {

enum class RotatingForm { angular, kinematic };
enum class H0Form { conjugated, closed, decomposed };

namespace detail {

inline Matrix alpha_x(const OperatorSet& ops, double a1, double a2) {
  return a1 * ops.x1L + a2 * ops.x2L;
}
inline Matrix alpha_A(const OperatorSet& ops, double a1, double a2) {
  return a1 * ops.A1L + a2 * ops.A2L;
}
inline Matrix alpha_pi(const OperatorSet& ops, double a1, double a2) {
  return a1 * ops.pi1L + a2 * ops.pi2L;
}

struct InitialAxes {
  Vec3 e1, e2, e3;
};

inline InitialAxes initial_axes(const SpherePath& path) {
  const PathPoint p0 = path.at(0);
  if (p0.ndot.norm() < 1e-14)
    throw std::invalid_argument("initial_axes: |ndot(0)| = 0, frame axes undefined");
  InitialAxes ax;
  ax.e1 = p0.ndot.normalized();
  ax.e2 = p0.n.cross(ax.e1);
  ax.e3 = p0.n;
  return ax;
}

inline InitialAxes initial_axes(const TransportedFrame& frame) {
  return {frame.e10(), frame.e20(), frame.e30()};
}

}  // namespace detail

// Laboratory-frame Hamiltonian (1/2m)(p − eA(r,t))² + V(r·n(εt) − L) with
// A(r,t) = ½B n(εt)×r, expressed in the initial-frame components.
inline Matrix build_lab_hamiltonian(const OperatorSet& ops, const PhysicalParams& params,
                                    const SpherePath& path, double t,
                                    const detail::InitialAxes& ax) {
  const PathPoint pp = path.at(t);
  const Vec3 n(pp.n.dot(ax.e1), pp.n.dot(ax.e2), pp.n.dot(ax.e3));
  const Matrix xs[3] = {ops.x1, ops.x2, ops.x3};
  const Matrix ps[3] = {ops.p1, ops.p2, ops.p3};
  const double e = params.e, B = params.B, m = params.m;

  Matrix H = Matrix::Zero(ops.dim, ops.dim);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const Matrix Ai = (B / 2.0) * (n[j] * xs[k] - n[k] * xs[j]);
    const Matrix ki = ps[i] - e * Ai;
    H += ki * ki / (2.0 * m);
  }
  Matrix Y = n[0] * ops.x1 + n[1] * ops.x2 + n[2] * ops.x3 -
             params.L * Matrix::Identity(ops.dim, ops.dim);
  H += potential_matrix(params, Y);
  return H;
}

inline Matrix build_lab_hamiltonian(const OperatorSet& ops, const PhysicalParams& params,
                                    const SpherePath& path, double t) {
  return build_lab_hamiltonian(ops, params, path, t, detail::initial_axes(path));
}

// Fast per-time assembly of H_lab from precomputed sector products.
class LabHamiltonian {
 public:
  LabHamiltonian(const OperatorSet& ops, const SpherePath& path, detail::InitialAxes ax)
      : ops_(&ops), path_(path), ax_(ax) {
    const Matrix IA = Matrix::Identity(ops.dim_axial, ops.dim_axial);
    P2_ = ops.lift_landau(ops.p1L * ops.p1L + ops.p2L * ops.p2L) +
          ops.lift_axial(ops.p3A * ops.p3A);
    X_[0] = ops.x1;
    X_[1] = ops.x2;
    X_[2] = ops.x3;
    XX_[0][0] = ops.lift_landau(ops.x1L * ops.x1L);
    XX_[1][1] = ops.lift_landau(ops.x2L * ops.x2L);
    XX_[2][2] = ops.lift_axial(ops.x3A * ops.x3A);
    XX_[0][1] = ops.lift_landau((ops.x1L * ops.x2L + ops.x2L * ops.x1L) / 2.0);
    XX_[0][2] = ops.lift(ops.x1L, ops.x3A);
    XX_[1][2] = ops.lift(ops.x2L, ops.x3A);
    XX_[1][0] = XX_[0][1];
    XX_[2][0] = XX_[0][2];
    XX_[2][1] = XX_[1][2];
    R2_ = XX_[0][0] + XX_[1][1] + XX_[2][2];
    J_[0] = ops.J1;
    J_[1] = ops.J2;
    J_[2] = ops.J3;
    anharmonic_ = ops.params.v[3] != 0 || ops.params.v[4] != 0;
  }

  Matrix at(double t) const {
    const OperatorSet& ops = *ops_;
    const PhysicalParams& pr = ops.params;
    const PathPoint pp = path_.at(t);
    const Vec3 n(pp.n.dot(ax_.e1), pp.n.dot(ax_.e2), pp.n.dot(ax_.e3));
    const double e = pr.e, B = pr.B, m = pr.m, L = pr.L;

    Matrix nr2 = Matrix::Zero(ops.dim, ops.dim);  // (n·r)²
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) nr2 += (n[i] * n[j]) * XX_[i][j];
    Matrix nr = n[0] * X_[0] + n[1] * X_[1] + n[2] * X_[2];
    Matrix nJ = n[0] * J_[0] + n[1] * J_[1] + n[2] * J_[2];

    Matrix H = P2_ / (2 * m) - (e * B / (2 * m)) * nJ +
               (e * e * B * B / (8 * m)) * (R2_ - nr2);
    // V(n·r − L) via (n·r − L)^k
    const Matrix I = Matrix::Identity(ops.dim, ops.dim);
    const Matrix Y2 = nr2 - 2 * L * nr + L * L * I;
    H += pr.v[2] * Y2;
    if (anharmonic_) {
      const Matrix Y = nr - L * I;
      if (pr.v[3] != 0) H += pr.v[3] * (Y2 * Y);
      if (pr.v[4] != 0) H += pr.v[4] * (Y2 * Y2);
    }
    return H;
  }

 private:
  const OperatorSet* ops_;
  SpherePath path_;
  detail::InitialAxes ax_;
  Matrix P2_, R2_, X_[3], XX_[3][3], J_[3];
  bool anharmonic_ = false;
};

// H1 in the rotating frame, in either of its two algebraically equal forms.
inline Matrix build_rotating_hamiltonian(const OperatorSet& ops, const PhysicalParams& params,
                                         const TransportedFrame& frame, double t,
                                         RotatingForm form) {
  const FrameEval f = frame.eval(t);
  const double m = params.m, e = params.e;
  const Matrix VA = potential_matrix(params, ops.xiA);
  const Matrix axial = ops.p3A * ops.p3A / (2 * m) + VA;

  if (form == RotatingForm::angular) {
    return ops.lift_landau(ops.hbL) + ops.lift_axial(axial) + f.alpha2 * ops.J1 -
           f.alpha1 * ops.J2;
  }

  // kinematic rewrite with K_μ, K_3 and the centripetal potential
  const Matrix K1 = ops.pi1 - m * f.alpha1 * ops.x3;
  const Matrix K2 = ops.pi2 - m * f.alpha2 * ops.x3;
  const Matrix K3 = ops.p3 + m * (f.alpha1 * ops.x1 + f.alpha2 * ops.x2);
  const Matrix aX = f.alpha1 * ops.x1 + f.alpha2 * ops.x2;
  const Matrix aA = f.alpha1 * ops.A1 + f.alpha2 * ops.A2;
  Matrix H = (K1 * K1 + K2 * K2 + K3 * K3) / (2 * m);
  H -= e * (aA * ops.x3);
  H += -(m / 2) * f.ndot2 * (ops.x3 * ops.x3) - (m / 2) * (aX * aX);
  H += ops.lift_axial(VA);
  return H;
}

struct GaugeUnitary {
  Matrix g;
  Matrix minus_i_ginv_gdot;
};

// g = exp[−im(α₁x₁+α₂x₂)(x₃−2L)]; the −ig⁻¹ġ term is closed-form because the
// exponent is built from commuting position operators.
inline GaugeUnitary build_gauge_unitary(const OperatorSet& ops, const PhysicalParams& params,
                                        const TransportedFrame& frame, double t) {
  const FrameEval f = frame.eval(t);
  const Matrix IA = Matrix::Identity(ops.dim_axial, ops.dim_axial);
  const Matrix zA = ops.x3A - 2 * params.L * IA;
  const Matrix phi = params.m * kron(detail::alpha_x(ops, f.alpha1, f.alpha2), zA);
  GaugeUnitary gu;
  gu.g = expm(Matrix(-iu * phi));
  if (!gu.g.allFinite())
    throw std::runtime_error("build_gauge_unitary: exponential failed, |phi| = " +
                             std::to_string(phi.norm()));
  gu.minus_i_ginv_gdot =
      -params.m * kron(detail::alpha_x(ops, f.alphadot1, f.alphadot2), zA);
  return gu;
}

// H1d = p3²/2m + V(x3−L) − (m/2)L²ṅ²
inline Matrix build_h1d(const OperatorSet& ops, const PhysicalParams& params,
                        const TransportedFrame& frame, double t) {
  const FrameEval f = frame.eval(t);
  const Matrix IA = Matrix::Identity(ops.dim_axial, ops.dim_axial);
  return ops.lift_axial(ops.p3A * ops.p3A / (2 * params.m) +
                        potential_matrix(params, ops.xiA) -
                        (params.m / 2) * params.L * params.L * f.ndot2 * IA);
}

// Landau-sector part of H2d (everything except the identity on the axial factor).
inline Matrix build_h2d_landau(const OperatorSet& ops, const PhysicalParams& params,
                               const FrameEval& f) {
  const double m = params.m, e = params.e, L = params.L;
  const Matrix aX = detail::alpha_x(ops, f.alpha1, f.alpha2);
  Matrix H = ops.hbL;
  H += -e * L * detail::alpha_A(ops, f.alpha1, f.alpha2);
  H += m * L * detail::alpha_x(ops, f.alphadot1, f.alphadot2);
  H += -(m / 2) * (aX * aX);
  return H;
}

inline Matrix build_h2d(const OperatorSet& ops, const PhysicalParams& params,
                        const TransportedFrame& frame, double t) {
  return ops.lift_landau(build_h2d_landau(ops, params, frame.eval(t)));
}

// Landau factor of the ξ-coupling: −2α_μπ_μ − eα_μA_μ − mα̇_μx_μ − mLṅ²
inline Matrix build_xi_coupling_landau(const OperatorSet& ops, const PhysicalParams& params,
                                       const FrameEval& f) {
  const double m = params.m, e = params.e, L = params.L;
  const Matrix IL = Matrix::Identity(ops.dim_landau, ops.dim_landau);
  return -2 * detail::alpha_pi(ops, f.alpha1, f.alpha2) -
         e * detail::alpha_A(ops, f.alpha1, f.alpha2) -
         m * detail::alpha_x(ops, f.alphadot1, f.alphadot2) - m * L * f.ndot2 * IL;
}

inline Matrix build_h_xi0(const OperatorSet& ops, const PhysicalParams& params,
                          const TransportedFrame& frame, double t) {
  const FrameEval f = frame.eval(t);
  return kron(build_xi_coupling_landau(ops, params, f), ops.xiA) +
         (3 * params.m / 2) * f.ndot2 * ops.lift_axial(ops.xiA * ops.xiA);
}

// S(ε²) = mLα̇_μx_μ − (m/2)(α_μx_μ)², Landau sector.
inline Matrix build_s_eps2_landau(const OperatorSet& ops, const PhysicalParams& params,
                                  const FrameEval& f) {
  const Matrix aX = detail::alpha_x(ops, f.alpha1, f.alpha2);
  return params.m * params.L * detail::alpha_x(ops, f.alphadot1, f.alphadot2) -
         (params.m / 2) * (aX * aX);
}

inline Matrix build_s_eps2(const OperatorSet& ops, const PhysicalParams& params,
                           const TransportedFrame& frame, double t) {
  return ops.lift_landau(build_s_eps2_landau(ops, params, frame.eval(t)));
}

inline Matrix build_htilde2d_landau(const OperatorSet& ops, const PhysicalParams& params,
                                    const FrameEval& f) {
  return ops.hbL - params.e * params.L * detail::alpha_A(ops, f.alpha1, f.alpha2);
}

inline Matrix build_htilde2d(const OperatorSet& ops, const PhysicalParams& params,
                             const TransportedFrame& frame, double t) {
  return ops.lift_landau(build_htilde2d_landau(ops, params, frame.eval(t)));
}

inline Matrix build_hb(const OperatorSet& ops) { return ops.lift_landau(ops.hbL); }

// H0 in its three forms; the three-way equality is the identity under test.
inline Matrix build_h0(const OperatorSet& ops, const PhysicalParams& params,
                       const TransportedFrame& frame, double t, H0Form form) {
  const FrameEval f = frame.eval(t);
  const double m = params.m, e = params.e, L = params.L;
  switch (form) {
    case H0Form::conjugated: {
      const GaugeUnitary gu = build_gauge_unitary(ops, params, frame, t);
      const Matrix H1 = build_rotating_hamiltonian(ops, params, frame, t,
                                                   RotatingForm::angular);
      return gu.g.adjoint() * H1 * gu.g + gu.minus_i_ginv_gdot;
    }
    case H0Form::closed: {
      const Matrix Pi1 = ops.pi1 - 2 * m * f.alpha1 * (ops.x3 - L * Matrix::Identity(ops.dim, ops.dim));
      const Matrix Pi2 = ops.pi2 - 2 * m * f.alpha2 * (ops.x3 - L * Matrix::Identity(ops.dim, ops.dim));
      const Matrix aX = detail::alpha_x(ops, f.alpha1, f.alpha2);
      const Matrix aA = f.alpha1 * ops.A1 + f.alpha2 * ops.A2;
      Matrix H = (Pi1 * Pi1 + Pi2 * Pi2) / (2 * m);
      H -= e * (aA * ops.x3);
      H += -(m / 2) * f.ndot2 * (ops.x3 * ops.x3) -
           (m / 2) * ops.lift_landau(Matrix(aX * aX));
      H += -m * kron(detail::alpha_x(ops, f.alphadot1, f.alphadot2),
                     Matrix(ops.x3A - 2 * L * Matrix::Identity(ops.dim_axial, ops.dim_axial)));
      H += ops.lift_axial(ops.p3A * ops.p3A / (2 * m) + potential_matrix(params, ops.xiA));
      return H;
    }
    case H0Form::decomposed:
      return build_h1d(ops, params, frame, t) + build_h2d(ops, params, frame, t) +
             build_h_xi0(ops, params, frame, t);
  }
  throw std::logic_error("build_h0: bad form");
}

// H_ξ(t) with ξ(t) = U1d⁻¹(x3−L)U1d computed from the supplied propagator.
inline Matrix build_h_xi(const OperatorSet& ops, const PhysicalParams& params,
                         const TransportedFrame& frame, double t, const Matrix& U1d_t) {
  if (unitarity_residual(U1d_t) / std::sqrt(double(U1d_t.rows())) > 1e-8)
    throw std::invalid_argument("build_h_xi: U1d_t is not unitary");
  const FrameEval f = frame.eval(t);
  const Matrix xi0 = ops.x3 - params.L * Matrix::Identity(ops.dim, ops.dim);
  const Matrix xi_t = U1d_t.adjoint() * xi0 * U1d_t;
  const Matrix W = ops.lift_landau(build_xi_coupling_landau(ops, params, f));
  return W * xi_t + (3 * params.m / 2) * f.ndot2 * (xi_t * xi_t);
}

struct HamiltonianBundle {
  double t = 0;
  Matrix H_lab, H1, H1_kinematic, g, g_dot_term;
  Matrix H0_conjugated, H0_closed, H0_decomposed;
  Matrix H1d, H2d, Hxi0, S_eps2, Htilde2d, HB, Hxi_t;
};

inline HamiltonianBundle make_hamiltonian_bundle(const OperatorSet& ops,
                                                 const PhysicalParams& params,
                                                 const TransportedFrame& frame, double t,
                                                 const Matrix& U1d_t) {
  HamiltonianBundle hb;
  hb.t = t;
  hb.H_lab = build_lab_hamiltonian(ops, params, frame.path(), t, detail::initial_axes(frame));
  hb.H1 = build_rotating_hamiltonian(ops, params, frame, t, RotatingForm::angular);
  hb.H1_kinematic = build_rotating_hamiltonian(ops, params, frame, t, RotatingForm::kinematic);
  const GaugeUnitary gu = build_gauge_unitary(ops, params, frame, t);
  hb.g = gu.g;
  hb.g_dot_term = gu.minus_i_ginv_gdot;
  hb.H0_conjugated = gu.g.adjoint() * hb.H1 * gu.g + gu.minus_i_ginv_gdot;
  hb.H0_closed = build_h0(ops, params, frame, t, H0Form::closed);
  hb.H1d = build_h1d(ops, params, frame, t);
  hb.H2d = build_h2d(ops, params, frame, t);
  hb.Hxi0 = build_h_xi0(ops, params, frame, t);
  hb.H0_decomposed = hb.H1d + hb.H2d + hb.Hxi0;
  hb.S_eps2 = build_s_eps2(ops, params, frame, t);
  hb.Htilde2d = build_htilde2d(ops, params, frame, t);
  hb.HB = build_hb(ops);
  hb.Hxi_t = build_h_xi(ops, params, frame, t, U1d_t);
  return hb;
}

}  // namespace landau
