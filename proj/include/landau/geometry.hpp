#pragma once

#include <optional>
#include <variant>

#include "core.hpp"

namespace landau {

struct PathPoint {
  Vec3 n, ndot, nddot;
};

// n(t) = (sin θ cos(εt+φ0), sin θ sin(εt+φ0), cos θ); duration = periods·2π/ε.
struct PrecessingCone {
  double theta = 0;
  double eps = 0.01;
  double phi0 = 0;
  double periods = 1;
};

// Great circle in the plane orthogonal to `axis`, traversed at angular speed ε
// through a total angle `arc_angle`. The starting point is a deterministic unit
// vector orthogonal to the axis.
struct GreatCircleArc {
  Vec3 axis = Vec3::UnitZ();
  double arc_angle = 2 * pi;
  double eps = 0.01;
};

// Pole -> (θ, 0) down the meridian, along the latitude through Δφ, back up to
// the pole. Constant speed |ṅ| = ε on every leg; ṅ jumps at the two corners.
struct PolarTriangle {
  double theta = pi / 3;
  double dphi = pi;
  double eps = 0.01;
};

// Cubic-spline interpolation of the sampled points, projected back to the unit
// sphere. Derivatives come from the interpolant, so the family is approximate.
struct SampledWaypoints {
  std::vector<double> times;
  std::vector<Vec3> points;
  int order = 3;
};

namespace detail {

// Natural cubic spline through (t_i, y_i), one per vector component.
class VectorSpline {
 public:
  VectorSpline() = default;
  VectorSpline(std::vector<double> t, std::vector<Vec3> y)
      : t_(std::move(t)), y_(std::move(y)) {
    const std::size_t n = t_.size();
    m_.assign(n, Vec3::Zero());
    if (n < 3) return;
    std::vector<double> a(n, 0), b(n, 0), c(n, 0);
    std::vector<Vec3> r(n, Vec3::Zero());
    b[0] = b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hi = t_[i] - t_[i - 1], hi1 = t_[i + 1] - t_[i];
      a[i] = hi / 6.0;
      b[i] = (hi + hi1) / 3.0;
      c[i] = hi1 / 6.0;
      r[i] = (y_[i + 1] - y_[i]) / hi1 - (y_[i] - y_[i - 1]) / hi;
    }
    // Thomas algorithm
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      r[i] -= w * r[i - 1];
    }
    m_[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
  }

  void eval(double t, Vec3& s, Vec3& sd, Vec3& sdd) const {
    const std::size_t k = lower_index(t_, t);
    const double h = t_[k + 1] - t_[k];
    const double A = (t_[k + 1] - t) / h, B = (t - t_[k]) / h;
    s = A * y_[k] + B * y_[k + 1] +
        ((A * A * A - A) * m_[k] + (B * B * B - B) * m_[k + 1]) * (h * h / 6.0);
    sd = (y_[k + 1] - y_[k]) / h -
         (3 * A * A - 1) * (h / 6.0) * m_[k] + (3 * B * B - 1) * (h / 6.0) * m_[k + 1];
    sdd = A * m_[k] + B * m_[k + 1];
  }

 private:
  std::vector<double> t_;
  std::vector<Vec3> y_;
  std::vector<Vec3> m_;  // second derivatives
};

}  // namespace detail

class SpherePath {
 public:
  using Family = std::variant<PrecessingCone, GreatCircleArc, PolarTriangle, SampledWaypoints>;

  explicit SpherePath(Family family) : family_(std::move(family)) {
    if (auto* cone = std::get_if<PrecessingCone>(&family_)) {
      if (cone->eps <= 0) throw std::invalid_argument("SpherePath: eps must be positive");
      duration_ = cone->periods * 2 * pi / cone->eps;
    } else if (auto* arc = std::get_if<GreatCircleArc>(&family_)) {
      if (arc->eps <= 0) throw std::invalid_argument("SpherePath: eps must be positive");
      if (arc->axis.norm() < 1e-14) throw std::invalid_argument("SpherePath: zero axis");
      axis_ = arc->axis.normalized();
      Vec3 seed = std::abs(axis_.dot(Vec3::UnitZ())) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
      u_ = (seed - axis_ * axis_.dot(seed)).normalized();
      v_ = axis_.cross(u_);
      duration_ = arc->arc_angle / arc->eps;
    } else if (auto* tri = std::get_if<PolarTriangle>(&family_)) {
      if (tri->eps <= 0 || tri->theta <= 0 || tri->theta >= pi || tri->dphi <= 0)
        throw std::invalid_argument("SpherePath: invalid polar triangle");
      seg1_ = tri->theta / tri->eps;
      seg2_ = tri->dphi * std::sin(tri->theta) / tri->eps;
      duration_ = 2 * seg1_ + seg2_;
    } else {
      auto& wp = std::get<SampledWaypoints>(family_);
      if (wp.order != 3) throw std::invalid_argument("SpherePath: only cubic waypoints supported");
      if (wp.times.size() < 4 || wp.times.size() != wp.points.size())
        throw std::invalid_argument("SpherePath: need at least 4 waypoints");
      for (std::size_t i = 1; i < wp.times.size(); ++i)
        if (wp.times[i] <= wp.times[i - 1])
          throw std::invalid_argument("SpherePath: waypoint times must increase");
      if (std::abs(wp.times.front()) > 1e-12)
        throw std::invalid_argument("SpherePath: waypoints must start at t = 0");
      spline_ = detail::VectorSpline(wp.times, wp.points);
      duration_ = wp.times.back();
    }
  }

  const Family& family() const { return family_; }
  double duration() const { return duration_; }

  double rate() const {
    if (auto* c = std::get_if<PrecessingCone>(&family_)) return c->eps;
    if (auto* a = std::get_if<GreatCircleArc>(&family_)) return a->eps;
    if (auto* t = std::get_if<PolarTriangle>(&family_)) return t->eps;
    return max_speed();
  }

  // Interior corner times where ṅ is discontinuous.
  std::vector<double> breakpoints() const {
    if (std::get_if<PolarTriangle>(&family_)) return {seg1_, seg1_ + seg2_};
    return {};
  }

  PathPoint at(double t) const {
    if (t < -1e-12 || t > duration_ * (1 + 1e-12))
      throw std::invalid_argument("SpherePath: t outside [0, T]");
    t = std::clamp(t, 0.0, duration_);
    PathPoint p;
    if (auto* cone = std::get_if<PrecessingCone>(&family_)) {
      const double st = std::sin(cone->theta), ct = std::cos(cone->theta);
      const double ph = cone->eps * t + cone->phi0, e = cone->eps;
      p.n = Vec3(st * std::cos(ph), st * std::sin(ph), ct);
      p.ndot = Vec3(-e * st * std::sin(ph), e * st * std::cos(ph), 0);
      p.nddot = Vec3(-e * e * st * std::cos(ph), -e * e * st * std::sin(ph), 0);
    } else if (auto* arc = std::get_if<GreatCircleArc>(&family_)) {
      const double ph = arc->eps * t, e = arc->eps;
      p.n = std::cos(ph) * u_ + std::sin(ph) * v_;
      p.ndot = e * (-std::sin(ph) * u_ + std::cos(ph) * v_);
      p.nddot = -e * e * p.n;
    } else if (auto* tri = std::get_if<PolarTriangle>(&family_)) {
      const double e = tri->eps;
      if (t < seg1_) {
        const double chi = e * t;
        p.n = Vec3(std::sin(chi), 0, std::cos(chi));
        p.ndot = e * Vec3(std::cos(chi), 0, -std::sin(chi));
        p.nddot = -e * e * p.n;
      } else if (t < seg1_ + seg2_) {
        const double st = std::sin(tri->theta), ct = std::cos(tri->theta);
        const double phd = e / st, ph = phd * (t - seg1_);
        p.n = Vec3(st * std::cos(ph), st * std::sin(ph), ct);
        p.ndot = e * Vec3(-std::sin(ph), std::cos(ph), 0);
        p.nddot = -e * phd * Vec3(std::cos(ph), std::sin(ph), 0);
      } else {
        const double chi = tri->theta - e * (t - seg1_ - seg2_);
        const double cd = std::cos(tri->dphi), sd = std::sin(tri->dphi);
        p.n = Vec3(std::sin(chi) * cd, std::sin(chi) * sd, std::cos(chi));
        p.ndot = -e * Vec3(std::cos(chi) * cd, std::cos(chi) * sd, -std::sin(chi));
        p.nddot = -e * e * p.n;
      }
    } else {
      Vec3 s, sd, sdd;
      spline_.eval(t, s, sd, sdd);
      const double r = s.norm();
      if (r < 1e-12) throw std::runtime_error("SpherePath: interpolant passes near origin");
      const Vec3 u = s / r;
      const double rd = u.dot(sd);
      const Vec3 ud = (sd - u * rd) / r;
      p.n = u;
      p.ndot = ud;
      p.nddot = (sdd - ud * rd - u * (ud.dot(sd) + u.dot(sdd))) / r - ud * (rd / r);
    }
    return p;
  }

  bool is_closed(double tol = 1e-9) const {
    return (at(duration_).n - at(0).n).norm() <= tol;
  }

  double max_speed() const {
    double v = 0;
    for (int i = 0; i <= 400; ++i) v = std::max(v, at(duration_ * i / 400.0).ndot.norm());
    return v;
  }

 private:
  Family family_;
  double duration_ = 0;
  // great circle
  Vec3 axis_ = Vec3::UnitZ(), u_ = Vec3::UnitX(), v_ = Vec3::UnitY();
  // triangle
  double seg1_ = 0, seg2_ = 0;
  // waypoints
  detail::VectorSpline spline_;
};

inline std::pair<Vec3, Vec3> evaluate_path(const SpherePath& path, double t) {
  const PathPoint p = path.at(t);
  return {p.n, p.ndot};
}

struct FrameEval {
  Vec3 n, ndot, nddot, e1, e2, e3;
  double alpha1 = 0, alpha2 = 0;
  double alphadot1 = 0, alphadot2 = 0;
  double ndot2 = 0;
  cplx alpha() const { return {alpha1, alpha2}; }
  cplx alphadot() const { return {alphadot1, alphadot2}; }
};

class TransportedFrame {
 public:
  std::vector<double> t;
  std::vector<Vec3> e1, e2, e3;
  std::vector<double> alpha1, alpha2;
  double drift = 0;        // max |e_i·e_j − δ_ij| over the grid
  double e3_deviation = 0; // max |e3 − n| over the grid
  double refine_diff = 0;  // step-halving self-difference at T

  TransportedFrame(SpherePath p) : path_(std::move(p)) {}

  const SpherePath& path() const { return path_; }
  Vec3 e10() const { return e1.front(); }
  Vec3 e20() const { return e2.front(); }
  Vec3 e30() const { return e3.front(); }

  FrameEval eval(double time) const {
    FrameEval f;
    const PathPoint p = path_.at(time);
    f.n = p.n;
    f.ndot = p.ndot;
    f.nddot = p.nddot;
    f.ndot2 = p.ndot.squaredNorm();
    const std::size_t k = lower_index(t, time);
    // right limit at the left node, left limit at the right node (corners)
    const Vec3 w0 = frame_omega(t[k]);
    const Vec3 w1 = frame_omega(t[k + 1] - 1e-9 * (t[k + 1] - t[k]));
    f.e1 = hermite(t[k], t[k + 1], e1[k], e1[k + 1], Vec3(w0.cross(e1[k])),
                   Vec3(w1.cross(e1[k + 1])), time);
    f.e2 = hermite(t[k], t[k + 1], e2[k], e2[k + 1], Vec3(w0.cross(e2[k])),
                   Vec3(w1.cross(e2[k + 1])), time);
    f.e3 = hermite(t[k], t[k + 1], e3[k], e3[k + 1], Vec3(w0.cross(e3[k])),
                   Vec3(w1.cross(e3[k + 1])), time);
    const Vec3 w = p.n.cross(p.ndot);
    f.alpha1 = p.ndot.dot(f.e1);
    f.alpha2 = p.ndot.dot(f.e2);
    f.alphadot1 = p.nddot.dot(f.e1) + p.ndot.dot(w.cross(f.e1));
    f.alphadot2 = p.nddot.dot(f.e2) + p.ndot.dot(w.cross(f.e2));
    return f;
  }

  Vec3 frame_omega(double time) const {
    const PathPoint p = path_.at(time);
    return p.n.cross(p.ndot);
  }

 private:
  SpherePath path_;
};

// Parallel transport of the frame along the path: ė_i = (n×ṅ)×e_i with
// e1(0) = n'(0), e2(0) = n(0)×n'(0), e3(0) = n(0). Fixed-step RK4 with
// |ṅ|·h ≤ 1e−3, restarted at path corners; no re-orthonormalization.
inline TransportedFrame transport_frame(const SpherePath& path,
                                        const std::vector<double>& grid,
                                        double tol = 1e-10,
                                        std::optional<Vec3> initial_e1 = {}) {
  if (grid.size() < 2 || std::abs(grid.front()) > 1e-12)
    throw std::invalid_argument("transport_frame: grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("transport_frame: grid must strictly increase");

  const PathPoint p0 = path.at(0);
  Vec3 e1v;
  if (initial_e1) {
    e1v = initial_e1->normalized();
    if (std::abs(e1v.dot(p0.n)) > 1e-10)
      throw std::invalid_argument("transport_frame: initial e1 not tangent");
  } else {
    if (p0.ndot.norm() < 1e-14)
      throw std::invalid_argument("transport_frame: |ndot(0)| = 0, supply initial e1");
    e1v = p0.ndot.normalized();
  }

  // knots: grid nodes plus corner times
  std::vector<double> knots = grid;
  for (double b : path.breakpoints())
    if (b > knots.front() && b < knots.back()) knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              knots.end());

  const double hmax = 1e-3 / std::max(path.rate(), std::max(path.max_speed(), 1e-12));

  auto run = [&](double hscale, std::vector<Vec3>* se1, std::vector<Vec3>* se2,
                 std::vector<Vec3>* se3) {
    Eigen::Matrix3d E;  // rows e1,e2,e3
    E.row(0) = e1v;
    E.row(1) = p0.n.cross(e1v);
    E.row(2) = p0.n;
    auto deriv = [&](double time, const Eigen::Matrix3d& F) {
      const Vec3 w = path.at(time).n.cross(path.at(time).ndot);
      Eigen::Matrix3d D;
      for (int i = 0; i < 3; ++i) D.row(i) = w.cross(Vec3(F.row(i)));
      return D;
    };
    std::size_t gi = 0;
    auto record = [&](double time, const Eigen::Matrix3d& F) {
      while (gi < grid.size() && std::abs(grid[gi] - time) < 1e-12) {
        if (se1) {
          se1->push_back(F.row(0));
          se2->push_back(F.row(1));
          se3->push_back(F.row(2));
        }
        ++gi;
      }
    };
    record(0.0, E);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double len = knots[k + 1] - knots[k];
      const int nsub = std::max(1, int(std::ceil(len / (hmax * hscale))));
      const double h = len / nsub;
      // keep stage evaluations strictly inside the segment: ṅ may jump at its end
      const double tcap = knots[k + 1] - 1e-9 * h;
      double time = knots[k];
      for (int s = 0; s < nsub; ++s) {
        const Eigen::Matrix3d k1 = deriv(time, E);
        const Eigen::Matrix3d k2 = deriv(std::min(time + 0.5 * h, tcap), E + 0.5 * h * k1);
        const Eigen::Matrix3d k3 = deriv(std::min(time + 0.5 * h, tcap), E + 0.5 * h * k2);
        const Eigen::Matrix3d k4 = deriv(std::min(time + h, tcap), E + h * k3);
        E += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        time += h;
      }
      record(knots[k + 1], E);
    }
    return E;
  };

  TransportedFrame frame(path);
  frame.t = grid;
  const Eigen::Matrix3d Efin = run(1.0, &frame.e1, &frame.e2, &frame.e3);
  const Eigen::Matrix3d Ehalf = run(0.5, nullptr, nullptr, nullptr);
  frame.refine_diff = (Efin - Ehalf).norm();

  frame.alpha1.resize(grid.size());
  frame.alpha2.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const PathPoint p = path.at(grid[k]);
    frame.alpha1[k] = p.ndot.dot(frame.e1[k]);
    frame.alpha2[k] = p.ndot.dot(frame.e2[k]);
    double d = 0;
    d = std::max(d, std::abs(frame.e1[k].dot(frame.e1[k]) - 1));
    d = std::max(d, std::abs(frame.e2[k].dot(frame.e2[k]) - 1));
    d = std::max(d, std::abs(frame.e3[k].dot(frame.e3[k]) - 1));
    d = std::max(d, std::abs(frame.e1[k].dot(frame.e2[k])));
    d = std::max(d, std::abs(frame.e1[k].dot(frame.e3[k])));
    d = std::max(d, std::abs(frame.e2[k].dot(frame.e3[k])));
    frame.drift = std::max(frame.drift, d);
    frame.e3_deviation = std::max(frame.e3_deviation, (frame.e3[k] - p.n).norm());
  }
  if (frame.drift > tol)
    throw std::runtime_error("transport_frame: orthonormality drift " +
                             std::to_string(frame.drift) + " exceeds tolerance");
  return frame;
}

// Signed solid angle of a closed path, by fan triangulation from n(0).
// Positive for counterclockwise circulation seen from outside the sphere.
inline double solid_angle(const SpherePath& path) {
  if (!path.is_closed())
    throw std::invalid_argument("solid_angle: path is not closed");
  auto area_at = [&](int nseg) {
    std::vector<double> ts = linspace(0, path.duration(), nseg + 1);
    for (double b : path.breakpoints()) ts.push_back(b);
    std::sort(ts.begin(), ts.end());
    const Vec3 a = path.at(0).n;
    double omega = 0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const Vec3 b = path.at(ts[k]).n, c = path.at(ts[k + 1]).n;
      const double num = a.dot(b.cross(c));
      const double den = 1 + a.dot(b) + b.dot(c) + c.dot(a);
      omega += 2 * std::atan2(num, den);
    }
    return omega;
  };
  double prev = area_at(512), cur = area_at(1024);
  int n = 1024;
  while (std::abs(cur - prev) > 1e-12 && n < (1 << 20)) {
    n *= 2;
    prev = cur;
    cur = area_at(n);
  }
  return cur;
}

// Accumulated rotation angle of (e1,e2) about n over one closed loop. For the
// precessing-cone family the angle is tracked continuously against the
// spherical (θ̂, φ̂) frame, so full turns are counted; for other closed paths
// the value is reported modulo 2π from the endpoint frames.
inline double frame_holonomy_angle(const TransportedFrame& frame) {
  const SpherePath& path = frame.path();
  if (!path.is_closed())
    throw std::invalid_argument("frame_holonomy_angle: path is not closed");
  if (auto* cone = std::get_if<PrecessingCone>(&path.family())) {
    double psi_prev = 0, acc = 0;
    bool first = true;
    for (std::size_t k = 0; k < frame.t.size(); ++k) {
      const double ph = cone->eps * frame.t[k] + cone->phi0;
      const double st = std::sin(cone->theta), ct = std::cos(cone->theta);
      const Vec3 that(ct * std::cos(ph), ct * std::sin(ph), -st);
      const Vec3 phat(-std::sin(ph), std::cos(ph), 0);
      const double psi = std::atan2(frame.e1[k].dot(phat), frame.e1[k].dot(that));
      if (!first) {
        double d = psi - psi_prev;
        while (d > pi) d -= 2 * pi;
        while (d < -pi) d += 2 * pi;
        acc += d;
      }
      first = false;
      psi_prev = psi;
    }
    return 2 * pi * cone->periods + acc;
  }
  const Vec3 ef = frame.e1.back();
  return std::atan2(ef.dot(frame.e20()), ef.dot(frame.e10()));
}

struct DisplacementPath {
  std::vector<double> t;
  std::vector<double> d1, d2, Sd;
  std::vector<double> d1dot, d2dot, Sddot;
  double total_length = 0;
  double quad_error = 0;
  double L = 0;

  struct Eval {
    double d1, d2, Sd;
  };
  Eval eval(double time) const {
    const std::size_t k = lower_index(t, time);
    Eval e;
    e.d1 = hermite(t[k], t[k + 1], d1[k], d1[k + 1], d1dot[k], d1dot[k + 1], time);
    e.d2 = hermite(t[k], t[k + 1], d2[k], d2[k + 1], d2dot[k], d2dot[k + 1], time);
    e.Sd = hermite(t[k], t[k + 1], Sd[k], Sd[k + 1], Sddot[k], Sddot[k + 1], time);
    return e;
  }
};

// d_μ(t) = −(L/2)∫α_μ dτ, S_d(t) = ∫d₁·(−(L/2)α₂)dτ − ½d₁(t)d₂(t), and the
// transverse path length (L/2)∫|ṅ|dτ, accumulated with RK4 quadrature.
inline DisplacementPath displacement_path(const TransportedFrame& frame, double L,
                                          double tol = 1e-8) {
  if (L < 0) throw std::invalid_argument("displacement_path: L must be nonnegative");
  auto rhs = [&](double time, const RealVector& y) {
    const FrameEval f = frame.eval(time);
    RealVector d(4);
    d[0] = -(L / 2) * f.alpha1;
    d[1] = -(L / 2) * f.alpha2;
    d[2] = y[0] * (-(L / 2) * f.alpha2);  // running ∫ d1 ddot2
    d[3] = (L / 2) * f.ndot.norm();
    return d;
  };
  RealVector y0 = RealVector::Zero(4);
  const auto coarse = integrate_ode(rhs, y0, frame.t, 1);
  const auto fine = integrate_ode(rhs, y0, frame.t, 2);

  DisplacementPath dp;
  dp.L = L;
  dp.t = frame.t;
  const std::size_t n = frame.t.size();
  dp.d1.resize(n);
  dp.d2.resize(n);
  dp.Sd.resize(n);
  dp.d1dot.resize(n);
  dp.d2dot.resize(n);
  dp.Sddot.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const FrameEval f = frame.eval(frame.t[k]);
    dp.d1[k] = fine[k][0];
    dp.d2[k] = fine[k][1];
    dp.Sd[k] = fine[k][2] - 0.5 * fine[k][0] * fine[k][1];
    dp.d1dot[k] = -(L / 2) * f.alpha1;
    dp.d2dot[k] = -(L / 2) * f.alpha2;
    // d/dt [∫d1 ddot2 − ½ d1 d2] = ½(d1 ddot2 − d2 ddot1)
    dp.Sddot[k] = 0.5 * (dp.d1[k] * dp.d2dot[k] - dp.d2[k] * dp.d1dot[k]);
  }
  dp.total_length = fine.back()[3];
  const double scale = std::max({1.0, std::abs(dp.d1.back()), std::abs(dp.d2.back()),
                                 std::abs(dp.Sd.back())});
  dp.quad_error = (fine.back() - coarse.back()).norm() / scale;
  if (dp.quad_error > tol)
    throw std::runtime_error("displacement_path: quadrature error above tolerance");
  return dp;
}

}  // namespace landau
