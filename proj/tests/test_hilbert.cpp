#include <catch2/catch_amalgamated.hpp>

#include <landau/hilbert.hpp>

using namespace landau;

namespace {

double interior_residual(const OperatorSet& ops, const Matrix& A) {
  return (ops.interior * A * ops.interior).norm();
}

OperatorSet small_ops(int Na = 4, int Nb = 4, int Nc = 5, int buffer = 1) {
  PhysicalParams p;
  p.B = 1;
  p.v = {0, 0, 2.0, 0, 0};
  BasisConfig b;
  b.Na = Na;
  b.Nb = Nb;
  b.Nc = Nc;
  b.buffer = buffer;
  return build_operator_set(p, b);
}

}  // namespace

TEST_CASE("derived scales from the physical parameters") {
  PhysicalParams p;
  p.m = 1;
  p.e = -1;
  p.B = 2;
  REQUIRE(p.omega() == Catch::Approx(2.0));
  REQUIRE(p.l_B() == Catch::Approx(0.5));
  p.v = {0, 0, 8.0, 0, 0};
  REQUIRE(p.axial_gap() == Catch::Approx(4.0));
  REQUIRE(p.T1() == Catch::Approx(100.0));
  REQUIRE(p.T2() == Catch::Approx(pi));
  REQUIRE(p.T3() == Catch::Approx(0.25));
}

TEST_CASE("parameter validation") {
  PhysicalParams p;
  p.e = 1.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  p.e = -1.0;
  p.v[2] = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
  BasisConfig b;
  b.buffer = 6;
  REQUIRE_THROWS_AS(b.validate(), std::invalid_argument);
  b = BasisConfig{};
  b.Na = 1;
  b.Nb = 0;
  b.Nc = 1;
  REQUIRE_THROWS_AS(b.validate(), std::invalid_argument);  // dim 8 requirement
}

TEST_CASE("Nc=0 slice freezes the axial sector") {
  PhysicalParams p;
  BasisConfig b;
  b.Na = 3;
  b.Nb = 3;
  b.Nc = 0;
  b.buffer = 1;
  auto ops = build_operator_set(p, b);
  REQUIRE(ops.dim == 16);
  REQUIRE(ops.p3.norm() == 0.0);
  REQUIRE((ops.x3 - p.L * Matrix::Identity(16, 16)).norm() == 0.0);
  // frozen mode exempt from the buffer interior rule
  REQUIRE(std::abs(ops.interior.trace().real() - 9.0) < 1e-12);
}

TEST_CASE("ladder algebra on the interior") {
  auto ops = small_ops();
  const Matrix I = Matrix::Identity(ops.dim, ops.dim);
  REQUIRE(interior_residual(ops, commutator(ops.a, ops.a.adjoint()) - I) < 1e-12);
  REQUIRE(interior_residual(ops, commutator(ops.b, ops.b.adjoint()) - I) < 1e-12);
  REQUIRE(interior_residual(ops, commutator(ops.a, ops.b)) < 1e-12);
  const double eB = ops.params.e * ops.params.B;
  REQUIRE(interior_residual(ops, commutator(ops.pi1, ops.pi2) - iu * eB * I) < 1e-10);
  REQUIRE(interior_residual(ops, commutator(ops.eta1, ops.eta2) + iu * eB * I) < 1e-10);
  REQUIRE(interior_residual(ops, commutator(ops.pi1, ops.eta1)) < 1e-10);
  REQUIRE(interior_residual(ops, commutator(ops.pi1, ops.eta2)) < 1e-10);
  REQUIRE(interior_residual(ops, commutator(ops.pi2, ops.eta1)) < 1e-10);
}

TEST_CASE("canonical commutators on the interior") {
  auto ops = small_ops();
  const Matrix I = Matrix::Identity(ops.dim, ops.dim);
  const Matrix xs[3] = {ops.x1, ops.x2, ops.x3};
  const Matrix ps[3] = {ops.p1, ops.p2, ops.p3};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const Matrix expect = (j == k) ? Matrix(iu * I) : Matrix(Matrix::Zero(ops.dim, ops.dim));
      REQUIRE(interior_residual(ops, commutator(xs[j], ps[k]) - expect) < 1e-10);
      REQUIRE(interior_residual(ops, commutator(xs[j], xs[k])) < 1e-10);
      REQUIRE(interior_residual(ops, commutator(ps[j], ps[k])) < 1e-10);
    }
}

TEST_CASE("full-space commutator violations live at the truncation boundary") {
  auto ops = small_ops();
  const Matrix I = Matrix::Identity(ops.dim, ops.dim);
  Matrix R = commutator(ops.a, ops.a.adjoint()) - I;
  REQUIRE(R.norm() > 1.0);  // the boundary shell is genuinely violated
  // localize the support: every nonzero entry touches a boundary state
  const int nb1 = ops.basis.Nb + 1, nc1 = ops.basis.Nc + 1;
  auto boundary = [&](int idx) {
    const int ic = idx % nc1, il = idx / nc1;
    const int ib = il % nb1, ia = il / nb1;
    return ia == ops.basis.Na || ib == ops.basis.Nb || ic == ops.basis.Nc;
  };
  for (int r = 0; r < ops.dim; ++r)
    for (int cidx = 0; cidx < ops.dim; ++cidx)
      if (std::abs(R(r, cidx)) > 1e-13) REQUIRE((boundary(r) || boundary(cidx)));
}

TEST_CASE("hermiticity of the elementary operators") {
  auto ops = small_ops();
  for (const Matrix* M : {&ops.x1, &ops.x2, &ops.x3, &ops.p1, &ops.p2, &ops.p3, &ops.J1,
                          &ops.J2, &ops.J3, &ops.pi1, &ops.pi2, &ops.eta1, &ops.eta2})
    REQUIRE(hermiticity_residual(*M) < 1e-12);
}

TEST_CASE("J3 equals a†a − b†b by brute-force matrix algebra") {
  auto ops = small_ops();
  const Matrix lhs = ops.x1 * ops.p2 - ops.x2 * ops.p1;
  const Matrix rhs = ops.a.adjoint() * ops.a - ops.b.adjoint() * ops.b;
  // allow a constant shift, then verify the shift is zero
  const Matrix D = ops.interior * (lhs - rhs) * ops.interior;
  const double shift = (D.trace() / ops.interior.trace()).real();
  REQUIRE(interior_residual(ops, lhs - rhs - shift * Matrix::Identity(ops.dim, ops.dim)) <
          1e-10);
  REQUIRE(std::abs(shift) < 1e-12);
}

TEST_CASE("dimension 27 example and interior ladder identity") {
  PhysicalParams p;
  BasisConfig b;
  b.Na = b.Nb = b.Nc = 2;
  b.buffer = 1;
  auto ops = build_operator_set(p, b);
  REQUIRE(ops.dim == 27);
  const Matrix I = Matrix::Identity(27, 27);
  REQUIRE(interior_residual(ops, commutator(ops.a, ops.a.adjoint()) - I) < 1e-12);
}

TEST_CASE("dimension cap is enforced and env-overridable") {
  PhysicalParams p;
  BasisConfig b;
  b.Na = 40;
  b.Nb = 40;
  b.Nc = 40;
  REQUIRE_THROWS_AS(build_operator_set(p, b), std::runtime_error);
  setenv("LANDAU_FACTOR_DIM_CAP", "50", 1);
  BasisConfig small;
  small.Na = 3;
  small.Nb = 3;
  small.Nc = 3;
  REQUIRE_THROWS_AS(build_operator_set(p, small), std::runtime_error);
  unsetenv("LANDAU_FACTOR_DIM_CAP");
  REQUIRE_NOTHROW(build_operator_set(p, small));
}

TEST_CASE("operator polynomial basics") {
  auto ops = small_ops();
  const Matrix X = ops.x3 - ops.params.L * Matrix::Identity(ops.dim, ops.dim);
  REQUIRE(operator_polynomial(X, {0}).norm() == 0.0);
  REQUIRE((operator_polynomial(X, {1}) - Matrix::Identity(ops.dim, ops.dim)).norm() == 0.0);
  const Matrix q = operator_polynomial(X, {0, 0, 1});
  REQUIRE((q - X * X).norm() < 1e-12);
  std::vector<double> too_long(6, 1.0);
  REQUIRE_THROWS_AS(operator_polynomial(X, too_long), std::invalid_argument);
}

TEST_CASE("harmonic ground energy from the operator polynomial") {
  // axial-only basis: p3²/2m + ½ k ξ² has ground energy ½√(k/m)
  PhysicalParams p;
  p.m = 1.5;
  const double k = 3.7;
  p.v = {0, 0, k / 2, 0, 0};
  BasisConfig b;
  b.Na = 0;
  b.Nb = 0;
  b.Nc = 24;
  b.buffer = 2;
  auto ops = build_operator_set(p, b);
  const Matrix xi = ops.x3 - p.L * Matrix::Identity(ops.dim, ops.dim);
  const Matrix H = ops.p3 * ops.p3 / (2 * p.m) + operator_polynomial(xi, {0, 0, k / 2});
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  REQUIRE(es.eigenvalues()(0) == Catch::Approx(0.5 * std::sqrt(k / p.m)).epsilon(1e-6));
}

TEST_CASE("xi0 diagonal matrix elements vanish in the harmonic basis") {
  auto ops = small_ops();
  const Matrix xi = ops.x3 - ops.params.L * Matrix::Identity(ops.dim, ops.dim);
  for (int i = 0; i < ops.dim; ++i) REQUIRE(std::abs(xi(i, i)) < 1e-14);
}

TEST_CASE("ground-state spread follows the inverse-gap law") {
  // |ξ|² on the oscillator ground state is 1/(2√(mk))
  PhysicalParams p;
  p.m = 2.0;
  const double k = 5.0;
  p.v = {0, 0, k / 2, 0, 0};
  BasisConfig b;
  b.Na = 0;
  b.Nb = 0;
  b.Nc = 16;
  b.buffer = 2;
  auto ops = build_operator_set(p, b);
  const Matrix xi2 = ops.xiA * ops.xiA;
  REQUIRE(std::abs(xi2(0, 0).real() - 1.0 / (2 * std::sqrt(p.m * k))) < 1e-8);
}
