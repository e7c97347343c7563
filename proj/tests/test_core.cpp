#include "doctest.h"

#include "respond/core.hpp"

#include <cmath>
#include <sstream>

using namespace respond;

namespace {

Matrix diag(std::initializer_list<double> xs) {
  Matrix m = Matrix::Zero(static_cast<Index>(xs.size()), static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) m(i, i) = x, ++i;
  return m;
}

Matrix qubit_pair_h0(double omega, double g) {
  Matrix sm(2, 2);
  sm << 0, 1, 0, 0;
  const Matrix sz = diag({-1.0, 1.0});
  const Matrix i2 = identity(2);
  const Matrix sp = sm.adjoint();
  return 0.5 * omega * (kron(sz, i2) + kron(i2, sz)) + g * (kron(sp, sm) + kron(sm, sp));
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("identity has one degenerate group") {
  const EigenSystem e = eigendecompose_hermitian(identity(3));
  CHECK(e.values.isApprox(RealVector::Ones(3)));
  REQUIRE(e.groups.size() == 1);
  CHECK(e.groups[0] == std::vector<Index>{0, 1, 2});
}

TEST_CASE("qubit pair spectrum") {
  const EigenSystem e = eigendecompose_hermitian(qubit_pair_h0(1000.0, 200.0));
  const double expected[] = {-1000.0, -200.0, 200.0, 1000.0};
  for (int i = 0; i < 4; ++i) CHECK(e.values(i) == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(e.groups.size() == 4);
  CHECK((e.vectors.adjoint() * e.vectors - identity(4)).norm() < 1e-10);
}

TEST_CASE("constructed degeneracy") {
  const EigenSystem e = eigendecompose_hermitian(diag({0.0, 0.0, 5.0}), 1e-9);
  REQUIRE(e.groups.size() == 2);
  CHECK(e.groups[0].size() == 2);
  CHECK(e.groups[1] == std::vector<Index>{2});
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  try {
    eigendecompose_hermitian(a);
    FAIL("expected NonHermitianInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
}

TEST_CASE("eigen reconstruction") {
  std::mt19937_64 rng(7);
  for (Index d = 1; d <= 8; ++d) {
    const Matrix h = random_hermitian(d, rng);
    const EigenSystem e = eigendecompose_hermitian(h);
    const Matrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((back - h).norm() <= 1e-10 * h.norm());
  }
}

TEST_CASE("expectation values") {
  CHECK(std::abs(expectation(maximally_mixed(3), identity(3)) - 1.0) < 1e-15);
  Vector psi = Vector::Zero(2);
  psi(0) = 1.0;
  CHECK(std::abs(expectation(pure_state(psi), diag({3.0, 7.0})) - 3.0) < 1e-15);
  // Two-level Gibbs weights at omega / T = 1: <sigma_z> = (e^{-1/2} - e^{1/2}) / (e^{-1/2} + e^{1/2}).
  const double omega = 1.3;
  const Matrix sz = diag({-1.0, 1.0});
  const Complex v = expectation(gibbs_state(0.5 * omega * sz, omega), sz);
  CHECK(v.real() == doctest::Approx(-std::tanh(0.5)).epsilon(1e-14));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("expectation is linear and conjugate symmetric") {
  std::mt19937_64 rng(11);
  const DensityMatrix rho = random_density_matrix(4, rng);
  const Matrix a = random_matrix(4, rng);
  const Matrix b = random_matrix(4, rng);
  const Complex z(0.3, -1.2);
  CHECK(std::abs(expectation(rho, a + z * b) - expectation(rho, a) - z * expectation(rho, b)) < 1e-13);
  CHECK(std::abs(std::conj(expectation(rho, a)) - expectation(rho, a.adjoint())) < 1e-13);
}

TEST_CASE("expectation dimension mismatch") {
  try {
    expectation(maximally_mixed(2), identity(3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), Error);
  CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), Error);
  CHECK_NOTHROW(DensityMatrix(diag({0.25, 0.75})));
}

TEST_CASE("vectorization round trip on matrix units") {
  for (Index d = 1; d <= 8; ++d) {
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        Matrix e = Matrix::Zero(d, d);
        e(i, j) = 1.0;
        const Vector v = vec(e);
        CHECK(v(i + j * d) == Complex(1.0, 0.0));
        CHECK(unvec(v, d) == e);
      }
    }
  }
}

TEST_CASE("identity map vectorizes to the identity") {
  const Matrix m = vectorize_superoperator([](const Matrix& x) { return x; }, 2);
  CHECK((m - identity(4)).norm() < 1e-15);
}

TEST_CASE("commutator superoperator spectrum") {
  const double omega = 2.5;
  const Matrix h = diag({0.0, omega});
  const Matrix m = vectorize_superoperator([&](const Matrix& x) { return commutator(h, x); }, 2);
  Eigen::ComplexEigenSolver<Matrix> es(m);
  std::vector<double> ev;
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-14);
    ev.push_back(es.eigenvalues()(i).real());
  }
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-omega));
  CHECK(std::abs(ev[1]) < 1e-14);
  CHECK(std::abs(ev[2]) < 1e-14);
  CHECK(ev[3] == doctest::Approx(omega));
}

TEST_CASE("nonlinear map is rejected") {
  try {
    vectorize_superoperator([](const Matrix& x) { return Matrix(x.cwiseProduct(x)); }, 2);
    FAIL("expected NonlinearAction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonlinearAction);
  }
}

TEST_CASE("matrix text format round trip") {
  std::mt19937_64 rng(3);
  const Matrix a = random_matrix(3, rng);
  std::stringstream s;
  write_matrix(s, a);
  CHECK(read_matrix(s) == a);
  std::istringstream bad("2\n0 0 1 0\n0 0 1 0\n1 0 0 0\n1 1 0 0\n");
  CHECK_THROWS_AS(read_matrix(bad), Error);
  std::istringstream short_input("2\n0 0 1 0\n");
  CHECK_THROWS_AS(read_matrix(short_input), Error);
}

TEST_CASE("hermitian log clamps singular eigenvalues") {
  const HermitianLog lg = hermitian_log(diag({1.0, 0.0}));
  CHECK(lg.clamped == 1);
  CHECK(std::abs(lg.log(0, 0)) < 1e-15);
  CHECK(lg.log(1, 1).real() == doctest::Approx(std::log(1e-14)));
}

TEST_CASE("gibbs state at zero temperature") {
  const DensityMatrix g = gibbs_state(diag({1.0, 0.0, 0.0}), 0.0);
  CHECK(std::abs(g.matrix()(0, 0)) < 1e-15);
  CHECK(g.matrix()(1, 1).real() == doctest::Approx(0.5));
  CHECK(g.matrix()(2, 2).real() == doctest::Approx(0.5));
}

}  // TEST_SUITE
