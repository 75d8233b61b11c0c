#include "qotto/quantum.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qotto;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (m + m.adjoint().eval());
}

Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("eigendecomposition of a diagonal matrix sorts ascending") {
  const Spectrum sp = eig_hermitian(diag3(1.0, 0.0, 2.0));
  CHECK(sp.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sp.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(sp.eigenvalues[2] == doctest::Approx(2.0));
  // eigenvectors are basis vectors in eigenvalue order
  CHECK(std::abs(sp.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(sp.eigenvectors(0, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(sp.eigenvectors(2, 2)) == doctest::Approx(1.0));
}

TEST_CASE("pauli-x spectrum") {
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  const Spectrum sp = eig_hermitian(sx);
  CHECK(sp.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(sp.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("random hermitian reconstruction and orthonormality") {
  std::mt19937_64 rng(11);
  const Matrix h = random_hermitian(rng, 9);
  const Spectrum sp = eig_hermitian(h);
  Matrix rebuilt = sp.eigenvectors *
                   sp.eigenvalues.cast<Complex>().asDiagonal() *
                   sp.eigenvectors.adjoint();
  CHECK(max_abs(rebuilt - h) < 1e-10);
  CHECK(unitarity_error(sp.eigenvectors) < 1e-12);
  for (int k = 1; k < 9; ++k)
    CHECK(sp.eigenvalues[k] >= sp.eigenvalues[k - 1]);
}

TEST_CASE("non-hermitian input is rejected with a diagnostic") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
}

TEST_CASE("gibbs state limits") {
  const Matrix h = diag3(0.0, 1.0 / 3.0, 1.0);
  SUBCASE("beta = 0 is maximally mixed") {
    const DensityMatrix rho = gibbs_state(h, 0.0);
    for (int k = 0; k < 3; ++k)
      CHECK(rho.populations()[k] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("beta = infinity projects on the ground space") {
    const DensityMatrix rho =
        gibbs_state(h, std::numeric_limits<double>::infinity());
    CHECK(rho.populations()[0] == doctest::Approx(1.0));
    CHECK(rho.populations()[1] == doctest::Approx(0.0));
  }
  SUBCASE("degenerate ground space is filled uniformly") {
    const DensityMatrix rho =
        gibbs_state(diag3(0.0, 0.0, 1.0), std::numeric_limits<double>::infinity());
    CHECK(rho.populations()[0] == doctest::Approx(0.5));
    CHECK(rho.populations()[1] == doctest::Approx(0.5));
    CHECK(rho.populations()[2] == doctest::Approx(0.0));
  }
  SUBCASE("negative beta is rejected") {
    CHECK_THROWS_AS(gibbs_state(h, -0.5), std::invalid_argument);
  }
}

TEST_CASE("gibbs populations match the scalar Boltzmann oracle") {
  const double beta = 6.66;
  const double e[3] = {0.0, 1.0 / 3.0, 1.0};
  const DensityMatrix rho = gibbs_state(diag3(e[0], e[1], e[2]), beta);
  double z = 0.0;
  for (double ek : e) z += std::exp(-beta * ek);
  for (int k = 0; k < 3; ++k)
    CHECK(rho.populations()[k] ==
          doctest::Approx(std::exp(-beta * e[k]) / z).epsilon(1e-13));
}

TEST_CASE("von Neumann entropy") {
  SUBCASE("pure state has zero entropy") {
    Vector psi = Vector::Zero(3);
    psi[1] = 1.0;
    CHECK(von_neumann_entropy(DensityMatrix::pure(psi)) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("maximally mixed qutrit has entropy ln 3") {
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(3)) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-14));
  }
  SUBCASE("thermal entropy matches the thermodynamic identity") {
    const double beta = 3.28;
    const Matrix h = diag3(0.0, 1.0 / 3.0, 1.0);
    const DensityMatrix rho = gibbs_state(h, beta);
    // S = beta <H - E0> + ln sum exp(-beta (E - E0))
    double z = 0.0;
    for (double ek : {0.0, 1.0 / 3.0, 1.0}) z += std::exp(-beta * ek);
    const double expected = beta * expectation_value(h, rho) + std::log(z);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("tensor product conventions") {
  std::mt19937_64 rng(23);
  const Matrix a = random_hermitian(rng, 3);
  const Matrix b = random_hermitian(rng, 4);
  SUBCASE("identity on the right makes block copies") {
    const Matrix t = tensor_product(a, Matrix::Identity(2, 2));
    CHECK(t(0, 0) == a(0, 0));
    CHECK(t(1, 1) == a(0, 0));
    CHECK(t(0, 2) == a(0, 1));  // left factor is the most significant index
    CHECK(t(0, 3) == Complex(0.0, 0.0));
  }
  SUBCASE("trace is multiplicative") {
    const Complex lhs = tensor_product(a, b).trace();
    const Complex rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  SUBCASE("two thermal qutrits have product populations") {
    const double beta = 2.5;
    const Matrix h = diag3(0.0, 0.4, 1.0);
    const DensityMatrix one = gibbs_state(h, beta);
    const Matrix two = tensor_product(one.matrix(), one.matrix());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(two(3 * i + j, 3 * i + j).real() ==
              doctest::Approx(one.populations()[i] * one.populations()[j])
                  .epsilon(1e-13));
  }
  SUBCASE("oversized dense products are refused") {
    CHECK_THROWS_AS(
        tensor_product(Matrix::Identity(200, 200), Matrix::Identity(200, 200)),
        std::invalid_argument);
  }
}

namespace {

// pulse with unit swap area over [0, tau]
double pulse(double t, double tau) {
  if (t <= 0.0 || t >= tau) return 0.0;
  return (kPi * kPi / (4.0 * tau)) * std::sin(kPi * t / tau);
}

TimeHamiltonian two_level_block(double e_n, double e_m, double tau) {
  return [=](double t) {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = e_n;
    h(1, 1) = e_m;
    h(0, 1) = pulse(t, tau);
    h(1, 0) = h(0, 1);
    return h;
  };
}

}  // namespace

TEST_CASE("commuting diagonal schedule never moves populations") {
  // diagonal time-dependent family: any ramp speed is population-preserving
  auto h = [](double t) {
    Matrix m = Matrix::Zero(3, 3);
    m(1, 1) = 0.3 + 40.0 * t * t;  // fast, nonlinear, still diagonal
    m(2, 2) = 1.0;
    return m;
  };
  RealVector pops(3);
  pops << 0.5, 0.3, 0.2;
  const DensityMatrix rho = DensityMatrix::diagonal(pops);
  for (double t1 : {0.01, 1.0, 50.0}) {
    const PropagationResult out = propagate(rho, h, 0.0, t1, 64);
    CHECK(out.converged);
    CHECK((out.state.populations() - pops).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("fast pulse swaps a detuned two-level block within 1e-3") {
  const double tau = 1e-3;
  RealVector pops(2);
  pops << 0.8, 0.2;
  const PropagationResult out = propagate(
      DensityMatrix::diagonal(pops), two_level_block(4.0 / 3.0, 1.0, tau), 0.0,
      tau, 2000);
  REQUIRE(out.converged);
  CHECK(std::abs(out.state.populations()[0] - 0.2) < 1e-3);
  CHECK(std::abs(out.state.populations()[1] - 0.8) < 1e-3);
}

TEST_CASE("degenerate block follows the exact pulse-area solution") {
  // equal diagonal entries: transition probability is sin^2 of the pulse area
  const double tau = 0.7;
  RealVector pops(2);
  pops << 1.0, 0.0;
  SUBCASE("full pulse transfers everything") {
    const PropagationResult out = propagate(
        DensityMatrix::diagonal(pops), two_level_block(0.7, 0.7, tau), 0.0, tau,
        2000);
    REQUIRE(out.converged);
    CHECK(std::abs(out.state.populations()[1] - 1.0) < 1e-9);
  }
  SUBCASE("half pulse transfers sin^2(pi/4)") {
    const PropagationResult out = propagate(
        DensityMatrix::diagonal(pops), two_level_block(0.7, 0.7, tau), 0.0,
        tau / 2.0, 2000);
    REQUIRE(out.converged);
    CHECK(out.state.populations()[1] == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("propagation preserves entropy and unitarity") {
  const double tau = 1.0;
  RealVector pops(2);
  pops << 0.7, 0.3;
  const DensityMatrix rho = DensityMatrix::diagonal(pops);
  const PropagationResult out =
      propagate(rho, two_level_block(4.0 / 3.0, 1.0, tau), 0.0, tau, 500);
  REQUIRE(out.converged);
  CHECK(unitarity_error(out.propagator) < 1e-9);
  CHECK(std::abs(von_neumann_entropy(out.state) - von_neumann_entropy(rho)) <
        1e-8);
}

TEST_CASE("propagation is linear in the state") {
  const double tau = 0.8;
  const TimeHamiltonian h = two_level_block(1.2, 0.9, tau);
  RealVector p1(2), p2(2);
  p1 << 0.9, 0.1;
  p2 << 0.25, 0.75;
  const double alpha = 0.37;
  const DensityMatrix rho1 = DensityMatrix::diagonal(p1);
  const DensityMatrix rho2 = DensityMatrix::diagonal(p2);
  const DensityMatrix mix = DensityMatrix::from_matrix(
      alpha * rho1.matrix() + (1.0 - alpha) * rho2.matrix());
  // fixed step count: all three states see the identical propagator
  const Matrix lhs = propagate(mix, h, 0.0, tau, 400, 0).state.matrix();
  const Matrix rhs =
      alpha * propagate(rho1, h, 0.0, tau, 400, 0).state.matrix() +
      (1.0 - alpha) * propagate(rho2, h, 0.0, tau, 400, 0).state.matrix();
  CHECK(max_abs(lhs - rhs) < 1e-10);
}

TEST_CASE("step halving shows second-order convergence") {
  const double tau = 1.0;
  const TimeHamiltonian h = two_level_block(4.0 / 3.0, 1.0, tau);
  RealVector p(2);
  p << 0.8, 0.2;
  const DensityMatrix rho = DensityMatrix::diagonal(p);
  auto pops_at = [&](int steps) {
    return propagate(rho, h, 0.0, tau, steps, 0).state.populations();
  };
  const RealVector a = pops_at(100), b = pops_at(200), c = pops_at(400);
  const double d1 = (a - b).cwiseAbs().maxCoeff();
  const double d2 = (b - c).cwiseAbs().maxCoeff();
  CHECK(d1 / d2 >= 3.0);
}

TEST_CASE("unresolved schedules are flagged, not silently accepted") {
  // one step across a full pulse cannot stabilize the populations
  const double tau = 5.0;
  RealVector p(2);
  p << 0.8, 0.2;
  const PropagationResult out = propagate(
      DensityMatrix::diagonal(p), two_level_block(4.0 / 3.0, 1.0, tau), 0.0,
      tau, 1, 2);
  CHECK_FALSE(out.converged);
  CHECK(out.population_delta > 1e-9);
}

TEST_CASE("density matrix validation") {
  Matrix bad = Matrix::Identity(2, 2);  // trace 2
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), std::invalid_argument);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(neg), std::invalid_argument);
}
