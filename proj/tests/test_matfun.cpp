#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agentsim/matfun.hpp"
#include "oracles.hpp"

#include <random>

using namespace agentsim;

TEST_CASE("expm of the zero matrix is the identity") {
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(2, 2);
  CHECK((expm(Z) - Eigen::MatrixXd::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = -1.0;
  const Eigen::MatrixXd E = expm(D);
  CHECK(E(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(E(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(E(0, 1)) < 1e-15);
  CHECK(std::abs(E(1, 0)) < 1e-15);
}

TEST_CASE("expm matches the Taylor oracle on a random 10x10 with norm 20") {
  std::mt19937_64 gen(1234);
  const Eigen::MatrixXd A = oracles::random_matrix(10, 20.0, gen);
  const Eigen::MatrixXd ref = oracles::expm_taylor(A);
  CHECK((expm(A) - ref).norm() <= 1e-10 * ref.norm());
}

TEST_CASE("expm rejects bad input") {
  CHECK_THROWS_AS(expm(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm(bad), std::invalid_argument);
  CHECK_THROWS_AS(expm(Eigen::MatrixXd()), std::invalid_argument);
}

TEST_CASE("phi1 basics") {
  // phi1(0) = I
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
  CHECK((phi1(Z) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-15);

  // scalar value (1 - e^{-0.24}) / 0.24
  CHECK(phi1_scalar(-0.24) == doctest::Approx(0.88905057888936079).epsilon(1e-13));
  Eigen::MatrixXd s(1, 1);
  s(0, 0) = -0.24;
  CHECK(phi1(s)(0, 0) == doctest::Approx(0.88905057888936079).epsilon(1e-13));

  // equals A^{-1}(e^A - I) for an invertible random 5x5
  std::mt19937_64 gen(99);
  const Eigen::MatrixXd A =
      oracles::random_matrix(5, 2.0, gen) + Eigen::MatrixXd::Identity(5, 5);
  const Eigen::MatrixXd ref = A.partialPivLu().solve(
      (oracles::expm_taylor(A) - Eigen::MatrixXd::Identity(5, 5)).eval());
  CHECK((phi1(A) - ref).norm() <= 1e-10 * (1.0 + ref.norm()));
}

TEST_CASE("phi2 basics") {
  // phi2(0) = I/2
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
  CHECK((phi2(Z) - 0.5 * Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-15);

  // scalar phi2(1) = e - 2
  CHECK(phi2_scalar(1.0) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-13));

  // quadrature oracle on a random 4x4
  std::mt19937_64 gen(7);
  const Eigen::MatrixXd A = oracles::random_matrix(4, 3.0, gen);
  const Eigen::MatrixXd ref = oracles::phi_quadrature(A, 2);
  CHECK((phi2(A) - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
}

TEST_CASE("phi1 quadrature cross-check") {
  std::mt19937_64 gen(8);
  const Eigen::MatrixXd A = oracles::random_matrix(5, 4.0, gen);
  const Eigen::MatrixXd ref = oracles::phi_quadrature(A, 1);
  CHECK((phi1(A) - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
}

TEST_CASE("phi recurrence identities on random matrices") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> size(2, 40);
  std::uniform_real_distribution<double> norm(0.1, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = size(gen);
    const Eigen::MatrixXd A = oracles::random_matrix(n, norm(gen), gen);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd E = expm(A);
    const auto [p1, p2] = phi12(A);

    CHECK((A * p1 - (E - I)).norm() <= 1e-10 * (1.0 + E.norm()));
    CHECK((A * p2 - (p1 - I)).norm() <= 1e-10 * (1.0 + p1.norm()));
    CHECK((phi1(A) - p1).norm() <= 1e-11 * (1.0 + p1.norm()));
  }
}

TEST_CASE("scalar phi1 agrees with (e^x - 1)/x including tiny arguments") {
  for (double x : {-3.0, -0.7, -1e-3, -2e-6, 1e-9, 5e-6, 1e-2, 0.9, 4.0}) {
    double ref;
    if (std::abs(x) < 1e-5)
      ref = 1.0 + x / 2.0 + x * x / 6.0; // series, naive form cancels
    else
      ref = (std::exp(x) - 1.0) / x;
    CHECK(phi1_scalar(x) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("scalar contraction identity 1 - tau beta phi1(-beta tau) = e^{-beta tau}") {
  for (double beta : {0.1, 1.0, 12.0, 100.0})
    for (double tau : {1e-4, 0.02, 0.5}) {
      const double lhs = 1.0 - tau * beta * phi1_scalar(-beta * tau);
      CHECK(std::abs(lhs - std::exp(-beta * tau)) <= 1e-13);
    }
}

TEST_CASE("phi actions agree with explicit products") {
  std::mt19937_64 gen(31);
  const Eigen::MatrixXd A = oracles::random_matrix(12, 15.0, gen);
  Eigen::VectorXd v(12), w(12);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    v(i) = dist(gen);
    w(i) = dist(gen);
  }
  const auto [p1, p2] = phi12(A);
  CHECK((phi1_apply(A, v) - p1 * v).norm() <= 1e-11 * (1.0 + (p1 * v).norm()));
  const Eigen::VectorXd combined = p1 * v + p2 * w;
  CHECK((phi12_apply(A, v, w) - combined).norm() <= 1e-11 * (1.0 + combined.norm()));
}

TEST_CASE("small-norm series branch stays consistent with the identity") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  A(0, 1) = 1e-9;
  A(2, 3) = -1e-9;
  A(1, 1) = 1e-10;
  const auto [p1, p2] = phi12(A);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
  CHECK((A * p1 - (expm(A) - I)).norm() <= 1e-12);
  CHECK((A * p2 - (p1 - I)).norm() <= 1e-12);
}
