#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agentsim/cost.hpp"

#include <random>

using namespace agentsim;

namespace {

Eigen::VectorXd random_vec(int n, std::mt19937_64& gen, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = dist(gen);
  return x;
}

} // namespace

TEST_CASE("running cost basics") {
  CostParams p{1.0, 0.7, 1};
  CHECK(running_cost({Eigen::VectorXd::Constant(1, 0.7)}, Eigen::VectorXd::Zero(1), p) == 0.0);
  CHECK(running_cost({Eigen::VectorXd::Constant(1, 1.7)}, Eigen::VectorXd::Zero(1), p) ==
        doctest::Approx(1.0));

  // N = 2, x = (xbar+1, xbar-1), u = (1,1), gamma = 0.5
  CostParams p2{0.5, 0.2, 2};
  Eigen::VectorXd x(2), u(2);
  x << 1.2, -0.8;
  u << 1.0, 1.0;
  CHECK(running_cost({x}, u, p2) == doctest::Approx(1.5).epsilon(1e-14));

  CHECK_THROWS_AS(running_cost({}, u, p2), std::invalid_argument);
}

TEST_CASE("total cost uses the left rectangle rule") {
  // single agent, single path, two steps at constant deviation 1
  CostParams p{1.0, 0.0, 1};
  Ensemble e;
  Eigen::MatrixXd traj(3, 1);
  traj << 1.0, 1.0, 0.0; // the final state is excluded by the left rule
  e.paths.push_back(traj);
  ControlPlan plan;
  plan.static_control = Eigen::VectorXd::Zero(1);
  CHECK(total_cost(e, plan, 0.5, p) == doctest::Approx(1.0).epsilon(1e-14));

  // constant running cost c over m steps integrates to (T - t0) c:
  // m = 10, tau = 0.1, c = 4 for a single agent parked at deviation 2
  Ensemble e2;
  e2.paths.push_back(Eigen::MatrixXd::Constant(11, 1, 2.0));
  CHECK(total_cost(e2, plan, 0.1, p) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("dissipation function alpha") {
  CostParams p{1.0, 0.0, 100};
  CHECK(alpha(0.0, p) == 0.0);
  CHECK(alpha(10.0, p) == doctest::Approx(0.5));
  CHECK(alpha(2.0, p) == doctest::Approx(4.0 * alpha(1.0, p)));
  CHECK(alpha(3.0, p) > alpha(2.9, p));
  CHECK_THROWS_AS(alpha(-1.0, p), std::invalid_argument);
}

TEST_CASE("dissipativity margin is non-negative for gamma in (0,1]") {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> gamma_dist(1e-6, 1.0);
  const int agents[] = {2, 10, 100};
  for (int n : agents) {
    const Eigen::VectorXd tilde_x = Eigen::VectorXd::Constant(n, 0.7);
    const Eigen::VectorXd tilde_u = Eigen::VectorXd::Zero(n);
    for (int trial = 0; trial < 3000; ++trial) {
      CostParams p{gamma_dist(gen), 0.7, n};
      const Eigen::VectorXd x = random_vec(n, gen, 3.0);
      const Eigen::VectorXd u = random_vec(n, gen, 5.0);
      REQUIRE(dissipativity_margin({x}, u, tilde_x, tilde_u, p) >= -1e-12);
    }
  }
}

TEST_CASE("dissipativity margin hand algebra for u = 0") {
  // margin = (1 - gamma/2)/N ||x - xt||^2 when the control is zero
  CostParams p{0.5, 0.0, 4};
  Eigen::VectorXd x(4);
  x << 1.0, -1.0, 2.0, 0.5;
  const Eigen::VectorXd tilde_x = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
  const double expected = (1.0 - 0.25) * x.squaredNorm() / 4.0;
  CHECK(dissipativity_margin({x}, u, tilde_x, u, p) ==
        doctest::Approx(expected).epsilon(1e-14));

  CHECK(dissipativity_margin({tilde_x}, u, tilde_x, u, p) == 0.0);
  CostParams bad{1.5, 0.0, 4};
  CHECK_THROWS_AS(dissipativity_margin({x}, u, tilde_x, u, bad),
                  std::invalid_argument);
}

TEST_CASE("theorem constants") {
  // M_p = 0 gives beta_p = 2 beta^2
  const TheoremConstants a = theorem_constants(12.0, 0.0, 1.0, 0.02, 50, 0.5);
  CHECK(a.beta_p == doctest::Approx(288.0));

  // lambda = 0.5, m = 50, tau = 0.02: C1 = C0^2 / (0.02 * 25) = 2 C0^2
  CHECK(a.C1 == doctest::Approx(2.0 * a.C0 * a.C0).epsilon(1e-14));

  // large tau: denominator tends to gamma
  const TheoremConstants b = theorem_constants(12.0, 0.0, 1.0, 50.0, 50, 0.5);
  CHECK(b.C0 == doctest::Approx(2.0 * 50.0 * (1.0 + 288.0)).epsilon(1e-10));

  CHECK_THROWS_AS(theorem_constants(12.0, 0.0, 1.5, 0.02, 50, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(theorem_constants(12.0, 0.0, 1.0, 0.02, 1, 0.5),
                  std::invalid_argument); // floor((1-lambda) m) = 0
  CHECK_THROWS_AS(theorem_constants(-1.0, 0.0, 1.0, 0.02, 50, 0.5),
                  std::invalid_argument);
}

TEST_CASE("turnpike theorem margin is trivially met at the static pair") {
  CostParams p{1.0, 0.7, 3};
  Ensemble e;
  Eigen::MatrixXd traj = Eigen::MatrixXd::Constant(11, 3, 0.7);
  traj.row(0).setZero(); // start away from the target
  e.paths.push_back(traj);
  ControlPlan plan;
  plan.static_control = Eigen::VectorXd::Zero(3);

  const TheoremConstants c = theorem_constants(12.0, 100.0, 1.0, 0.1, 10, 0.5);
  const double margin = turnpike_theorem_check(e, plan, c, 0.5, 0.1, p);
  const double expected = c.C1 * alpha(std::sqrt(3.0) * 0.7, p);
  CHECK(margin == doctest::Approx(expected).epsilon(1e-12));
}
