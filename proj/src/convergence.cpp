#include "agentsim/convergence.hpp"

#include "agentsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace agentsim {

namespace {

constexpr std::uint64_t kOrderStudyTag = 0x6f726472ull; // "ordr"

Eigen::VectorXd run_deterministic(Method method, const Kernel& kernel,
                                  const Eigen::VectorXd& x0, double T, int steps) {
  const double tau = T / steps;
  // order studies measure the schemes with the exact Jacobian
  const AgentModel model{kernel, Linearization::FullJacobian};
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(x0.size());
  Eigen::VectorXd x = x0;
  for (int n = 0; n < steps; ++n) {
    StepInput s;
    s.x = x;
    s.u = u;
    s.tau = tau;
    s.sigma = 0.0;
    x = step(method, s, model);
  }
  return x;
}

double fit_slope(const std::vector<double>& taus, const std::vector<double>& errors) {
  const auto n = static_cast<double>(taus.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double x = std::log2(taus[i]);
    const double y = std::log2(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

OrderEstimate deterministic_order(Method method, int base_steps,
                                  std::uint64_t seed) {
  if (base_steps < 1) throw std::invalid_argument("deterministic_order: base_steps < 1");
  const int n_agents = 10;
  const double T = 1.0;
  // alpha = 1 keeps the kernel mild (p <= 1), so the dynamics stay smooth and
  // genuinely nonlinear without entering the stiff regime.
  const Kernel kernel = Kernel::symmetric_cs(1.0, 1.0);

  Eigen::VectorXd x0(n_agents);
  for (int a = 0; a < n_agents; ++a)
    x0(a) = 2.0 * rng::uniform01(seed, kOrderStudyTag, 0, 0,
                                 static_cast<std::uint64_t>(a)) -
            1.0;

  const Eigen::VectorXd x1 = run_deterministic(method, kernel, x0, T, base_steps);
  const Eigen::VectorXd x2 = run_deterministic(method, kernel, x0, T, 2 * base_steps);
  const Eigen::VectorXd x4 = run_deterministic(method, kernel, x0, T, 4 * base_steps);

  OrderEstimate est;
  est.taus = {T / base_steps, T / (2 * base_steps)};
  est.errors = {(x1 - x2).norm(), (x2 - x4).norm()};
  est.order = std::log2(est.errors[0] / est.errors[1]);
  return est;
}

OrderEstimate ou_strong_order(Method method, double sigma, int n_paths,
                              int coarsest_steps, int levels, std::uint64_t seed) {
  if (levels < 2) throw std::invalid_argument("ou_strong_order: need >= 2 levels");
  const double T = 1.0;
  const double x0 = 1.0;
  const int finest_steps = coarsest_steps << (levels - 1);
  const int refine = 16; // reference grid is 16x finer than the finest level
  const int ref_steps = finest_steps * refine;
  const double h_ref = T / ref_steps;

  LinearModel ou{Eigen::MatrixXd::Constant(1, 1, -1.0)};
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(1);

  OrderEstimate est;
  est.taus.resize(static_cast<size_t>(levels));
  est.errors.assign(static_cast<size_t>(levels), 0.0);
  for (int l = 0; l < levels; ++l)
    est.taus[static_cast<size_t>(l)] = T / (coarsest_steps << l);

  std::vector<double> fine(static_cast<size_t>(ref_steps));
  for (int p = 0; p < n_paths; ++p) {
    for (int n = 0; n < ref_steps; ++n)
      fine[static_cast<size_t>(n)] =
          std::sqrt(h_ref) * rng::normal(seed, kOrderStudyTag,
                                         static_cast<std::uint64_t>(p),
                                         static_cast<std::uint64_t>(n), 1);

    // Reference: exponential scheme on the fine grid.
    double x_ref = x0;
    for (int n = 0; n < ref_steps; ++n) {
      StepInput s;
      s.x = Eigen::VectorXd::Constant(1, x_ref);
      s.u = u;
      s.dW = Eigen::VectorXd::Constant(1, fine[static_cast<size_t>(n)]);
      s.tau = h_ref;
      s.sigma = sigma;
      x_ref = step_serb(s, ou)(0);
    }

    for (int l = 0; l < levels; ++l) {
      const int steps = coarsest_steps << l;
      const int block = ref_steps / steps;
      const double h = T / steps;
      double x = x0;
      for (int n = 0; n < steps; ++n) {
        double dW = 0.0;
        for (int j = 0; j < block; ++j)
          dW += fine[static_cast<size_t>(n * block + j)];
        StepInput s;
        s.x = Eigen::VectorXd::Constant(1, x);
        s.u = u;
        s.dW = Eigen::VectorXd::Constant(1, dW);
        s.tau = h;
        s.sigma = sigma;
        x = step(method, s, ou)(0);
      }
      const double err = x - x_ref;
      est.errors[static_cast<size_t>(l)] += err * err;
    }
  }

  for (auto& e : est.errors) e = std::sqrt(e / n_paths);
  est.order = fit_slope(est.taus, est.errors);
  return est;
}

} // namespace agentsim
