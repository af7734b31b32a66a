#pragma once

// Discrete cost functional and the empirical inequality checkers.
//
// Running cost at one step, averaged over the ensemble realizations:
//   c(x, u) = E[(1/N) sum_k (|x_k - xbar|^2 + gamma |u_k|^2)],
// total cost by the left rectangle rule: tau * sum_{n=0}^{m-1} c(x^n, u^n).
//
// The dissipation function is alpha(y) = gamma / (2N) y^2 with gamma in
// (0, 1]. The checkers return signed margins (bound minus attained value),
// never booleans; tolerance policy lives with the callers.

#include "agentsim/control.hpp"
#include "agentsim/ensemble.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace agentsim {

struct CostParams {
  double gamma = 1.0;  // control penalization, in (0, 1]
  double target = 0.0; // xbar
  Eigen::Index n_agents = 0;
};

/// beta_p = 2((beta + M_p)^2 + M_p^2), C0 = 2 tau (1 + gamma beta_p) /
/// (gamma (1 - e^{-2 beta tau})), C1 = C0^2 / (tau floor((1 - lambda) m)).
struct TheoremConstants {
  double beta_p = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
};

namespace detail {
inline void check_gamma(double gamma, const char* who) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument(std::string(who) + ": gamma must lie in (0, 1]");
}
} // namespace detail

inline double alpha(double y, const CostParams& p) {
  if (y < 0) throw std::invalid_argument("alpha: argument must be non-negative");
  return p.gamma / (2.0 * static_cast<double>(p.n_agents)) * y * y;
}

inline double running_cost(const std::vector<AgentState>& ensemble_states,
                           const ControlVector& controls, const CostParams& p) {
  if (ensemble_states.empty())
    throw std::invalid_argument("running_cost: empty ensemble");
  const double n = static_cast<double>(p.n_agents);
  double acc = 0.0;
  for (const auto& x : ensemble_states)
    acc += (x.array() - p.target).matrix().squaredNorm() / n;
  acc /= static_cast<double>(ensemble_states.size());
  return acc + p.gamma * controls.squaredNorm() / n;
}

inline double total_cost(const Ensemble& e, const ControlPlan& plan, double tau,
                         const CostParams& p) {
  const Eigen::Index m = e.num_steps();
  if (m < 1) throw std::invalid_argument("total_cost: ensemble has no steps");
  double acc = 0.0;
  for (Eigen::Index n = 0; n < m; ++n)
    acc += running_cost(e.states_at(n), plan.control_at(n), p);
  return tau * acc;
}

/// Per-sample margin c(x, u) - alpha(||x - xt|| + ||u - ut||), ensemble
/// averaged; non-negative for gamma in (0, 1] by the dissipativity bound.
inline double dissipativity_margin(const std::vector<AgentState>& ensemble_states,
                                   const ControlVector& controls,
                                   const AgentState& tilde_x,
                                   const ControlVector& tilde_u,
                                   const CostParams& p) {
  detail::check_gamma(p.gamma, "dissipativity_margin");
  if (ensemble_states.empty())
    throw std::invalid_argument("dissipativity_margin: empty ensemble");
  const double n = static_cast<double>(p.n_agents);
  double acc = 0.0;
  for (const auto& x : ensemble_states) {
    const double c = (x.array() - p.target).matrix().squaredNorm() / n +
                     p.gamma * controls.squaredNorm() / n;
    const double dev = (x - tilde_x).norm() + (controls - tilde_u).norm();
    acc += c - alpha(dev, p);
  }
  return acc / static_cast<double>(ensemble_states.size());
}

inline TheoremConstants theorem_constants(double beta, double M_p, double gamma,
                                          double tau, Eigen::Index m,
                                          double lambda) {
  detail::check_gamma(gamma, "theorem_constants");
  if (beta <= 0 || tau <= 0 || M_p < 0)
    throw std::invalid_argument("theorem_constants: need beta > 0, tau > 0, M_p >= 0");
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("theorem_constants: lambda must lie in (0, 1)");
  const auto tail = static_cast<Eigen::Index>(
      std::floor((1.0 - lambda) * static_cast<double>(m)));
  if (tail < 1)
    throw std::invalid_argument("theorem_constants: floor((1 - lambda) m) is zero");
  TheoremConstants c;
  c.beta_p = 2.0 * ((beta + M_p) * (beta + M_p) + M_p * M_p);
  c.C0 = 2.0 * tau * (1.0 + gamma * c.beta_p) /
         (gamma * (1.0 - std::exp(-2.0 * beta * tau)));
  c.C1 = c.C0 * c.C0 / (tau * static_cast<double>(tail));
  return c;
}

/// Turnpike tail-sum margin: C1 E[alpha(||x^0 - xt||)] minus
/// E[sum_{n=floor((1-lambda)m)}^{m-1} tau alpha(||x^n - xt|| + ||u^n - ut||)].
/// Non-negative means the bound holds on this sample; callers decide what a
/// negative margin means for trajectories the theorem does not bind.
inline double turnpike_theorem_check(const Ensemble& e, const ControlPlan& plan,
                                     const TheoremConstants& consts, double lambda,
                                     double tau, const CostParams& p) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("turnpike_theorem_check: lambda must lie in (0, 1)");
  if (tau <= 0) throw std::invalid_argument("turnpike_theorem_check: tau must be positive");
  const Eigen::Index m = e.num_steps();
  const auto start = static_cast<Eigen::Index>(
      std::floor((1.0 - lambda) * static_cast<double>(m)));
  const Eigen::Index paths = e.num_paths();
  const Eigen::VectorXd tilde_x =
      Eigen::VectorXd::Constant(e.num_agents(), p.target);

  double lhs = 0.0;
  double rhs = 0.0;
  for (Eigen::Index pi = 0; pi < paths; ++pi) {
    rhs += alpha((e.state(pi, 0) - tilde_x).norm(), p);
    for (Eigen::Index n = start; n < m; ++n) {
      const double dev =
          (e.state(pi, n) - tilde_x).norm() + plan.control_at(n).norm();
      lhs += tau * alpha(dev, p);
    }
  }
  return (consts.C1 * rhs - lhs) / static_cast<double>(paths);
}

} // namespace agentsim
