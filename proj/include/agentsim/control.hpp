#pragma once

// Cheap stabilizing feedback and the turnpike switching time.
//
// The cheap control u_k = beta (xbar - x_k) - (1/N) sum_l p(x_k,x_l)(x_l-x_k)
// cancels the interaction term, so the mean state obeys the linear dynamics
// xhat' = beta (xbar - xhat). One exponential step of that equation,
//
//   xhat^{n+1} = xhat^n + tau phi1(-beta tau) beta (xbar - xhat^n),
//
// is exact: the deviation from the target contracts by e^{-beta tau} per
// step, and the quadratic Lyapunov function L^n = ||xhat^n - xbar 1||^2 by
// e^{-2 beta tau}. Requiring L <= delta yields the turnpike switch time
// tbar >= ln(delta / L^0) / (-2 beta), after which the control is set to the
// static value zero.

#include "agentsim/dynamics.hpp"
#include "agentsim/matfun.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace agentsim {

struct TurnpikeParams {
  double beta = 12.0;   // feedback gain / Lyapunov decay rate, > 0
  double delta = 2e-4;  // closeness threshold, > 0
  double target = 0.0;  // desired consensus value xbar
  double t_bar = 0.0;   // switch time (filled by planning)
  Eigen::Index n_bar = 0; // switch step index, n_bar * tau >= t_bar
};

/// Phase layout of a cheap-then-static run: cheap feedback on steps
/// n < phase_boundary, the zero static control afterwards.
struct ControlPlan {
  Eigen::Index phase_boundary = 0;
  std::vector<ControlVector> cheap_controls; // one per step n < phase_boundary
  ControlVector static_control;              // identically zero
  // Analytic time derivative of a user-supplied smooth control; unset means
  // piecewise-constant controls, whose derivative is zero.
  std::function<Eigen::VectorXd(double t)> control_derivative;

  const ControlVector& control_at(Eigen::Index n) const {
    return n < phase_boundary ? cheap_controls[static_cast<size_t>(n)]
                              : static_control;
  }
};

/// u'(t_n); zero for the piecewise-constant plans used in the experiments.
inline Eigen::VectorXd control_time_derivative(const ControlPlan& plan,
                                               Eigen::Index n, double tau,
                                               double t0 = 0.0) {
  if (plan.control_derivative)
    return plan.control_derivative(t0 + static_cast<double>(n) * tau);
  return Eigen::VectorXd::Zero(plan.static_control.size());
}

inline ControlVector cheap_control(const AgentState& mean_state, const Kernel& k,
                                   double beta, double target) {
  return beta * (Eigen::VectorXd::Constant(mean_state.size(), target) - mean_state) -
         interaction(mean_state, k);
}

/// Exact propagator of the mean dynamics over one step of size tau.
inline AgentState mean_step_exact(const AgentState& mean_state,
                                  const TurnpikeParams& p, double tau) {
  if (tau <= 0) throw std::invalid_argument("mean_step_exact: tau must be positive");
  const Eigen::VectorXd target = Eigen::VectorXd::Constant(mean_state.size(), p.target);
  return mean_state +
         tau * phi1_scalar(-p.beta * tau) * p.beta * (target - mean_state);
}

/// L = ||x - xbar 1||^2 (squared Euclidean norm of the deviation).
inline double lyapunov(const AgentState& mean_state, double target) {
  return (mean_state.array() - target).matrix().squaredNorm();
}

/// Smallest admissible switch time, ln(delta / L^0) / (-2 beta);
/// zero when the state already satisfies L^0 <= delta.
inline double turnpike_time(const TurnpikeParams& p, const AgentState& mean_state0) {
  if (p.beta <= 0 || p.delta <= 0)
    throw std::invalid_argument("turnpike_time: beta and delta must be positive");
  const double L0 = lyapunov(mean_state0, p.target);
  if (L0 <= p.delta) return 0.0;
  return std::log(p.delta / L0) / (-2.0 * p.beta);
}

/// Smallest n with n * tau >= t_bar. Rounding up preserves L <= delta at the
/// switch; exact grid multiples are recognized with a small relative slack.
inline Eigen::Index snap_to_grid(double t_bar, double tau, Eigen::Index max_steps) {
  if (t_bar < 0 || tau <= 0)
    throw std::invalid_argument("snap_to_grid: need t_bar >= 0 and tau > 0");
  const double q = t_bar / tau;
  const auto n = static_cast<Eigen::Index>(std::ceil(q - 1e-9 * (1.0 + q)));
  if (n > max_steps)
    throw std::out_of_range("snap_to_grid: switch time lies beyond the horizon");
  return n < 0 ? 0 : n;
}

} // namespace agentsim
