#pragma once

// One-step time marching schemes. Every stepper is a deterministic function
// of its inputs: Brownian increments arrive pre-sampled in StepInput, nothing
// is drawn here. The schemes:
//
//   em    x^{n+1} = x^n + tau F(x^n) + sigma dW^n
//   ee    x^{n+1} = x^n + tau F(x^n)
//   rk2   X = x^n + tau F(x^n);  x^{n+1} = x^n + tau/2 (F(x^n) + F(X))
//   erb   x^{n+1} = x^n + tau phi1(tau J_n) F(x^n)
//   serb  x^{n+1} = x^n + tau phi1(tau J_n)(F(x^n) + sigma (J_n dW^n))
//                       + sigma dW^n
//
// with J_n the Jacobian of F at x^n and noise coefficient H(x) = sigma I.
// For time-dependent controls the non-autonomous variant adds
// tau^2 phi2(tau J_n) v_n, v_n = u'(t_n).
//
// The steppers are generic over a drift model so the same numerical path
// serves both the agent system and scalar/linear test problems.

#include "agentsim/dynamics.hpp"
#include "agentsim/matfun.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace agentsim {

template <class M>
concept DriftModel = requires(const M m, const Eigen::VectorXd x,
                              const Eigen::VectorXd u) {
  { m.drift(x, u) } -> std::convertible_to<Eigen::VectorXd>;
  { m.jacobian(x) } -> std::convertible_to<Eigen::MatrixXd>;
};

/// Linearization policy for the agent system's exponential steppers.
/// FrozenInteraction exponentiates the interaction Laplacian, which is
/// dissipative at every state and keeps coarse steps stable from spread
/// configurations; FullJacobian exponentiates the exact drift Jacobian,
/// which restores second-order accuracy but can overshoot on coarse stiff
/// steps far from consensus (see dynamics.hpp).
enum class Linearization { FrozenInteraction, FullJacobian };

inline Linearization parse_linearization(const std::string& name) {
  if (name == "frozen") return Linearization::FrozenInteraction;
  if (name == "full") return Linearization::FullJacobian;
  throw std::invalid_argument("unknown linearization '" + name +
                              "' (expected frozen or full)");
}

inline const char* linearization_name(Linearization l) {
  return l == Linearization::FrozenInteraction ? "frozen" : "full";
}

/// The interacting-agent system as a drift model.
struct AgentModel {
  const Kernel& kernel;
  Linearization linearization = Linearization::FrozenInteraction;
  Eigen::VectorXd drift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return agentsim::drift(x, u, kernel);
  }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    return linearization == Linearization::FrozenInteraction
               ? interaction_laplacian(x, kernel)
               : agentsim::jacobian(x, kernel);
  }
};

/// x' = A x + u; exercised by linear-exactness and order tests.
struct LinearModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd drift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    Eigen::VectorXd f = A * x;
    if (u.size() != 0) f += u;
    return f;
  }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd&) const { return A; }
};

/// Inputs of one step. Empty u/dW/v mean zero.
struct StepInput {
  Eigen::VectorXd x;   // state x^n
  Eigen::VectorXd u;   // control u^n
  Eigen::VectorXd dW;  // Brownian increments, Normal(0, tau) each
  Eigen::VectorXd v;   // control time derivative u'(t_n)
  double tau = 0.0;
  double sigma = 0.0;
};

enum class Method { EulerMaruyama, ExplicitEuler, Heun, ExpRosenbrockEuler, StochExpRosenbrockEuler };

inline Method parse_method(const std::string& name) {
  if (name == "em") return Method::EulerMaruyama;
  if (name == "ee") return Method::ExplicitEuler;
  if (name == "rk2") return Method::Heun;
  if (name == "erb") return Method::ExpRosenbrockEuler;
  if (name == "serb") return Method::StochExpRosenbrockEuler;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected em, ee, rk2, erb, serb)");
}

inline const char* method_name(Method m) {
  switch (m) {
    case Method::EulerMaruyama: return "em";
    case Method::ExplicitEuler: return "ee";
    case Method::Heun: return "rk2";
    case Method::ExpRosenbrockEuler: return "erb";
    case Method::StochExpRosenbrockEuler: return "serb";
  }
  return "?";
}

namespace detail {
inline void check_step(const StepInput& s) {
  if (s.tau <= 0) throw std::invalid_argument("step: tau must be positive");
  if (s.sigma < 0) throw std::invalid_argument("step: sigma must be non-negative");
  const Eigen::Index n = s.x.size();
  if ((s.u.size() && s.u.size() != n) || (s.dW.size() && s.dW.size() != n) ||
      (s.v.size() && s.v.size() != n))
    throw std::invalid_argument("step: vector length mismatch");
}
} // namespace detail

template <DriftModel M>
Eigen::VectorXd step_euler_maruyama(const StepInput& s, const M& model) {
  detail::check_step(s);
  Eigen::VectorXd x = s.x + s.tau * model.drift(s.x, s.u);
  if (s.sigma != 0 && s.dW.size()) x += s.sigma * s.dW;
  return x;
}

template <DriftModel M>
Eigen::VectorXd step_explicit_euler(const StepInput& s, const M& model) {
  detail::check_step(s);
  return s.x + s.tau * model.drift(s.x, s.u);
}

template <DriftModel M>
Eigen::VectorXd step_heun(const StepInput& s, const M& model) {
  detail::check_step(s);
  const Eigen::VectorXd f0 = model.drift(s.x, s.u);
  const Eigen::VectorXd stage = s.x + s.tau * f0;
  return s.x + (s.tau / 2.0) * (f0 + model.drift(stage, s.u));
}

template <DriftModel M>
Eigen::VectorXd step_exp_rosenbrock_euler(const StepInput& s, const M& model) {
  detail::check_step(s);
  const Eigen::MatrixXd J = model.jacobian(s.x);
  const Eigen::VectorXd w = s.tau * model.drift(s.x, s.u);
  return s.x + phi1_apply((s.tau * J).eval(), w);
}

template <DriftModel M>
Eigen::VectorXd step_serb(const StepInput& s, const M& model) {
  detail::check_step(s);
  const Eigen::MatrixXd J = model.jacobian(s.x);
  Eigen::VectorXd f = model.drift(s.x, s.u);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(s.x.size());
  if (s.sigma != 0 && s.dW.size()) {
    noise = s.sigma * s.dW;
    f += s.sigma * (J * s.dW);
  }
  return s.x + phi1_apply((s.tau * J).eval(), (s.tau * f).eval()) + noise;
}

template <DriftModel M>
Eigen::VectorXd step_serb_nonautonomous(const StepInput& s, const M& model) {
  if (s.v.size() == 0 || s.v.isZero(0.0)) return step_serb(s, model);
  detail::check_step(s);
  const Eigen::MatrixXd J = model.jacobian(s.x);
  Eigen::VectorXd f = model.drift(s.x, s.u);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(s.x.size());
  if (s.sigma != 0 && s.dW.size()) {
    noise = s.sigma * s.dW;
    f += s.sigma * (J * s.dW);
  }
  return s.x + phi12_apply((s.tau * J).eval(), (s.tau * f).eval(),
                           (s.tau * s.tau * s.v).eval()) +
         noise;
}

template <DriftModel M>
Eigen::VectorXd step(Method method, const StepInput& s, const M& model) {
  switch (method) {
    case Method::EulerMaruyama: return step_euler_maruyama(s, model);
    case Method::ExplicitEuler: return step_explicit_euler(s, model);
    case Method::Heun: return step_heun(s, model);
    case Method::ExpRosenbrockEuler: return step_exp_rosenbrock_euler(s, model);
    case Method::StochExpRosenbrockEuler: return step_serb_nonautonomous(s, model);
  }
  throw std::logic_error("step: unknown method");
}

// Kernel-based entry points.
inline AgentState step_euler_maruyama(const StepInput& s, const Kernel& k) {
  return step_euler_maruyama(s, AgentModel{k});
}
inline AgentState step_explicit_euler(const StepInput& s, const Kernel& k) {
  return step_explicit_euler(s, AgentModel{k});
}
inline AgentState step_heun(const StepInput& s, const Kernel& k) {
  return step_heun(s, AgentModel{k});
}
inline AgentState step_exp_rosenbrock_euler(const StepInput& s, const Kernel& k) {
  return step_exp_rosenbrock_euler(s, AgentModel{k});
}
inline AgentState step_serb(const StepInput& s, const Kernel& k) {
  return step_serb(s, AgentModel{k});
}
inline AgentState step_serb_nonautonomous(const StepInput& s, const Kernel& k) {
  return step_serb_nonautonomous(s, AgentModel{k});
}
inline AgentState step(Method method, const StepInput& s, const Kernel& k) {
  return step(method, s, AgentModel{k});
}

} // namespace agentsim
