#pragma once

// Drift field and Jacobian of the interacting-agent system (positions are
// scalar per agent).
//
// In matrix form the drift is F(x, u) = (P(x) x - x o s(x)) / N + u with
// P_{kl} = p(x_k, x_l) and s_k = sum_l p(x_k, x_l); componentwise
//
//   F_k = (1/N) sum_l p(x_k, x_l) (x_l - x_k) + u_k.
//
// The l = k terms are included: they vanish identically, and keeping them
// matches the full-matrix formulation.

#include "agentsim/kernel.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace agentsim {

using AgentState = Eigen::VectorXd;
using ControlVector = Eigen::VectorXd;

/// Interaction part of the drift, (1/N) sum_l p(x_k, x_l)(x_l - x_k).
inline Eigen::VectorXd interaction(const AgentState& x, const Kernel& k) {
  const Eigen::Index n = x.size();
  if (n < 2) throw std::invalid_argument("interaction: need at least 2 agents");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index l = 0; l < n; ++l)
      acc += k.eval(x(i), x(l), static_cast<int>(l)) * (x(l) - x(i));
    f(i) = acc / static_cast<double>(n);
  }
  return f;
}

inline Eigen::VectorXd drift(const AgentState& x, const ControlVector& u,
                             const Kernel& k) {
  if (u.size() != 0 && u.size() != x.size())
    throw std::invalid_argument("drift: control length mismatch");
  Eigen::VectorXd f = interaction(x, k);
  if (u.size() != 0) f += u;
  return f;
}

/// Linearization of the drift with the interaction weights held fixed:
/// (P(x) - diag(P(x) 1)) / N, a weighted graph Laplacian. For positive
/// kernels it is negative semidefinite at every state, so exponential
/// steps built on it contract unconditionally.
inline Eigen::MatrixXd interaction_laplacian(const AgentState& x, const Kernel& k) {
  const Eigen::Index n = x.size();
  if (n < 2)
    throw std::invalid_argument("interaction_laplacian: need at least 2 agents");
  Eigen::MatrixXd L(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
      const double p = k.eval(x(i), x(l), static_cast<int>(l));
      L(i, l) = inv_n * p;
      row_sum += p;
    }
    L(i, i) -= inv_n * row_sum;
  }
  return L;
}

/// Jacobian of the drift with respect to x (the control contributes zero):
///   J_kk = (1/N) sum_{i != k} (d_x p(x_k, x_i)(x_i - x_k) - p(x_k, x_i)),
///   J_kl = (1/N) (d_y p(x_k, x_l)(x_l - x_k) + p(x_k, x_l)),  l != k.
///
/// Unlike interaction_laplacian, this also differentiates the weights. The
/// squared-distance kernels make pair attraction grow superlinearly up to
/// distance sqrt(3) alpha, so at spread states this matrix carries large
/// transient positive eigenvalues even though the flow itself keeps the
/// diameter non-increasing.
inline Eigen::MatrixXd jacobian(const AgentState& x, const Kernel& k) {
  const Eigen::Index n = x.size();
  if (n < 2) throw std::invalid_argument("jacobian: need at least 2 agents");
  Eigen::MatrixXd J(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
      if (l == i) continue;
      const int col = static_cast<int>(l);
      const double p = k.eval(x(i), x(l), col);
      const double dx = x(l) - x(i);
      diag += k.d_dx(x(i), x(l), col) * dx - p;
      J(i, l) = inv_n * (k.d_dy(x(i), x(l), col) * dx + p);
    }
    J(i, i) = inv_n * diag;
  }
  return J;
}

} // namespace agentsim
