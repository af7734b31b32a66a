#pragma once

// Test-only reference implementations, deliberately independent of the
// library's Pade/augmented-matrix path: a scaled truncated-Taylor matrix
// exponential, Gauss-Legendre quadrature for the phi integrals, and central
// finite differences.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracles {

/// e^A by scaling + truncated Taylor series summed to machine saturation.
inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > 0.25) s = static_cast<int>(std::ceil(std::log2(norm1 / 0.25)));
  const Eigen::MatrixXd As = A * std::ldexp(1.0, -s);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 60; ++k) {
    term = (term * As) / k;
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-300) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Gauss-Legendre nodes/weights on [0, 1] via Newton on the Legendre
/// polynomial.
inline void gauss_legendre01(int n, std::vector<double>& nodes,
                             std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x); // map from [-1,1], order irrelevant
    weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

/// phi_k(A) = int_0^1 e^{(1-theta)A} theta^{k-1}/(k-1)! dtheta by quadrature.
inline Eigen::MatrixXd phi_quadrature(const Eigen::MatrixXd& A, int k, int n_nodes = 32) {
  std::vector<double> nodes, weights;
  gauss_legendre01(n_nodes, nodes, weights);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  double factorial = 1.0;
  for (int j = 2; j < k; ++j) factorial *= j;
  for (int i = 0; i < n_nodes; ++i) {
    double poly = 1.0;
    for (int j = 1; j < k; ++j) poly *= nodes[i];
    acc += weights[i] * (poly / factorial) *
           expm_taylor(((1.0 - nodes[i]) * A).eval());
  }
  return acc;
}

/// Random dense matrix rescaled to a prescribed 1-norm.
inline Eigen::MatrixXd random_matrix(int n, double norm1, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = dist(gen);
  const double cur = A.cwiseAbs().colwise().sum().maxCoeff();
  return A * (norm1 / cur);
}

} // namespace oracles
