#pragma once

// Built-in order studies.
//
// Deterministic orders come from Richardson estimates on a smooth nonlinear
// consensus problem (mild kernel, no noise): the observed order is
// log2(||x_tau(T) - x_{tau/2}(T)|| / ||x_{tau/2}(T) - x_{tau/4}(T)||).
//
// Strong orders are measured on the scalar Ornstein-Uhlenbeck process
// dx = -x dt + sigma dW over paired Brownian paths: each refinement level
// consumes block sums of one fine-grid increment sequence, the reference is
// the exponential scheme on the fine grid (whose one-step map e^{-h}(x +
// sigma dW) propagates the mean exactly), and the observed order is the
// least-squares slope of log2 RMS error against log2 tau.

#include "agentsim/integrators.hpp"

#include <cstdint>
#include <vector>

namespace agentsim {

struct OrderEstimate {
  double order = 0.0;
  std::vector<double> taus;
  std::vector<double> errors;
};

/// Richardson order estimate for a deterministic method on the consensus
/// test problem (N = 10, p(x,y) = 1/(1 + (x-y)^2), T = 1).
OrderEstimate deterministic_order(Method method, int base_steps = 10,
                                  std::uint64_t seed = 42);

/// Strong order on the scalar OU process at refinement levels
/// m = coarsest_steps * 2^k, k = 0..levels-1.
OrderEstimate ou_strong_order(Method method, double sigma = 0.5,
                              int n_paths = 2000, int coarsest_steps = 8,
                              int levels = 4, std::uint64_t seed = 42);

} // namespace agentsim
