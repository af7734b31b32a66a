#pragma once

// Experiment orchestration: seeded sampling, phase-structured trajectory
// generation and ensemble statistics.

#include "agentsim/control.hpp"
#include "agentsim/cost.hpp"
#include "agentsim/ensemble.hpp"
#include "agentsim/integrators.hpp"
#include "agentsim/kernel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace agentsim {

enum class ControlMode { MeanOde, EnsembleFeedback };

inline const char* control_mode_name(ControlMode m) {
  return m == ControlMode::MeanOde ? "mean-ode" : "ensemble";
}
ControlMode parse_control_mode(const std::string& name);

struct ControlConfig {
  bool enabled = false;
  double beta = 12.0;
  double delta = 2e-4;
  double target = 0.0;
  ControlMode mode = ControlMode::MeanOde;
};

struct ExperimentConfig {
  int n_agents = 100;
  double t0 = 0.0;
  double T = 1.0;
  int steps = 50;            // m; tau = (T - t0) / m
  double sigma = 0.01;
  int n_paths = 20;          // Brownian paths n_bm
  double gamma = 1.0;
  Kernel kernel = Kernel::symmetric_cs(5e-2, 0.1);
  Method method = Method::StochExpRosenbrockEuler;
  Linearization linearization = Linearization::FrozenInteraction;
  ControlConfig control;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string run_name = "run";
  // Resample the initial state per Brownian path instead of sharing one
  // draw across the ensemble.
  bool resample_initial = false;

  double tau() const { return (T - t0) / steps; }
  CostParams cost_params() const {
    return CostParams{gamma, control.target, n_agents};
  }
  void validate() const;
};

/// Shared initial state: N i.i.d. Uniform(-1, 1) draws under the run seed.
AgentState sample_initial_states(const ExperimentConfig& cfg);
/// Per-path variant used when resample_initial is set.
AgentState sample_initial_states(const ExperimentConfig& cfg, Eigen::Index path);

/// Brownian increments, one m x N matrix per path, entries Normal(0, tau).
/// Path p is a function of (seed, p) only, never of n_paths.
std::vector<Eigen::MatrixXd> sample_increments(const ExperimentConfig& cfg);

Ensemble run_uncontrolled(const ExperimentConfig& cfg);

struct TurnpikeRun {
  Ensemble ensemble;
  ControlPlan plan;
  TurnpikeParams params;
  // Mean trajectory of the cheap phase (steps 0..n_bar), one row per step.
  Eigen::MatrixXd mean_path;
  double lyapunov_at_boundary = 0.0;
};

TurnpikeRun run_turnpike(const ExperimentConfig& cfg);

/// Per-step, per-agent arithmetic mean over paths; row n is the mean state
/// at step n. Accumulation runs in fixed path order.
Eigen::MatrixXd ensemble_mean(const Ensemble& e);

/// max - min of the positions, the consensus contraction diagnostic.
double consensus_diameter(const Eigen::VectorXd& state);

} // namespace agentsim
