#include "agentsim/sim.hpp"

#include "agentsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace agentsim {

ControlMode parse_control_mode(const std::string& name) {
  if (name == "mean-ode") return ControlMode::MeanOde;
  if (name == "ensemble") return ControlMode::EnsembleFeedback;
  throw std::invalid_argument("unknown control mode '" + name +
                              "' (expected mean-ode or ensemble)");
}

void ExperimentConfig::validate() const {
  if (n_agents < 2) throw std::invalid_argument("config: need at least 2 agents");
  if (steps < 1) throw std::invalid_argument("config: need at least 1 step");
  if (!(T > t0)) throw std::invalid_argument("config: need T > t0");
  if (sigma < 0) throw std::invalid_argument("config: sigma must be non-negative");
  if (n_paths < 1) throw std::invalid_argument("config: need at least 1 path");
  if (control.enabled) {
    if (control.beta <= 0 || control.delta <= 0)
      throw std::invalid_argument("config: beta and delta must be positive");
  }
}

AgentState sample_initial_states(const ExperimentConfig& cfg, Eigen::Index path) {
  AgentState x(cfg.n_agents);
  for (int a = 0; a < cfg.n_agents; ++a)
    x(a) = 2.0 * rng::uniform01(cfg.seed, rng::kInitialStateTag,
                                static_cast<std::uint64_t>(path), 0,
                                static_cast<std::uint64_t>(a)) -
           1.0;
  return x;
}

AgentState sample_initial_states(const ExperimentConfig& cfg) {
  return sample_initial_states(cfg, 0);
}

std::vector<Eigen::MatrixXd> sample_increments(const ExperimentConfig& cfg) {
  const double root_tau = std::sqrt(cfg.tau());
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<size_t>(cfg.n_paths));
  for (int p = 0; p < cfg.n_paths; ++p) {
    Eigen::MatrixXd dW(cfg.steps, cfg.n_agents);
    for (int n = 0; n < cfg.steps; ++n)
      for (int a = 0; a < cfg.n_agents; ++a)
        dW(n, a) = root_tau * rng::normal(cfg.seed, rng::kIncrementTag,
                                          static_cast<std::uint64_t>(p),
                                          static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(a));
    out.push_back(std::move(dW));
  }
  return out;
}

namespace {

Eigen::VectorXd advance(Method method, const AgentModel& model,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& dW, double tau, double sigma,
                        Eigen::Index step_index) {
  StepInput s;
  s.x = x;
  s.u = u;
  s.dW = dW;
  s.tau = tau;
  s.sigma = sigma;
  try {
    return step(method, s, model);
  } catch (const std::exception& err) {
    throw std::runtime_error("integration failed at step " +
                             std::to_string(step_index) + ": " + err.what());
  }
}

/// One cheap-phase step of the linear mean dynamics xhat' = beta(xbar - xhat),
/// discretized consistently with the run's time-marching family.
Eigen::VectorXd mean_phase_step(Method method, const Eigen::VectorXd& xhat,
                                const TurnpikeParams& tp, double tau) {
  const Eigen::VectorXd target = Eigen::VectorXd::Constant(xhat.size(), tp.target);
  switch (method) {
    case Method::ExpRosenbrockEuler:
    case Method::StochExpRosenbrockEuler:
      return mean_step_exact(xhat, tp, tau);
    case Method::Heun: {
      const Eigen::VectorXd f0 = tp.beta * (target - xhat);
      const Eigen::VectorXd stage = xhat + tau * f0;
      return xhat + (tau / 2.0) * (f0 + tp.beta * (target - stage));
    }
    case Method::EulerMaruyama:
    case Method::ExplicitEuler:
      return xhat + tau * tp.beta * (target - xhat);
  }
  throw std::logic_error("mean_phase_step: unknown method");
}

} // namespace

Ensemble run_uncontrolled(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.control.enabled)
    throw std::invalid_argument("run_uncontrolled: control must be disabled");

  const double tau = cfg.tau();
  const AgentModel model{cfg.kernel, cfg.linearization};
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(cfg.n_agents);
  const AgentState shared_x0 = sample_initial_states(cfg);

  Ensemble e;
  e.increments = sample_increments(cfg);
  e.controls.assign(static_cast<size_t>(cfg.steps), u0);
  e.paths.reserve(static_cast<size_t>(cfg.n_paths));
  for (int p = 0; p < cfg.n_paths; ++p) {
    Eigen::MatrixXd traj(cfg.steps + 1, cfg.n_agents);
    Eigen::VectorXd x =
        cfg.resample_initial ? sample_initial_states(cfg, p) : shared_x0;
    traj.row(0) = x.transpose();
    for (int n = 0; n < cfg.steps; ++n) {
      x = advance(cfg.method, model, x, u0,
                  e.increments[static_cast<size_t>(p)].row(n).transpose(), tau,
                  cfg.sigma, n);
      traj.row(n + 1) = x.transpose();
    }
    e.paths.push_back(std::move(traj));
  }
  return e;
}

TurnpikeRun run_turnpike(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.control.enabled)
    throw std::invalid_argument("run_turnpike: control must be enabled");

  const double tau = cfg.tau();
  const AgentModel model{cfg.kernel, cfg.linearization};
  const AgentState x0 = sample_initial_states(cfg);

  TurnpikeRun run;
  run.params.beta = cfg.control.beta;
  run.params.delta = cfg.control.delta;
  run.params.target = cfg.control.target;
  run.params.t_bar = turnpike_time(run.params, x0);
  if (run.params.t_bar > cfg.T - cfg.t0)
    throw std::runtime_error(
        "run_turnpike: horizon too short, the switch time needs T >= " +
        std::to_string(cfg.t0 + run.params.t_bar));
  run.params.n_bar = snap_to_grid(run.params.t_bar, tau, cfg.steps);
  const Eigen::Index n_bar = run.params.n_bar;

  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(cfg.n_agents);
  run.plan.phase_boundary = n_bar;
  run.plan.static_control = u0;

  Ensemble& e = run.ensemble;
  e.increments = sample_increments(cfg);
  e.controls.assign(static_cast<size_t>(cfg.steps), u0);

  std::vector<Eigen::MatrixXd> trajs(
      static_cast<size_t>(cfg.n_paths),
      Eigen::MatrixXd(cfg.steps + 1, cfg.n_agents));
  for (auto& t : trajs) t.row(0) = x0.transpose();

  run.mean_path.resize(n_bar + 1, cfg.n_agents);
  run.mean_path.row(0) = x0.transpose();

  if (cfg.control.mode == ControlMode::MeanOde) {
    // Cheap phase: integrate the deterministic mean dynamics once and let
    // every path start its stochastic leg from the switch state.
    Eigen::VectorXd xhat = x0;
    for (Eigen::Index n = 0; n < n_bar; ++n) {
      const Eigen::VectorXd u =
          cheap_control(xhat, cfg.kernel, cfg.control.beta, cfg.control.target);
      run.plan.cheap_controls.push_back(u);
      e.controls[static_cast<size_t>(n)] = u;
      xhat = mean_phase_step(cfg.method, xhat, run.params, tau);
      run.mean_path.row(n + 1) = xhat.transpose();
      for (auto& t : trajs) t.row(n + 1) = xhat.transpose();
    }
    run.lyapunov_at_boundary = lyapunov(xhat, cfg.control.target);
  } else {
    // Cheap phase on the full SDE: the feedback averages the control bracket
    // beta (xbar - x) - interaction(x) over the paths (sample approximation
    // of its expectation) and is shared by all paths within the step.
    std::vector<Eigen::VectorXd> xs(static_cast<size_t>(cfg.n_paths), x0);
    for (Eigen::Index n = 0; n < n_bar; ++n) {
      Eigen::VectorXd xhat = Eigen::VectorXd::Zero(cfg.n_agents);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(cfg.n_agents);
      for (const auto& x : xs) {
        xhat += x;
        u += cheap_control(x, cfg.kernel, cfg.control.beta, cfg.control.target);
      }
      xhat /= static_cast<double>(cfg.n_paths);
      u /= static_cast<double>(cfg.n_paths);
      run.plan.cheap_controls.push_back(u);
      e.controls[static_cast<size_t>(n)] = u;
      for (int p = 0; p < cfg.n_paths; ++p) {
        xs[static_cast<size_t>(p)] = advance(
            cfg.method, model, xs[static_cast<size_t>(p)], u,
            e.increments[static_cast<size_t>(p)].row(n).transpose(), tau,
            cfg.sigma, n);
        trajs[static_cast<size_t>(p)].row(n + 1) =
            xs[static_cast<size_t>(p)].transpose();
      }
      Eigen::VectorXd mean_next = Eigen::VectorXd::Zero(cfg.n_agents);
      for (const auto& x : xs) mean_next += x;
      run.mean_path.row(n + 1) = (mean_next / cfg.n_paths).transpose();
    }
    run.lyapunov_at_boundary =
        lyapunov(run.mean_path.row(n_bar).transpose(), cfg.control.target);
  }

  // Static phase: the zero control, plain stochastic evolution.
  for (int p = 0; p < cfg.n_paths; ++p) {
    Eigen::VectorXd x = trajs[static_cast<size_t>(p)].row(n_bar).transpose();
    for (Eigen::Index n = n_bar; n < cfg.steps; ++n) {
      x = advance(cfg.method, model, x, u0,
                  e.increments[static_cast<size_t>(p)].row(n).transpose(), tau,
                  cfg.sigma, n);
      trajs[static_cast<size_t>(p)].row(n + 1) = x.transpose();
    }
  }

  e.paths = std::move(trajs);
  return run;
}

Eigen::MatrixXd ensemble_mean(const Ensemble& e) {
  if (e.paths.empty()) throw std::invalid_argument("ensemble_mean: empty ensemble");
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(e.paths.front().rows(),
                                               e.paths.front().cols());
  for (const auto& p : e.paths) mean += p;
  return mean / static_cast<double>(e.paths.size());
}

double consensus_diameter(const Eigen::VectorXd& state) {
  return state.maxCoeff() - state.minCoeff();
}

} // namespace agentsim
