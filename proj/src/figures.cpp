#include "agentsim/figures.hpp"

#include <sstream>
#include <stdexcept>

namespace agentsim {

namespace {

ExperimentConfig base_config(std::uint64_t seed, const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.out_dir = out_dir;
  return cfg;
}

PanelSpec uncontrolled_panel(std::uint64_t seed, const std::string& out_dir,
                             const std::string& name, Method method, double eps,
                             double sigma, int steps, const std::string& desc) {
  PanelSpec p;
  p.name = name;
  p.description = desc;
  p.config = base_config(seed, out_dir);
  p.config.run_name = name;
  p.config.method = method;
  p.config.kernel = Kernel::symmetric_cs(eps, 0.1);
  p.config.sigma = sigma;
  p.config.steps = steps;
  return p;
}

PanelSpec turnpike_panel(std::uint64_t seed, const std::string& out_dir,
                         const std::string& name, Method method, double target,
                         const std::string& desc) {
  PanelSpec p;
  p.name = name;
  p.description = desc;
  p.config = base_config(seed, out_dir);
  p.config.run_name = name;
  p.config.method = method;
  p.config.kernel = Kernel::symmetric_cs(5e-2, 0.1);
  p.config.steps = 50;
  p.config.control.enabled = true;
  p.config.control.beta = 12.0;
  p.config.control.delta = 2e-4;
  p.config.control.target = target;
  p.config.control.mode = ControlMode::MeanOde;
  return p;
}

} // namespace

std::vector<PanelSpec> figure_panels(std::uint64_t seed, const std::string& out_dir) {
  std::vector<PanelSpec> panels;

  panels.push_back(uncontrolled_panel(seed, out_dir, "test1a-em",
                                      Method::EulerMaruyama, 5e-2, 0.01, 25,
                                      "stiff kernel, EM, m=25 (oscillatory)"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1a-serb",
                                      Method::StochExpRosenbrockEuler, 5e-2, 0.01,
                                      25, "stiff kernel, SERB, m=25 (stable)"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1b-em150",
                                      Method::EulerMaruyama, 5e-2, 0.01, 150,
                                      "stiff kernel, EM, m=150"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1b-em1500",
                                      Method::EulerMaruyama, 5e-2, 0.01, 1500,
                                      "stiff kernel, EM, m=1500 (recovered)"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1c-em",
                                      Method::EulerMaruyama, 1.0, 0.01, 50,
                                      "non-stiff kernel, EM, m=50"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1c-serb",
                                      Method::StochExpRosenbrockEuler, 1.0, 0.01,
                                      50, "non-stiff kernel, SERB, m=50"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1d-ee",
                                      Method::ExplicitEuler, 5e-2, 0.0, 25,
                                      "deterministic stiff, EE, m=25"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1d-rk2", Method::Heun,
                                      5e-2, 0.0, 25,
                                      "deterministic stiff, Heun, m=25"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1d-erb",
                                      Method::ExpRosenbrockEuler, 5e-2, 0.0, 25,
                                      "deterministic stiff, ERB, m=25"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1e-ee1500",
                                      Method::ExplicitEuler, 5e-2, 0.0, 1500,
                                      "deterministic stiff, EE, m=1500"));
  panels.push_back(uncontrolled_panel(seed, out_dir, "test1e-rk21500",
                                      Method::Heun, 5e-2, 0.0, 1500,
                                      "deterministic stiff, Heun, m=1500"));

  panels.push_back(turnpike_panel(seed, out_dir, "test2-em07",
                                  Method::EulerMaruyama, 0.7,
                                  "turnpike, EM, target 0.7"));
  panels.push_back(turnpike_panel(seed, out_dir, "test2-serb07",
                                  Method::StochExpRosenbrockEuler, 0.7,
                                  "turnpike, SERB, target 0.7"));
  panels.push_back(turnpike_panel(seed, out_dir, "test2-serb-neg",
                                  Method::StochExpRosenbrockEuler, -1.7,
                                  "turnpike, SERB, target -1.7"));

  PanelSpec nonsym = turnpike_panel(seed, out_dir, "test2-nonsym",
                                    Method::StochExpRosenbrockEuler, 2.3,
                                    "turnpike, SERB, non-symmetric kernel, "
                                    "target 2.3");
  nonsym.config.kernel = Kernel::nonsymmetric_cs(1e-2, 1e-1, 0.1,
                                                 nonsym.config.n_agents);
  panels.push_back(nonsym);

  return panels;
}

std::vector<PanelSpec> select_panels(const std::vector<PanelSpec>& all,
                                     const std::string& only) {
  if (only.empty()) return all;

  std::vector<std::string> tokens;
  std::stringstream ss(only);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) tokens.push_back(tok);
  }

  auto matches = [](const std::string& token, const std::string& name) {
    if (token == "test1")
      return name.rfind("test1a", 0) == 0 || name.rfind("test1b", 0) == 0;
    return name.rfind(token, 0) == 0;
  };

  std::vector<PanelSpec> out;
  for (const auto& p : all)
    for (const auto& t : tokens)
      if (matches(t, p.name)) {
        out.push_back(p);
        break;
      }
  if (out.empty())
    throw std::invalid_argument("--only '" + only + "' matches no panel");
  return out;
}

RunFiles run_panel(const PanelSpec& panel, double lambda) {
  if (panel.config.control.enabled) {
    const TurnpikeRun run = run_turnpike(panel.config);
    return write_run(run.ensemble, &run.plan, panel.config,
                     build_report(run, panel.config, lambda));
  }
  const Ensemble e = run_uncontrolled(panel.config);
  return write_run(e, nullptr, panel.config, build_report(e, panel.config));
}

} // namespace agentsim
