#include "agentsim/run_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace agentsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

const char* kernel_name(Kernel::Type t) {
  switch (t) {
    case Kernel::Type::SymmetricCS: return "sym";
    case Kernel::Type::NonSymmetricCS: return "nonsym";
    case Kernel::Type::Custom: return "custom";
  }
  return "?";
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_config(const ExperimentConfig& cfg, const std::string& path) {
  auto out = open_out(path);
  out << "agents = " << cfg.n_agents << "\n";
  out << "t0 = " << format_double(cfg.t0) << "\n";
  out << "T = " << format_double(cfg.T) << "\n";
  out << "steps = " << cfg.steps << "\n";
  out << "sigma = " << format_double(cfg.sigma) << "\n";
  out << "paths = " << cfg.n_paths << "\n";
  out << "gamma = " << format_double(cfg.gamma) << "\n";
  out << "method = " << method_name(cfg.method) << "\n";
  out << "linearization = " << linearization_name(cfg.linearization) << "\n";
  out << "kernel = " << kernel_name(cfg.kernel.type) << "\n";
  out << "alpha = " << format_double(cfg.kernel.alpha) << "\n";
  if (cfg.kernel.type == Kernel::Type::NonSymmetricCS) {
    out << "eps_min = " << format_double(cfg.kernel.eps_min) << "\n";
    out << "eps_max = " << format_double(cfg.kernel.eps_max) << "\n";
  } else {
    out << "eps = " << format_double(cfg.kernel.epsilon) << "\n";
  }
  out << "control = " << (cfg.control.enabled ? "turnpike" : "none") << "\n";
  if (cfg.control.enabled) {
    out << "beta = " << format_double(cfg.control.beta) << "\n";
    out << "delta = " << format_double(cfg.control.delta) << "\n";
    out << "target = " << format_double(cfg.control.target) << "\n";
    out << "mode = " << control_mode_name(cfg.control.mode) << "\n";
  }
  out << "seed = " << cfg.seed << "\n";
  out << "resample_initial = " << (cfg.resample_initial ? 1 : 0) << "\n";
  out << "name = " << cfg.run_name << "\n";
}

void read_config(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  double eps = cfg.kernel.epsilon, eps_min = 1e-2, eps_max = 1e-1;
  double alpha = cfg.kernel.alpha;
  std::string kernel = kernel_name(cfg.kernel.type);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "agents") cfg.n_agents = std::stoi(value);
      else if (key == "t0") cfg.t0 = std::stod(value);
      else if (key == "T") cfg.T = std::stod(value);
      else if (key == "steps") cfg.steps = std::stoi(value);
      else if (key == "sigma") cfg.sigma = std::stod(value);
      else if (key == "paths") cfg.n_paths = std::stoi(value);
      else if (key == "gamma") cfg.gamma = std::stod(value);
      else if (key == "method") cfg.method = parse_method(value);
      else if (key == "linearization") cfg.linearization = parse_linearization(value);
      else if (key == "kernel") kernel = value;
      else if (key == "alpha") alpha = std::stod(value);
      else if (key == "eps") eps = std::stod(value);
      else if (key == "eps_min") eps_min = std::stod(value);
      else if (key == "eps_max") eps_max = std::stod(value);
      else if (key == "control") cfg.control.enabled = (value == "turnpike");
      else if (key == "beta") cfg.control.beta = std::stod(value);
      else if (key == "delta") cfg.control.delta = std::stod(value);
      else if (key == "target") cfg.control.target = std::stod(value);
      else if (key == "mode") cfg.control.mode = parse_control_mode(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "resample_initial") cfg.resample_initial = (value != "0");
      else if (key == "name") cfg.run_name = value;
      else
        throw std::runtime_error("unknown key '" + key + "'");
    } catch (const std::exception& err) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               err.what());
    }
  }

  if (kernel == "sym") cfg.kernel = Kernel::symmetric_cs(eps, alpha);
  else if (kernel == "nonsym")
    cfg.kernel = Kernel::nonsymmetric_cs(eps_min, eps_max, alpha, cfg.n_agents);
  else
    throw std::runtime_error(path + ": unknown kernel '" + kernel + "'");
}

Report build_report(const Ensemble& e, const ExperimentConfig& cfg) {
  const CostParams p = cfg.cost_params();
  ControlPlan zero_plan;
  zero_plan.static_control = Eigen::VectorXd::Zero(cfg.n_agents);

  const Eigen::MatrixXd mean = ensemble_mean(e);
  const Eigen::Index m = e.num_steps();
  const AgentState tilde_x = Eigen::VectorXd::Constant(cfg.n_agents, p.target);
  const ControlVector tilde_u = Eigen::VectorXd::Zero(cfg.n_agents);

  double min_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index n = 0; n <= m; ++n)
    min_margin = std::min(min_margin,
                          dissipativity_margin(e.states_at(n), tilde_u, tilde_x,
                                               tilde_u, p));

  Report r;
  r.emplace_back("total_cost", total_cost(e, zero_plan, cfg.tau(), p));
  r.emplace_back("initial_diameter", consensus_diameter(mean.row(0).transpose()));
  r.emplace_back("final_diameter", consensus_diameter(mean.row(m).transpose()));
  r.emplace_back("final_mean_deviation",
                 (mean.row(m).transpose() - tilde_x).cwiseAbs().maxCoeff());
  r.emplace_back("dissipativity_min_margin", min_margin);
  return r;
}

Report build_report(const TurnpikeRun& run, const ExperimentConfig& cfg,
                    double lambda) {
  const CostParams p = cfg.cost_params();
  const Ensemble& e = run.ensemble;
  const Eigen::Index m = e.num_steps();
  const Eigen::MatrixXd mean = ensemble_mean(e);
  const AgentState tilde_x = Eigen::VectorXd::Constant(cfg.n_agents, p.target);
  const ControlVector tilde_u = Eigen::VectorXd::Zero(cfg.n_agents);

  double min_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index n = 0; n <= m; ++n)
    min_margin = std::min(min_margin,
                          dissipativity_margin(e.states_at(n),
                                               n < m ? run.plan.control_at(n) : tilde_u,
                                               tilde_x, tilde_u, p));

  const double cost = total_cost(e, run.plan, cfg.tau(), p);
  const TheoremConstants consts =
      theorem_constants(run.params.beta, cfg.kernel.bound(), p.gamma, cfg.tau(),
                        m, lambda);
  const double x0_dev = (e.state(0, 0) - tilde_x).norm();

  Report r;
  r.emplace_back("t_bar", run.params.t_bar);
  r.emplace_back("n_bar", static_cast<double>(run.params.n_bar));
  r.emplace_back("lyapunov_at_boundary", run.lyapunov_at_boundary);
  r.emplace_back("total_cost", cost);
  r.emplace_back("final_mean_deviation",
                 (mean.row(m).transpose() - tilde_x).cwiseAbs().maxCoeff());
  r.emplace_back("dissipativity_min_margin", min_margin);
  r.emplace_back("cheap_bound_margin", consts.C0 * alpha(x0_dev, p) - cost);
  r.emplace_back("theorem_lambda", lambda);
  r.emplace_back("theorem_margin",
                 turnpike_theorem_check(e, run.plan, consts, lambda, cfg.tau(), p));
  return r;
}

RunFiles write_run(const Ensemble& e, const ControlPlan* plan,
                   const ExperimentConfig& cfg, const Report& report) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string stem = cfg.out_dir + "/" + cfg.run_name;

  RunFiles files;
  files.config_txt = stem + "_config.txt";
  files.mean_csv = stem + "_mean.csv";
  files.paths_csv = stem + "_paths.csv";
  files.report_csv = stem + "_report.csv";
  files.plot_py = stem + "_plot.py";

  write_config(cfg, files.config_txt);

  const Eigen::MatrixXd mean = ensemble_mean(e);
  const Eigen::Index m = e.num_steps();
  const double tau = cfg.tau();

  {
    auto out = open_out(files.mean_csv);
    for (Eigen::Index n = 0; n <= m; ++n) {
      out << format_double(cfg.t0 + static_cast<double>(n) * tau);
      for (Eigen::Index a = 0; a < mean.cols(); ++a)
        out << ',' << format_double(mean(n, a));
      out << '\n';
    }
  }

  {
    auto out = open_out(files.paths_csv);
    for (Eigen::Index p = 0; p < e.num_paths(); ++p)
      for (Eigen::Index n = 0; n <= m; ++n) {
        out << p << ',' << format_double(cfg.t0 + static_cast<double>(n) * tau);
        for (Eigen::Index a = 0; a < e.num_agents(); ++a)
          out << ',' << format_double(e.paths[static_cast<size_t>(p)](n, a));
        out << '\n';
      }
  }

  {
    auto out = open_out(files.report_csv);
    for (const auto& [key, value] : report)
      out << key << ',' << format_double(value) << '\n';
  }

  {
    auto out = open_out(files.plot_py);
    const std::string mean_name = cfg.run_name + "_mean.csv";
    const std::string png_name = cfg.run_name + "_mean.png";
    out << "#!/usr/bin/env python3\n"
        << "import os\n"
        << "import matplotlib\n"
        << "matplotlib.use(\"Agg\")\n"
        << "import matplotlib.pyplot as plt\n"
        << "import numpy as np\n\n"
        << "here = os.path.dirname(os.path.abspath(__file__))\n"
        << "data = np.loadtxt(os.path.join(here, \"" << mean_name
        << "\"), delimiter=\",\")\n"
        << "t, agents = data[:, 0], data[:, 1:]\n"
        << "plt.figure(figsize=(7, 4))\n"
        << "plt.plot(t, agents, lw=0.7)\n";
    if (plan && plan->phase_boundary > 0)
      out << "plt.axvline(x="
          << format_double(cfg.t0 + static_cast<double>(plan->phase_boundary) * tau)
          << ", color=\"k\", ls=\"--\", lw=1.0, label=\"switch time\")\n"
          << "plt.legend(loc=\"best\")\n";
    out << "plt.xlabel(\"t\")\n"
        << "plt.ylabel(\"ensemble-mean positions\")\n"
        << "plt.title(\"" << cfg.run_name << "\")\n"
        << "plt.tight_layout()\n"
        << "plt.savefig(os.path.join(here, \"" << png_name << "\"), dpi=150)\n";
  }

  return files;
}

} // namespace agentsim
