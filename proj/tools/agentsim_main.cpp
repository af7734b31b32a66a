// Command-line driver for the stochastic consensus experiments.
//
// Subcommands: uncontrolled, turnpike, convergence, figures, check.
// Every subcommand honors --seed, --out and --config; values from a config
// file are overridden by flags given explicitly on the command line.
// Exit codes: 0 success, 1 runtime failure or failed check, 2 usage error.

#include <CLI11.hpp>

#include "agentsim/convergence.hpp"
#include "agentsim/cost.hpp"
#include "agentsim/figures.hpp"
#include "agentsim/matfun.hpp"
#include "agentsim/run_io.hpp"
#include "agentsim/sim.hpp"

#include <cstdio>
#include <iostream>
#include <random>

namespace {

using namespace agentsim;

struct FlagSet {
  int agents = 100;
  double t0 = 0.0, T = 1.0;
  int steps = 50;
  double sigma = 0.01;
  int paths = 20;
  double gamma = 1.0;
  std::string method = "serb";
  std::string linearization = "frozen";
  std::string kernel = "sym";
  double eps = 5e-2, eps_min = 1e-2, eps_max = 1e-1, alpha = 0.1;
  double beta = 12.0, delta = 2e-4, target = 0.0;
  std::string mode = "mean-ode";
  double lambda = 0.5;
  std::uint64_t seed = 42;
  std::string out = "out";
  std::string config;
  std::string name;

  std::map<std::string, CLI::Option*> opt;
  bool given(const std::string& key) const {
    auto it = opt.find(key);
    return it != opt.end() && it->second->count() > 0;
  }
};

void add_common_flags(CLI::App* cmd, FlagSet& f) {
  f.opt["agents"] = cmd->add_option("--agents", f.agents, "number of agents N");
  f.opt["t0"] = cmd->add_option("--t0", f.t0, "initial time");
  f.opt["T"] = cmd->add_option("--T", f.T, "final time");
  f.opt["steps"] = cmd->add_option("--steps", f.steps, "number of time steps m");
  f.opt["sigma"] = cmd->add_option("--sigma", f.sigma, "noise amplitude");
  f.opt["paths"] = cmd->add_option("--paths", f.paths, "number of Brownian paths");
  f.opt["gamma"] = cmd->add_option("--gamma", f.gamma, "control penalization in (0,1]");
  f.opt["method"] =
      cmd->add_option("--method", f.method, "integrator: em, ee, rk2, erb, serb");
  f.opt["linearization"] = cmd->add_option(
      "--linearization", f.linearization,
      "exponential-step linearization: frozen (interaction Laplacian) or full");
  f.opt["kernel"] = cmd->add_option("--kernel", f.kernel, "kernel: sym or nonsym");
  f.opt["eps"] = cmd->add_option("--eps", f.eps, "symmetric kernel scale");
  f.opt["eps-min"] = cmd->add_option("--eps-min", f.eps_min,
                                     "non-symmetric kernel smallest weight");
  f.opt["eps-max"] = cmd->add_option("--eps-max", f.eps_max,
                                     "non-symmetric kernel largest weight");
  f.opt["alpha"] = cmd->add_option("--alpha", f.alpha, "kernel regularization");
  f.opt["seed"] = cmd->add_option("--seed", f.seed, "random seed");
  f.opt["out"] = cmd->add_option("--out", f.out, "output directory");
  f.opt["config"] = cmd->add_option("--config", f.config, "config file (key = value)");
  f.opt["name"] = cmd->add_option("--name", f.name, "run name (output file stem)");
}

void add_control_flags(CLI::App* cmd, FlagSet& f) {
  f.opt["beta"] = cmd->add_option("--beta", f.beta, "feedback gain");
  f.opt["delta"] = cmd->add_option("--delta", f.delta, "Lyapunov threshold");
  f.opt["target"] = cmd->add_option("--target", f.target, "target consensus value");
  f.opt["mode"] =
      cmd->add_option("--mode", f.mode, "cheap phase mode: mean-ode or ensemble");
  f.opt["lambda"] =
      cmd->add_option("--lambda", f.lambda, "interior fraction for the tail bound");
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig build_config(const FlagSet& f, bool control_enabled) {
  ExperimentConfig cfg;
  cfg.control.enabled = control_enabled;
  if (!f.config.empty()) read_config(f.config, cfg);

  if (f.given("agents")) cfg.n_agents = f.agents;
  if (f.given("t0")) cfg.t0 = f.t0;
  if (f.given("T")) cfg.T = f.T;
  if (f.given("steps")) cfg.steps = f.steps;
  if (f.given("sigma")) cfg.sigma = f.sigma;
  if (f.given("paths")) cfg.n_paths = f.paths;
  if (f.given("gamma")) cfg.gamma = f.gamma;
  if (f.given("method")) cfg.method = parse_method(f.method);
  if (f.given("linearization"))
    cfg.linearization = parse_linearization(f.linearization);
  if (f.given("seed")) cfg.seed = f.seed;
  if (f.given("out")) cfg.out_dir = f.out;
  if (f.given("name")) cfg.run_name = f.name;

  const bool kernel_given = f.given("kernel");
  const std::string kernel = kernel_given ? f.kernel
                             : cfg.kernel.type == Kernel::Type::NonSymmetricCS
                                 ? "nonsym"
                                 : "sym";
  if (kernel == "sym") {
    if (f.given("eps-min") || f.given("eps-max"))
      throw UsageError(
          "--eps-min/--eps-max apply to '--kernel nonsym' only; with "
          "'--kernel sym' use --eps");
    const double eps = f.given("eps") ? f.eps : cfg.kernel.epsilon;
    const double alpha = f.given("alpha") ? f.alpha : cfg.kernel.alpha;
    cfg.kernel = Kernel::symmetric_cs(eps, alpha);
  } else if (kernel == "nonsym") {
    if (f.given("eps"))
      throw UsageError(
          "--eps applies to '--kernel sym' only; with '--kernel nonsym' use "
          "--eps-min/--eps-max");
    const double lo = f.given("eps-min") ? f.eps_min
                      : cfg.kernel.type == Kernel::Type::NonSymmetricCS
                          ? cfg.kernel.eps_min
                          : 1e-2;
    const double hi = f.given("eps-max") ? f.eps_max
                      : cfg.kernel.type == Kernel::Type::NonSymmetricCS
                          ? cfg.kernel.eps_max
                          : 1e-1;
    const double alpha = f.given("alpha") ? f.alpha : cfg.kernel.alpha;
    cfg.kernel = Kernel::nonsymmetric_cs(lo, hi, alpha, cfg.n_agents);
  } else {
    throw UsageError("unknown kernel '" + kernel + "' (expected sym or nonsym)");
  }

  if (control_enabled) {
    if (f.given("beta")) cfg.control.beta = f.beta;
    if (f.given("delta")) cfg.control.delta = f.delta;
    if (f.given("target")) cfg.control.target = f.target;
    if (f.given("mode")) cfg.control.mode = parse_control_mode(f.mode);
  }
  return cfg;
}

int cmd_uncontrolled(const FlagSet& f) {
  ExperimentConfig cfg = build_config(f, false);
  if (!f.given("name") && cfg.run_name == "run") cfg.run_name = "uncontrolled";
  const Ensemble e = run_uncontrolled(cfg);
  const Report report = build_report(e, cfg);
  const RunFiles files = write_run(e, nullptr, cfg, report);

  for (const auto& [key, value] : report)
    std::cout << key << " = " << format_double(value) << "\n";
  std::cout << "wrote " << files.mean_csv << "\n";
  std::cout << "status=ok name=" << cfg.run_name
            << " method=" << method_name(cfg.method) << " steps=" << cfg.steps
            << " out=" << cfg.out_dir << "\n";
  return 0;
}

int cmd_turnpike(const FlagSet& f) {
  ExperimentConfig cfg = build_config(f, true);
  if (!f.given("name") && cfg.run_name == "run") cfg.run_name = "turnpike";
  const TurnpikeRun run = run_turnpike(cfg);
  const Report report = build_report(run, cfg, f.lambda);
  const RunFiles files = write_run(run.ensemble, &run.plan, cfg, report);

  for (const auto& [key, value] : report)
    std::cout << key << " = " << format_double(value) << "\n";
  std::cout << "wrote " << files.mean_csv << "\n";

  std::cout << "status=ok name=" << cfg.run_name
            << " t_bar=" << format_double(run.params.t_bar)
            << " n_bar=" << run.params.n_bar;
  for (const auto& [key, value] : report)
    if (key == "final_mean_deviation" || key == "total_cost" ||
        key == "cheap_bound_margin" || key == "theorem_margin")
      std::cout << " " << key << "=" << format_double(value);
  std::cout << "\n";
  return 0;
}

int cmd_convergence(const FlagSet& f) {
  const std::uint64_t seed = f.seed;
  const int paths = f.given("paths") ? f.paths : 2000;

  const OrderEstimate ee = deterministic_order(Method::ExplicitEuler, 10, seed);
  const OrderEstimate rk2 = deterministic_order(Method::Heun, 10, seed);
  const OrderEstimate erb = deterministic_order(Method::ExpRosenbrockEuler, 10, seed);
  std::printf("deterministic observed orders (Richardson, consensus test problem)\n");
  std::printf("  ee   %.3f\n", ee.order);
  std::printf("  rk2  %.3f\n", rk2.order);
  std::printf("  erb  %.3f\n", erb.order);

  const OrderEstimate em =
      ou_strong_order(Method::EulerMaruyama, 0.5, paths, 8, 4, seed);
  const OrderEstimate serb =
      ou_strong_order(Method::StochExpRosenbrockEuler, 0.5, paths, 8, 4, seed);
  std::printf("strong observed orders (Ornstein-Uhlenbeck, %d paired paths)\n",
              paths);
  std::printf("  em   %.3f   rms errors:", em.order);
  for (double e : em.errors) std::printf(" %.3e", e);
  std::printf("\n  serb %.3f   rms errors:", serb.order);
  for (double e : serb.errors) std::printf(" %.3e", e);
  std::printf("\n");

  std::printf(
      "status=ok order_ee=%.3f order_rk2=%.3f order_erb=%.3f strong_em=%.3f "
      "strong_serb=%.3f\n",
      ee.order, rk2.order, erb.order, em.order, serb.order);
  return 0;
}

int cmd_figures(const FlagSet& f, const std::string& only) {
  const auto all = figure_panels(f.seed, f.out);
  const auto selected = select_panels(all, only);

  int failures = 0;
  for (const auto& panel : selected) {
    try {
      PanelSpec p = panel;
      if (f.given("paths")) p.config.n_paths = f.paths;
      const RunFiles files = run_panel(p, f.lambda);
      std::cout << "panel " << panel.name << ": ok (" << files.mean_csv << ")\n";
    } catch (const std::exception& err) {
      ++failures;
      std::cout << "panel " << panel.name << ": FAILED (" << err.what() << ")\n";
    }
  }
  if (failures) {
    std::cout << "status=failed panels=" << selected.size()
              << " failures=" << failures << "\n";
    return 1;
  }
  std::cout << "status=ok panels=" << selected.size() << " out=" << f.out << "\n";
  return 0;
}

int cmd_check(const FlagSet& f, int samples) {
  if (!(f.gamma > 0.0) || f.gamma > 1.0)
    throw UsageError("--gamma must lie in (0, 1]");

  int failures = 0;
  auto verdict = [&](bool ok, const std::string& label, double margin) {
    std::printf("%s %s (margin %.3e)\n", ok ? "pass" : "FAIL", label.c_str(),
                margin);
    if (!ok) ++failures;
  };

  // phi identities on random matrices
  {
    std::mt19937_64 gen(f.seed);
    std::uniform_int_distribution<int> size(2, 60);
    std::uniform_real_distribution<double> norm(0.1, 40.0);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 25; ++trial) {
      const int n = size(gen);
      Eigen::MatrixXd A(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = entry(gen);
      A *= norm(gen) / A.cwiseAbs().colwise().sum().maxCoeff();
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd E = expm(A);
      const auto [p1, p2] = phi12(A);
      const double r1 = 1e-10 * (1.0 + E.norm()) - (A * p1 - (E - I)).norm();
      const double r2 = 1e-10 * (1.0 + p1.norm()) - (A * p2 - (p1 - I)).norm();
      worst = std::min({worst, r1, r2});
    }
    verdict(worst >= 0.0, "phi identities (25 random matrices)", worst);
  }

  // dissipativity margins over random samples
  {
    std::mt19937_64 gen(f.seed + 1);
    std::uniform_real_distribution<double> gamma_dist(1e-6, f.gamma);
    std::uniform_real_distribution<double> entry(-3.0, 3.0);
    const int sizes[] = {2, 10, 100};
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      const int n = sizes[i % 3];
      const CostParams p{f.given("gamma") ? f.gamma : gamma_dist(gen), 0.7, n};
      Eigen::VectorXd x(n), u(n);
      for (int j = 0; j < n; ++j) {
        x(j) = entry(gen);
        u(j) = entry(gen);
      }
      const Eigen::VectorXd tilde_x = Eigen::VectorXd::Constant(n, 0.7);
      const Eigen::VectorXd tilde_u = Eigen::VectorXd::Zero(n);
      worst = std::min(worst, dissipativity_margin({x}, u, tilde_x, tilde_u, p));
    }
    verdict(worst >= -1e-12,
            "dissipativity margin (" + std::to_string(samples) + " samples)",
            worst);
  }

  // cheap-control bound and turnpike-theorem margin on the reference run
  {
    ExperimentConfig cfg = build_config(f, true);
    if (!f.given("target")) cfg.control.target = 0.7;
    cfg.run_name = "check";
    const TurnpikeRun run = run_turnpike(cfg);
    const Report report = build_report(run, cfg, f.lambda);
    double cheap = 0.0, theorem = 0.0;
    for (const auto& [key, value] : report) {
      if (key == "cheap_bound_margin") cheap = value;
      if (key == "theorem_margin") theorem = value;
    }
    verdict(cheap >= -1e-9, "cheap-control bound (turnpike run)", cheap);
    verdict(theorem >= 0.0, "turnpike-theorem tail bound (turnpike run)", theorem);
  }

  if (failures) {
    std::printf("status=failed checks_failed=%d\n", failures);
    return 1;
  }
  std::printf("status=ok checks=4 samples=%d\n", samples);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic multi-agent consensus runs with exponential "
               "integrators and turnpike control"};
  app.require_subcommand(1);

  FlagSet fu, ft, fc, ff, fk;
  std::string only;
  int samples = 10000;

  CLI::App* uncontrolled =
      app.add_subcommand("uncontrolled", "evolve the system with zero control");
  add_common_flags(uncontrolled, fu);

  CLI::App* turnpike =
      app.add_subcommand("turnpike", "cheap-then-static turnpike control run");
  add_common_flags(turnpike, ft);
  add_control_flags(turnpike, ft);

  CLI::App* convergence =
      app.add_subcommand("convergence", "observed-order studies");
  add_common_flags(convergence, fc);

  CLI::App* figures =
      app.add_subcommand("figures", "run the built-in experiment panels");
  add_common_flags(figures, ff);
  add_control_flags(figures, ff);
  ff.opt["only"] = figures->add_option(
      "--only", only, "panel selector (prefixes or groups, comma separated)");

  CLI::App* check = app.add_subcommand("check", "run the inequality suites");
  add_common_flags(check, fk);
  add_control_flags(check, fk);
  fk.opt["samples"] =
      check->add_option("--samples", samples, "dissipativity sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(uncontrolled)) return cmd_uncontrolled(fu);
    if (app.got_subcommand(turnpike)) return cmd_turnpike(ft);
    if (app.got_subcommand(convergence)) return cmd_convergence(fc);
    if (app.got_subcommand(figures)) return cmd_figures(ff, only);
    if (app.got_subcommand(check)) return cmd_check(fk, samples);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
