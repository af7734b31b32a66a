#pragma once

// Run persistence. Each completed run writes, under cfg.out_dir:
//
//   <name>_config.txt   key = value echo of the configuration (re-readable)
//   <name>_mean.csv     m+1 rows, columns: time, agent_0 .. agent_{N-1}
//   <name>_paths.csv    per-path states, columns: path, time, agents
//   <name>_report.csv   key,value rows with costs and margins
//   <name>_plot.py      matplotlib script rendering the mean trajectories
//
// CSV files carry no header row and all floating-point values are printed
// with 17 significant digits, so identical runs produce identical bytes.

#include "agentsim/control.hpp"
#include "agentsim/ensemble.hpp"
#include "agentsim/sim.hpp"

#include <string>
#include <utility>
#include <vector>

namespace agentsim {

using Report = std::vector<std::pair<std::string, double>>;

std::string format_double(double v);

void write_config(const ExperimentConfig& cfg, const std::string& path);
/// Parse a key = value config file; keys missing from the file keep the
/// values already present in cfg.
void read_config(const std::string& path, ExperimentConfig& cfg);

struct RunFiles {
  std::string config_txt;
  std::string mean_csv;
  std::string paths_csv;
  std::string report_csv;
  std::string plot_py;
};

/// Cost/margin rows for an uncontrolled run.
Report build_report(const Ensemble& e, const ExperimentConfig& cfg);
/// Cost/margin rows for a turnpike run (adds switch data and the Lemma /
/// Theorem margins, evaluated with the given interior fraction lambda).
Report build_report(const TurnpikeRun& run, const ExperimentConfig& cfg,
                    double lambda);

RunFiles write_run(const Ensemble& e, const ControlPlan* plan,
                   const ExperimentConfig& cfg, const Report& report);

} // namespace agentsim
