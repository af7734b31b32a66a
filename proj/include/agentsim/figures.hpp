#pragma once

// The built-in experiment panels. Names are stable identifiers: test1a/b are
// the stochastic stiff-kernel runs (EM at m = 25 oscillates, SERB does not;
// EM recovers at larger m), test1c the non-stiff comparison, test1d/e the
// deterministic comparison (sigma = 0), test2 the turnpike-controlled runs
// including the non-symmetric kernel.

#include "agentsim/run_io.hpp"
#include "agentsim/sim.hpp"

#include <string>
#include <vector>

namespace agentsim {

struct PanelSpec {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

std::vector<PanelSpec> figure_panels(std::uint64_t seed, const std::string& out_dir);

/// Panels selected by --only tokens (comma separated). A token matches panels
/// by name prefix; the group aliases "test1" (the stiff stochastic set,
/// test1a + test1b) and "test2" (all turnpike panels) are also accepted.
/// An empty selector keeps every panel.
std::vector<PanelSpec> select_panels(const std::vector<PanelSpec>& all,
                                     const std::string& only);

/// Run one panel and persist its outputs; returns the written files.
RunFiles run_panel(const PanelSpec& panel, double lambda = 0.5);

} // namespace agentsim
