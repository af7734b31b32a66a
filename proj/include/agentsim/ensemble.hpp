#pragma once

// A bundle of independently driven trajectories sharing one experiment:
// path p holds states paths[p] of shape (m+1) x N and the Brownian
// increments increments[p] of shape m x N that produced it. Controls are
// deterministic and shared across paths, one vector per step.

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace agentsim {

struct Ensemble {
  std::vector<Eigen::MatrixXd> paths;
  std::vector<Eigen::MatrixXd> increments;
  std::vector<Eigen::VectorXd> controls;

  Eigen::Index num_paths() const { return static_cast<Eigen::Index>(paths.size()); }
  Eigen::Index num_steps() const { return paths.empty() ? 0 : paths.front().rows() - 1; }
  Eigen::Index num_agents() const { return paths.empty() ? 0 : paths.front().cols(); }

  Eigen::VectorXd state(Eigen::Index path, Eigen::Index step) const {
    return paths[static_cast<size_t>(path)].row(step).transpose();
  }

  /// All paths' states at one step.
  std::vector<Eigen::VectorXd> states_at(Eigen::Index step) const {
    if (paths.empty()) throw std::invalid_argument("Ensemble: empty ensemble");
    std::vector<Eigen::VectorXd> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(p.row(step).transpose());
    return out;
  }
};

} // namespace agentsim
