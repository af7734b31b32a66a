#pragma once

// Interaction kernels p(x, y) coupling pairs of agents.
//
// The Cucker-Smale form is p(x, y) = 1 / (eps * (alpha^2 + (x - y)^2)).
// The non-symmetric variant replaces eps by a column weight
// eps_l = eps_min + (eps_max - eps_min) * l / (N - 1), where l is the
// zero-based index of the influencing agent, so different columns of the
// interaction matrix get different magnitudes.

#include <functional>
#include <optional>
#include <stdexcept>

namespace agentsim {

struct Kernel {
  enum class Type { SymmetricCS, NonSymmetricCS, Custom };

  using CustomFn = std::function<double(double x, double y, int col)>;

  Type type = Type::SymmetricCS;
  double alpha = 0.1;   // denominator regularization, > 0
  double epsilon = 1.0; // SymmetricCS stiffness scale, > 0
  double eps_min = 0.0; // NonSymmetricCS column-weight range
  double eps_max = 0.0;
  int n_agents = 0;     // NonSymmetricCS needs N for the column weights

  CustomFn custom_eval;
  CustomFn custom_ddx;
  CustomFn custom_ddy;
  std::optional<double> custom_bound;

  static Kernel symmetric_cs(double epsilon, double alpha) {
    if (epsilon <= 0 || alpha <= 0)
      throw std::invalid_argument("Kernel: epsilon and alpha must be positive");
    Kernel k;
    k.type = Type::SymmetricCS;
    k.epsilon = epsilon;
    k.alpha = alpha;
    return k;
  }

  static Kernel nonsymmetric_cs(double eps_min, double eps_max, double alpha,
                                int n_agents) {
    if (eps_min <= 0 || eps_max <= 0 || alpha <= 0)
      throw std::invalid_argument("Kernel: eps_min, eps_max, alpha must be positive");
    if (eps_min > eps_max)
      throw std::invalid_argument("Kernel: eps_min must not exceed eps_max");
    if (n_agents < 2)
      throw std::invalid_argument("Kernel: non-symmetric kernel needs n_agents >= 2");
    Kernel k;
    k.type = Type::NonSymmetricCS;
    k.eps_min = eps_min;
    k.eps_max = eps_max;
    k.alpha = alpha;
    k.n_agents = n_agents;
    return k;
  }

  static Kernel custom(CustomFn eval, CustomFn ddx, CustomFn ddy,
                       std::optional<double> bound = std::nullopt) {
    Kernel k;
    k.type = Type::Custom;
    k.custom_eval = std::move(eval);
    k.custom_ddx = std::move(ddx);
    k.custom_ddy = std::move(ddy);
    k.custom_bound = bound;
    return k;
  }

  // eps or eps_l, depending on the variant; col is the zero-based index of
  // the influencing agent and is ignored by the symmetric kernel.
  double column_scale(int col) const {
    if (type == Type::NonSymmetricCS) {
      if (col < 0 || col >= n_agents)
        throw std::invalid_argument("Kernel: column index out of range");
      return eps_min +
             (eps_max - eps_min) * static_cast<double>(col) / (n_agents - 1);
    }
    return epsilon;
  }

  double eval(double x, double y, int col = 0) const {
    if (type == Type::Custom) return custom_eval(x, y, col);
    const double d = x - y;
    return 1.0 / (column_scale(col) * (alpha * alpha + d * d));
  }

  double d_dx(double x, double y, int col = 0) const {
    if (type == Type::Custom) return custom_ddx(x, y, col);
    const double d = x - y;
    const double q = alpha * alpha + d * d;
    return -2.0 * d / (column_scale(col) * q * q);
  }

  double d_dy(double x, double y, int col = 0) const {
    if (type == Type::Custom) return custom_ddy(x, y, col);
    return -d_dx(x, y, col);
  }

  /// Uniform bound M_p with |p(x, y)| <= M_p for all x, y.
  double bound() const {
    switch (type) {
      case Type::SymmetricCS:
        return 1.0 / (epsilon * alpha * alpha);
      case Type::NonSymmetricCS:
        return 1.0 / (eps_min * alpha * alpha);
      case Type::Custom:
        if (!custom_bound)
          throw std::runtime_error("Kernel: custom kernel has no declared bound");
        return *custom_bound;
    }
    throw std::logic_error("Kernel: unknown type");
  }
};

} // namespace agentsim
