#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace vcc {

using Objective = std::function<double(const Eigen::VectorXd&)>;
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
Eigen::VectorXd finite_diff_gradient(const Objective& f, const Eigen::VectorXd& x, double h = 1e-6);

struct LbfgsOptions {
  double gtol = 1e-7;   ///< stop when max |g_i| <= gtol
  int max_iter = 2000;
  int memory = 10;
  double c1 = 1e-4;     ///< sufficient decrease
  double c2 = 0.9;      ///< curvature (strong Wolfe)
  int max_line_search = 40;
};

struct OptResult {
  double value = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
  int evaluations = 0;
  double gradient_norm = 0.0;  ///< infinity norm at x
  bool converged = false;
  std::vector<double> history;  ///< objective after each accepted step (history[0] at x0)
};

/// Limited-memory BFGS with a Wolfe line search (Ceres GradientProblemSolver).
/// Objective or gradient values that are not finite count as failed trial
/// points. converged is true iff the final max |g_i| <= gtol.
OptResult lbfgs_minimize(const Objective& f, const Gradient& grad, const Eigen::VectorXd& x0,
                         const LbfgsOptions& options = {});

}  // namespace vcc
