#include "vcc/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

namespace vcc {

Eigen::VectorXd finite_diff_gradient(const Objective& f, const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

namespace {

class Wrapped final : public ceres::FirstOrderFunction {
 public:
  Wrapped(const Objective& f, const Gradient& g, int n, int* evaluations)
      : f_(f), g_(g), n_(n), evaluations_(evaluations) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> x(parameters, n_);
    ++*evaluations_;
    *cost = f_(x);
    if (!std::isfinite(*cost)) return false;
    if (gradient) {
      const Eigen::VectorXd g = g_(x);
      if (!g.allFinite()) return false;
      Eigen::Map<Eigen::VectorXd>(gradient, n_) = g;
    }
    return true;
  }
  int NumParameters() const override { return n_; }

 private:
  const Objective& f_;
  const Gradient& g_;
  int n_;
  int* evaluations_;
};

}  // namespace

OptResult lbfgs_minimize(const Objective& f, const Gradient& grad, const Eigen::VectorXd& x0,
                         const LbfgsOptions& opt) {
  OptResult res;
  res.x = x0;
  if (x0.size() == 0) {
    res.value = f(x0);
    res.evaluations = 1;
    res.history.push_back(res.value);
    res.converged = true;
    return res;
  }

  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::LBFGS;
  o.line_search_type = ceres::WOLFE;
  o.line_search_interpolation_type = ceres::CUBIC;
  o.max_lbfgs_rank = opt.memory;
  o.line_search_sufficient_function_decrease = opt.c1;
  o.line_search_sufficient_curvature_decrease = opt.c2;
  o.max_num_line_search_step_size_iterations = opt.max_line_search;
  o.min_line_search_step_size = 1e-16;
  o.max_num_iterations = opt.max_iter;
  o.gradient_tolerance = opt.gtol;
  o.function_tolerance = 0.0;
  o.parameter_tolerance = 0.0;
  o.logging_type = ceres::SILENT;
  o.minimizer_progress_to_stdout = false;

  ceres::GradientProblem problem(new Wrapped(f, grad, static_cast<int>(x0.size()), &res.evaluations));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(o, problem, res.x.data(), &summary);
  for (const auto& it : summary.iterations) {
    if (it.iteration > 0 && !it.step_is_successful) continue;
    res.history.push_back(it.cost);
    if (it.iteration > 0) ++res.iterations;
  }
  res.value = f(res.x);
  const Eigen::VectorXd g = grad(res.x);
  res.evaluations += 1;
  res.gradient_norm = g.cwiseAbs().maxCoeff();
  res.converged = res.gradient_norm <= opt.gtol;
  if (res.history.empty()) res.history.push_back(res.value);
  return res;
}

}  // namespace vcc
