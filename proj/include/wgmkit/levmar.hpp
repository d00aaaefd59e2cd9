#pragma once

#include <Eigen/Dense>
#include <functional>

namespace wgm::lm {

// Residual callback: fills r(p). Sizes are fixed by the first call.
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Optional feasibility gate; infeasible trial steps are rejected like
// failed steps (damping raised) instead of being evaluated.
using FeasibleFn = std::function<bool(const Eigen::VectorXd&)>;

struct Options {
  int max_iterations = 200;
  double step_tol = 1e-10;    // relative parameter step declaring convergence
  double diff_step = 1e-6;    // relative forward-difference step
  double lambda_init = 1e-3;
  double lambda_max = 1e14;
};

struct Result {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // residual-variance-scaled (J^T J)^{-1}
  bool converged = false;
  int iterations = 0;
  double residual_rms = 0.0;
  double ssr = 0.0;
};

// Damped least squares with a forward-difference Jacobian. Throws
// DegenerateFitError when the normal matrix is singular or there are not
// more residuals than parameters; returns converged=false (diagnostics
// intact) when the iteration cap is hit.
Result solve(const ResidualFn& fn, Eigen::VectorXd p0, const Options& opts = {},
             const FeasibleFn& feasible = {});

}  // namespace wgm::lm
