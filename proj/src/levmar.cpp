#include "wgmkit/levmar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wgmkit/errors.hpp"

namespace wgm::lm {

namespace {

double sum_squares(const Eigen::VectorXd& r) { return r.squaredNorm(); }

void jacobian(const ResidualFn& fn, const FeasibleFn& feasible, const Eigen::VectorXd& p,
              const Eigen::VectorXd& r0, double rel_step, Eigen::MatrixXd& jac,
              Eigen::VectorXd& scratch) {
  const auto n = r0.size();
  const auto k = p.size();
  jac.resize(n, k);
  Eigen::VectorXd pt = p;
  for (Eigen::Index j = 0; j < k; ++j) {
    double h = rel_step * std::max(std::abs(p[j]), 1.0);
    pt[j] = p[j] + h;
    if (feasible && !feasible(pt)) {  // fall back to a backward step
      h = -h;
      pt[j] = p[j] + h;
    }
    fn(pt, scratch);
    jac.col(j) = (scratch - r0) / h;
    pt[j] = p[j];
  }
}

}  // namespace

Result solve(const ResidualFn& fn, Eigen::VectorXd p0, const Options& opts,
             const FeasibleFn& feasible) {
  if (feasible && !feasible(p0))
    throw std::domain_error("least squares: initial guess violates constraints");

  Eigen::VectorXd r;
  fn(p0, r);
  if (!r.allFinite())
    throw std::domain_error("least squares: non-finite residual at the initial guess");
  const auto n = r.size();
  const auto k = p0.size();
  if (n <= k)
    throw DegenerateFitError("least squares: need more residuals than parameters");

  Eigen::VectorXd p = std::move(p0);
  double ssr = sum_squares(r);
  double lambda = opts.lambda_init;

  Eigen::MatrixXd jac;
  Eigen::VectorXd scratch(n);
  Eigen::MatrixXd normal;
  bool converged = false;
  int iter = 0;

  for (; iter < opts.max_iterations && !converged; ++iter) {
    jacobian(fn, feasible, p, r, opts.diff_step, jac, scratch);
    if (!jac.allFinite())
      throw DegenerateFitError("least squares: non-finite Jacobian");
    normal = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;

    bool stepped = false;
    while (lambda <= opts.lambda_max) {
      Eigen::MatrixXd damped = normal;
      for (Eigen::Index j = 0; j < k; ++j) {
        const double d = normal(j, j);
        damped(j, j) = d + lambda * (d > 0.0 ? d : 1.0);
      }
      const Eigen::VectorXd delta = damped.ldlt().solve(-grad);
      if (delta.allFinite()) {
        const Eigen::VectorXd trial = p + delta;
        if (!feasible || feasible(trial)) {
          fn(trial, scratch);
          const double trial_ssr =
              scratch.allFinite() ? sum_squares(scratch) : std::numeric_limits<double>::infinity();
          if (trial_ssr < ssr) {
            // accepted: relative step size decides convergence
            double max_rel = 0.0;
            for (Eigen::Index j = 0; j < k; ++j)
              max_rel = std::max(max_rel, std::abs(delta[j]) / std::max(std::abs(p[j]), 1.0));
            const bool stationary = (ssr - trial_ssr) <= 1e-14 * std::max(ssr, 1e-300);
            p = trial;
            r = scratch;
            ssr = trial_ssr;
            lambda = std::max(lambda * 0.2, 1e-12);
            stepped = true;
            if (max_rel < opts.step_tol || stationary) converged = true;
            break;
          }
        }
      }
      lambda *= 4.0;
    }
    if (!stepped) {
      // Damping exhausted without an acceptable step: the residual is
      // stationary at working precision.
      converged = true;
    }
  }

  // Final Jacobian at the solution for the covariance estimate.
  jacobian(fn, feasible, p, r, opts.diff_step, jac, scratch);
  if (!jac.allFinite())
    throw DegenerateFitError("least squares: non-finite Jacobian at the solution");
  normal = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible())
    throw DegenerateFitError("least squares: singular normal matrix");
  const double sigma2 = ssr / static_cast<double>(n - k);

  Result out;
  out.params = p;
  out.covariance = sigma2 * lu.inverse();
  out.converged = converged;
  out.iterations = iter;
  out.ssr = ssr;
  out.residual_rms = std::sqrt(ssr / static_cast<double>(n));
  return out;
}

}  // namespace wgm::lm
