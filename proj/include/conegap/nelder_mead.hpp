#pragma once

#include <functional>

#include <Eigen/Dense>

namespace conegap {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

/// Minimizes `f` from `x0` with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 1/2, 1/2). Stops after
/// `max_iterations` or when the simplex values spread by less than `ftol`.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, double step, int max_iterations,
                             double ftol = 1e-12);

}  // namespace conegap
