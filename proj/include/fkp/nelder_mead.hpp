#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fkp {

struct NelderMeadOptions {
  double initial_step = 0.25;
  double f_tol = 1e-8;        // stop when max f - min f over the simplex drops below this
  std::int64_t max_evals = 0; // 0 selects 2000 * dimension
  bool rebuild_on_converge = true;  // restart the simplex at the optimum until it stops improving
};

struct NelderMeadTrace {
  std::int64_t iteration = 0;
  double best = 0.0;
  double spread = 0.0;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t iterations = 0;
  bool converged = false;
  std::vector<NelderMeadTrace> trace;
};

/// Downhill simplex with the standard coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace fkp
