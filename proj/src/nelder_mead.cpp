#include "fkp/nelder_mead.hpp"

#include <algorithm>
#include <numeric>

#include "fkp/errors.hpp"

namespace fkp {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts) {
  if (!x0.allFinite()) throw InvalidInput("nelder_mead: initial point must be finite");
  const Eigen::Index n = x0.size();
  const std::int64_t max_evals = opts.max_evals > 0 ? opts.max_evals : 2000 * std::max<Eigen::Index>(n, 1);

  NelderMeadResult res;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    return fn(x);
  };

  res.x = x0;
  res.f = eval(x0);
  if (n == 0) {
    res.converged = true;
    return res;
  }

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1));
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  std::vector<std::size_t> order(static_cast<std::size_t>(n + 1));

  auto build_simplex = [&](const Eigen::VectorXd& base, double base_f) {
    pts[0] = base;
    vals[0] = base_f;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd p = base;
      p(i) += opts.initial_step;
      pts[static_cast<std::size_t>(i + 1)] = p;
      vals[static_cast<std::size_t>(i + 1)] = eval(p);
    }
  };

  build_simplex(res.x, res.f);
  double last_restart_best = res.f;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    const double spread = vals[worst] - vals[best];
    res.trace.push_back({res.iterations, vals[best], spread});
    if (vals[best] < res.f) {
      res.f = vals[best];
      res.x = pts[best];
    }

    if (spread < opts.f_tol) {
      // Rebuilding the simplex at the optimum guards against collapse onto a
      // non-stationary point.
      if (opts.rebuild_on_converge && last_restart_best - res.f > opts.f_tol && res.evaluations + n < max_evals) {
        last_restart_best = res.f;
        build_simplex(res.x, res.f);
        continue;
      }
      res.converged = true;
      break;
    }
    if (res.evaluations >= max_evals) break;
    ++res.iterations;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + kReflect * (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + kContract * (xr - centroid))
                : Eigen::VectorXd(centroid + kContract * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + kShrink * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  return res;
}

}  // namespace fkp
