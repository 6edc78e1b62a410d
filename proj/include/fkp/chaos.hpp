#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "fkp/density.hpp"
#include "fkp/multi_index.hpp"

namespace fkp {

/// Probabilists' Hermite polynomial He_n(t) by the three-term recurrence.
template <typename Scalar>
Scalar hermite_he(int n, Scalar t) {
  if (n == 0) return Scalar(1);
  Scalar prev(1), cur = t;
  for (int k = 1; k < n; ++k) {
    const Scalar next = t * cur - Scalar(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Columns 0..max_degree hold He_n(t) / sqrt(n!) for every entry of t.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> normalized_hermite_table(
    const Eigen::MatrixBase<Derived>& t, int max_degree) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(t.size(), max_degree + 1);
  out.col(0).setOnes();
  if (max_degree >= 1) out.col(1) = t;
  // psi_{n+1} = (t psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1)
  for (int n = 1; n < max_degree; ++n)
    out.col(n + 1) = (t.array() * out.col(n).array() - std::sqrt(Scalar(n)) * out.col(n - 1).array()) /
                     std::sqrt(Scalar(n + 1));
  return out;
}

/// psi_alpha(y) = prod_j He_{alpha_j}(y_j) / sqrt(alpha_j!).
double hermite_psi(const MultiIndex& alpha, const Eigen::Ref<const Eigen::VectorXd>& y);

/// psi_alpha evaluated at every row of ys for every alpha of the set
/// (rows x |set|).
Eigen::MatrixXd hermite_psi_rows(const IndexSet& set, const Eigen::Ref<const Eigen::MatrixXd>& ys);

enum class Estimator {
  Plain,     // (1/N) sum f(y) psi_alpha(y)
  Centered,  // same sum with f replaced by f - mean(f) for alpha != 0
};

const char* estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);

struct ChaosCoefficients {
  int nu = 0;
  int mu = 0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::Centered;

  IndexSet a0, a1, a2;
  Eigen::VectorXd f;         // over a0
  Eigen::VectorXd f_stderr;  // batch-means standard error, zero when exact
  Eigen::MatrixXd g;         // nu x |a1|, row j holds g_{j,alpha}
  Eigen::VectorXd h;         // over a2

  double f_at(const MultiIndex& alpha) const;
};

struct EstimationOptions {
  Estimator estimator = Estimator::Centered;
  int threads = 1;
};

/// Monte-Carlo estimate of f_alpha over A_{0,mu}; g and h are derived.
ChaosCoefficients estimate_f_coeffs(const DensityModel& model, int mu, std::int64_t n_samples, std::uint64_t seed,
                                    const EstimationOptions& opts = {});

/// Both estimators from one sampling pass.
struct ChaosEstimatePair {
  ChaosCoefficients centered;
  ChaosCoefficients plain;
};
ChaosEstimatePair estimate_f_coeffs_both(const DensityModel& model, int mu, std::int64_t n_samples,
                                         std::uint64_t seed, int threads = 1);

/// Wraps a given f table (over A_{0,mu}) and fills g, h.
ChaosCoefficients coefficients_from_f(int nu, int mu, Eigen::VectorXd f);

/// Exact chaos coefficients of the Gaussian reference density.
ChaosCoefficients gaussian_reference_coeffs(int nu, int mu);

/// g_{j,alpha} = sqrt(alpha_j + 1) f_{alpha + e_j} over A_{1,mu}.
Eigen::MatrixXd derive_g_coeffs(const IndexSet& a0, const Eigen::VectorXd& f, int mu);

/// h_alpha = sum_j sqrt((alpha_j + 1)(alpha_j + 2)) f_{alpha + 2 e_j} over A_{2,mu}.
Eigen::VectorXd derive_h_coeffs(const IndexSet& a0, const Eigen::VectorXd& f, int mu);

/// Gram table gg_{alpha beta} = sum_j g_{j,alpha} g_{j,beta}.
inline Eigen::MatrixXd gram_gg(const Eigen::MatrixXd& g) { return g.transpose() * g; }

struct ConvergenceNorms {
  double e_f = 0.0;
  double e_g = 0.0;
  double e_h = 0.0;
};

ConvergenceNorms convergence_norms(const ChaosCoefficients& coeffs);
ConvergenceNorms gaussian_reference_norms(int nu);

/// tr(gg) / 8 + h_0 / 4.
double potential_mean_diagnostic(const ChaosCoefficients& coeffs);

/// Truncated potential in Hermite form:
/// (1/8) sum_j (sum_alpha g_{j,alpha} psi_alpha)^2 + (1/4) sum_alpha h_alpha psi_alpha.
double potential_hermite(const ChaosCoefficients& coeffs, const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace fkp
