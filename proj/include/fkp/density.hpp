#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

namespace fkp {

/// Modified Silverman bandwidths (s, s_hat) for nd points in dimension nu.
std::pair<double, double> silverman_bandwidth(Eigen::Index nd, Eigen::Index nu);

/// Normalized point cloud (rows are realizations) with its kernel bandwidths.
struct TrainingDataset {
  Eigen::MatrixXd points;  // nd x nu
  double s = 0.0;
  double s_hat = 0.0;

  Eigen::Index nd() const { return points.rows(); }
  Eigen::Index nu() const { return points.cols(); }
};

/// Wraps points that are already centered and whitened; only the bandwidths
/// are computed.
TrainingDataset make_dataset(Eigen::MatrixXd points);

/// Centers and PCA-whitens a raw n x nu sample so that its empirical mean is
/// zero and its (n-1)-normalized covariance is the identity.
TrainingDataset normalize_dataset(const Eigen::MatrixXd& raw);

/// Empirical mean and (n-1)-normalized covariance of the rows of `points`.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> empirical_moments(const Eigen::MatrixXd& points);

/// Reads a CSV point cloud: one realization per row, optional non-numeric
/// header row.
Eigen::MatrixXd read_points_csv(const std::string& path);

/// f = log p_H together with its gradient g and Laplacian h at one point.
struct LogDensityDerivatives {
  double f = 0.0;
  Eigen::VectorXd g;
  double h = 0.0;
};

/// Gaussian kernel-density estimate p_H of a training dataset, or the
/// analytic standard normal ("Gaussian reference") density.
///
/// All evaluations go through one softmax pass over the kernels with
/// max-subtraction, so log p_H, its gradient and Laplacian stay finite far
/// from the data where every kernel underflows. Instances are immutable.
class DensityModel {
 public:
  static DensityModel gkde(TrainingDataset dataset);
  static DensityModel gaussian_reference(Eigen::Index nu);

  bool is_gaussian_reference() const { return reference_; }
  Eigen::Index nu() const { return nu_; }
  const TrainingDataset& dataset() const { return dataset_; }

  /// log c_nu = -nu log(sqrt(2 pi) s_hat) (s_hat = 1 for the reference).
  double log_c_nu() const { return log_c_nu_; }

  double log_density(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  Eigen::VectorXd grad_log_density(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  double laplacian_log_density(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  LogDensityDerivatives derivatives(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// Schroedinger potential ||g||^2 / 8 + h / 4.
  double potential_exact(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// log p_H for every row of `ys` (rows x nu); the batch path used by the
  /// Monte-Carlo estimators.
  Eigen::VectorXd log_density_rows(const Eigen::Ref<const Eigen::MatrixXd>& ys) const;

  double density(const Eigen::Ref<const Eigen::VectorXd>& y) const;

 private:
  DensityModel() = default;
  void check_point(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  bool reference_ = false;
  Eigen::Index nu_ = 0;
  TrainingDataset dataset_;
  Eigen::MatrixXd kernel_centers_;      // (s_hat / s) * eta, nd x nu
  Eigen::VectorXd center_sq_norms_;     // ||center_j||^2
  double inv_two_var_ = 0.5;            // 1 / (2 s_hat^2)
  double log_c_nu_ = 0.0;
};

}  // namespace fkp
