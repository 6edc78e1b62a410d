#include "fkp/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "fkp/errors.hpp"

namespace fkp {

namespace {

constexpr Eigen::Index kRowBlock = 256;

bool parse_double(const std::string& token, double& out) {
  std::istringstream is(token);
  is >> out;
  if (!is) return false;
  is >> std::ws;
  return is.eof();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return fields;
}

}  // namespace

std::pair<double, double> silverman_bandwidth(Eigen::Index nd, Eigen::Index nu) {
  if (nd < 2 || nu < 1) throw InvalidInput("silverman_bandwidth: need nd >= 2 and nu >= 1");
  const double n = static_cast<double>(nd);
  const double d = static_cast<double>(nu);
  const double s = std::pow(4.0 / (n * (2.0 + d)), 1.0 / (d + 4.0));
  const double s_hat = s / std::sqrt(s * s + (n - 1.0) / n);
  return {s, s_hat};
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> empirical_moments(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw InvalidInput("empirical_moments: need at least two points");
  Eigen::VectorXd mean = points.colwise().mean().transpose();
  const Eigen::MatrixXd centered = points.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  return {std::move(mean), std::move(cov)};
}

TrainingDataset make_dataset(Eigen::MatrixXd points) {
  if (points.rows() < 2 || points.cols() < 1) throw InvalidInput("dataset needs at least two points of dimension >= 1");
  if (!points.allFinite()) throw InvalidInput("dataset contains non-finite values");
  TrainingDataset ds;
  std::tie(ds.s, ds.s_hat) = silverman_bandwidth(points.rows(), points.cols());
  ds.points = std::move(points);
  return ds;
}

TrainingDataset normalize_dataset(const Eigen::MatrixXd& raw) {
  if (raw.rows() < 2) throw InvalidInput("normalize_dataset: need n >= 2 realizations");
  if (raw.cols() < 1) throw InvalidInput("normalize_dataset: need nu >= 1");
  if (!raw.allFinite()) throw InvalidInput("normalize_dataset: non-finite values");

  const auto [mean, cov] = empirical_moments(raw);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() <= 1e-12 * scale) throw DegenerateDataset("degenerate dataset: covariance is singular");

  // PCA whitening: project on principal axes, scale each to unit variance.
  const Eigen::MatrixXd whitener = eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::MatrixXd pts = (raw.rowwise() - mean.transpose()) * whitener;

  // Second pass removes the residual rounding in the mean.
  pts.rowwise() -= pts.colwise().mean();
  return make_dataset(std::move(pts));
}

Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_double(fields[i], values[i]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw IoError(path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    first = false;
    if (!rows.empty() && values.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(line_no) + ": inconsistent column count");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IoError("dataset file has no data rows: " + path);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < out.rows(); ++r)
    for (Eigen::Index c = 0; c < out.cols(); ++c) out(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return out;
}

DensityModel DensityModel::gkde(TrainingDataset dataset) {
  if (dataset.nd() < 1 || dataset.nu() < 1) throw InvalidInput("gkde: empty dataset");
  if (!(dataset.s > 0.0) || !(dataset.s_hat > 0.0)) throw InvalidInput("gkde: bandwidths must be positive");
  DensityModel m;
  m.nu_ = dataset.nu();
  m.kernel_centers_ = (dataset.s_hat / dataset.s) * dataset.points;
  m.center_sq_norms_ = m.kernel_centers_.rowwise().squaredNorm();
  m.inv_two_var_ = 1.0 / (2.0 * dataset.s_hat * dataset.s_hat);
  m.log_c_nu_ = -static_cast<double>(m.nu_) * std::log(std::sqrt(2.0 * std::numbers::pi) * dataset.s_hat);
  m.dataset_ = std::move(dataset);
  return m;
}

DensityModel DensityModel::gaussian_reference(Eigen::Index nu) {
  if (nu < 1) throw InvalidInput("gaussian_reference: nu must be >= 1");
  DensityModel m;
  m.reference_ = true;
  m.nu_ = nu;
  m.log_c_nu_ = -0.5 * static_cast<double>(nu) * std::log(2.0 * std::numbers::pi);
  return m;
}

void DensityModel::check_point(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (y.size() != nu_) throw InvalidInput("point dimension does not match the density model");
  if (!y.allFinite()) throw InvalidInput("non-finite evaluation point");
}

LogDensityDerivatives DensityModel::derivatives(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  check_point(y);
  LogDensityDerivatives out;
  const double nu = static_cast<double>(nu_);
  if (reference_) {
    out.f = log_c_nu_ - 0.5 * y.squaredNorm();
    out.g = -y;
    out.h = -nu;
    return out;
  }
  const Eigen::Index nd = kernel_centers_.rows();
  Eigen::VectorXd dist2 = (kernel_centers_.rowwise() - y.transpose()).rowwise().squaredNorm();
  Eigen::VectorXd expo = -inv_two_var_ * dist2;
  const double top = expo.maxCoeff();
  Eigen::VectorXd w = (expo.array() - top).exp();
  const double z = w.sum();
  w /= z;
  out.f = log_c_nu_ + top + std::log(z) - std::log(static_cast<double>(nd));

  const double inv_var = 2.0 * inv_two_var_;  // 1 / s_hat^2
  const Eigen::VectorXd mean_center = kernel_centers_.transpose() * w;
  out.g = -inv_var * (y - mean_center);
  out.h = -out.g.squaredNorm() - nu * inv_var + inv_var * inv_var * w.dot(dist2);
  return out;
}

double DensityModel::log_density(const Eigen::Ref<const Eigen::VectorXd>& y) const { return derivatives(y).f; }

Eigen::VectorXd DensityModel::grad_log_density(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return derivatives(y).g;
}

double DensityModel::laplacian_log_density(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return derivatives(y).h;
}

double DensityModel::potential_exact(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  const auto d = derivatives(y);
  return d.g.squaredNorm() / 8.0 + d.h / 4.0;
}

double DensityModel::density(const Eigen::Ref<const Eigen::VectorXd>& y) const { return std::exp(log_density(y)); }

Eigen::VectorXd DensityModel::log_density_rows(const Eigen::Ref<const Eigen::MatrixXd>& ys) const {
  if (ys.cols() != nu_) throw InvalidInput("log_density_rows: column count does not match nu");
  const Eigen::Index n = ys.rows();
  Eigen::VectorXd out(n);
  if (reference_) {
    out = (log_c_nu_ - 0.5 * ys.rowwise().squaredNorm().array()).matrix();
    return out;
  }
  const double log_nd = std::log(static_cast<double>(kernel_centers_.rows()));
  Eigen::MatrixXd expo;
  for (Eigen::Index r0 = 0; r0 < n; r0 += kRowBlock) {
    const Eigen::Index rows = std::min(kRowBlock, n - r0);
    const auto block = ys.middleRows(r0, rows);
    // -||y - c||^2 / (2 s_hat^2), expanded so the cross term is one GEMM.
    expo.noalias() = (2.0 * inv_two_var_) * (block * kernel_centers_.transpose());
    expo.colwise() -= inv_two_var_ * block.rowwise().squaredNorm();
    expo.rowwise() -= inv_two_var_ * center_sq_norms_.transpose();
    const Eigen::VectorXd top = expo.rowwise().maxCoeff();
    expo.colwise() -= top;
    const Eigen::VectorXd z = expo.array().exp().rowwise().sum();
    out.segment(r0, rows) = (log_c_nu_ - log_nd + top.array() + z.array().log()).matrix();
  }
  return out;
}

}  // namespace fkp
