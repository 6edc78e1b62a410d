#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fkp/monomial.hpp"

namespace fkp {

/// Truncated tensor-product oscillator basis. Dimension j holds levels
/// 0..caps[j] with frequency omegas[j] centred at centers[j].
struct BasisSpec {
  std::vector<int> caps;
  std::vector<double> omegas;
  std::vector<double> centers;

  static BasisSpec uniform(int nu, int cap, double omega = 0.5, double center = 0.0);

  int nu() const { return static_cast<int>(caps.size()); }
  Eigen::Index dim() const;
  int n_qubits() const;
  void validate() const;

  /// Row-major flat index (last dimension fastest) and its inverse.
  Eigen::Index flat_index(const std::vector<int>& levels) const;
  std::vector<int> levels(Eigen::Index flat) const;
};

/// Normalized oscillator eigenfunctions phi_0..phi_nmax at y, with
/// xi = sqrt(omega)(y - y0), by the stable three-term recurrence.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> oscillator_functions(int nmax, Scalar omega, Scalar y0, Scalar y) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phi(nmax + 1);
  const Scalar xi = sqrt(omega) * (y - y0);
  phi(0) = pow(omega / Scalar(std::numbers::pi), Scalar(0.25)) * exp(-xi * xi / Scalar(2));
  if (nmax >= 1) phi(1) = sqrt(Scalar(2)) * xi * phi(0);
  for (int n = 1; n < nmax; ++n)
    phi(n + 1) = sqrt(Scalar(2) / Scalar(n + 1)) * xi * phi(n) - sqrt(Scalar(n) / Scalar(n + 1)) * phi(n - 1);
  return phi;
}

struct LadderTerm {
  double coeff = 0.0;
  std::vector<int> create;     // beta_j
  std::vector<int> annihilate; // gamma_j
};

/// Normal-ordered polynomial sum c prod_j (a+_j)^beta_j (a-_j)^gamma_j with
/// one entry per (beta, gamma) key.
class LadderPolynomial {
 public:
  explicit LadderPolynomial(int nu = 0) : nu_(nu) {}

  int nu() const { return nu_; }
  void add(const std::vector<int>& create, const std::vector<int>& annihilate, double coeff);
  void add(const LadderPolynomial& other, double scale = 1.0);
  LadderPolynomial& prune(double tol = 1e-14);

  std::vector<LadderTerm> terms() const;
  std::size_t size() const { return terms_.size(); }
  double coeff(const std::vector<int>& create, const std::vector<int>& annihilate) const;

 private:
  int nu_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, double> terms_;
};

/// Target level and amplitude of (a+)^beta (a-)^gamma |n>; amplitude 0 when
/// n < gamma or the target exceeds cap (cap < 0 means unbounded).
std::pair<int, double> ladder_matrix_element(int beta, int gamma, int n, int cap = -1);

LadderPolynomial monomial_to_ladder(const MultiIndex& m, const BasisSpec& basis);
LadderPolynomial laplacian_ladder(const BasisSpec& basis);

/// (1/8) sum ghat ladder(y^{m+m'}) + (1/4) sum hhat ladder(y^m) - (1/2) laplacian.
LadderPolynomial assemble_fkp_ladder(const MonomialPotential& pot, const BasisSpec& basis);

struct FbrMatrix {
  Eigen::MatrixXd entries;
  BasisSpec basis;
  double asymmetry = 0.0;  // max |M - M^T| before symmetrization
};

constexpr Eigen::Index kDefaultDenseLimit = 16384;

FbrMatrix build_fbr_matrix(const LadderPolynomial& poly, const BasisSpec& basis,
                           Eigen::Index dense_limit = kDefaultDenseLimit);

/// Applies the polynomial term by term to a coefficient vector.
Eigen::VectorXd apply_ladder(const LadderPolynomial& poly, const BasisSpec& basis, const Eigen::VectorXd& x);

struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd coeffs;
};

/// k smallest eigenpairs, ascending, largest-magnitude coefficient positive.
std::vector<EigenPair> classical_eigensolve(const FbrMatrix& mat, int k);

/// sum_alpha c_alpha prod_j phi_{alpha_j}(y_j).
double eval_eigenfunction(const Eigen::VectorXd& coeffs, const BasisSpec& basis,
                          const Eigen::Ref<const Eigen::VectorXd>& y);

/// Per-dimension oscillator values at y (dimension j has caps[j] + 1 entries).
std::vector<Eigen::VectorXd> basis_values(const BasisSpec& basis, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Largest eigenvalue estimate by power iteration.
double power_iteration_max(const Eigen::MatrixXd& m, int iterations = 200);

}  // namespace fkp
