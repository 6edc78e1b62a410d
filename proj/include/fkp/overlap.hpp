#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fkp/density.hpp"
#include "fkp/ladder.hpp"
#include "fkp/simulator.hpp"

namespace fkp {

/// Product-state encoding of a data point: prod_k sum_alpha phi_alpha(eta_k)|alpha>
/// = norm_factor * prod_k sum_alpha coeffs[k](alpha)|alpha>.
struct EtaPreparation {
  Eigen::VectorXd point;
  double norm_factor = 1.0;
  std::vector<Eigen::VectorXd> coeffs;  // unit vector per dimension
  std::vector<Eigen::VectorXd> angles;
};

EtaPreparation eta_coefficients(const BasisSpec& basis, const Eigen::Ref<const Eigen::VectorXd>& eta);

/// theta_a = atan(C_a / sqrt(1 - sum_{b <= a} C_b^2)), pi/2 sign(C_a) once
/// the residual vanishes.
Eigen::VectorXd rotation_angles(const Eigen::VectorXd& c);

/// RY cascade on one register: level 0 unconditioned, level a anti-controlled
/// on levels 0..a-1; extra controls restrict the whole cascade.
void append_register_preparation(Circuit& circuit, const QubitLayout& layout, int dim, const Eigen::VectorXd& angles,
                                 const std::vector<int>& controls = {});

Circuit prepare_eta_circuit(const EtaPreparation& prep, const QubitLayout& layout);

/// Circuit taking |0...0> to the one-hot encoding of a real unit vector over
/// the tensor basis (row-major, last dimension fastest).
Circuit prepare_state_circuit(const Eigen::VectorXd& coeffs, const BasisSpec& basis);

struct HadamardTestResult {
  double overlap = 0.0;  // (p_zero - p_one) * norm_factor
  double p_zero = 0.0;   // ancilla reads 0
  double p_one = 0.0;
  double stderr_ = 0.0;  // shot-noise standard error of overlap, 0 in exact mode
  std::int64_t shots = 0;
};

/// Ancilla on the last qubit: H, controlled U_target, controlled U_eta^dagger, H.
Circuit hadamard_test_circuit(const Circuit& u_target, const Circuit& u_eta);

/// shots = 0 evaluates the ancilla probabilities exactly.
HadamardTestResult hadamard_test_overlap(const Circuit& u_target, const Circuit& u_eta, double norm_factor,
                                         std::int64_t shots = 0, std::uint64_t seed = 0);

struct FkpBasis {
  Eigen::MatrixXd values;  // nd x m_opt
  Eigen::VectorXd eigen_lambdas;
  std::string path;
};

/// Classical path: column m = p_H(eta_j)^{1/2} q_m(eta_j) with q_m from
/// eval_eigenfunction.
FkpBasis fkp_basis_classical(const DensityModel& model, const std::vector<EigenPair>& eigen, const BasisSpec& basis,
                             const Eigen::MatrixXd& points);

struct QuantumExtractionOptions {
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Quantum path: q_m(eta_j) from Hadamard tests between the eigenstate
/// circuits and the eta preparation circuits.
FkpBasis fkp_basis_quantum(const DensityModel& model, const std::vector<Circuit>& eigen_circuits,
                           const Eigen::VectorXd& lambdas, const BasisSpec& basis, const Eigen::MatrixXd& points,
                           const QuantumExtractionOptions& opts = {});

/// Flips columns of `b` whose correlation with the matching column of `a` is negative.
void align_signs(const Eigen::MatrixXd& a, Eigen::MatrixXd& b);

/// Per-column max |a - b| / max |a|.
Eigen::VectorXd column_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace fkp
