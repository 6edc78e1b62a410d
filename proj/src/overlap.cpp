#include "fkp/overlap.hpp"

#include <cmath>

#include "fkp/errors.hpp"
#include "fkp/pauli.hpp"
#include "fkp/random.hpp"

namespace fkp {

EtaPreparation eta_coefficients(const BasisSpec& basis, const Eigen::Ref<const Eigen::VectorXd>& eta) {
  EtaPreparation prep;
  prep.point = eta;
  const auto phi = basis_values(basis, eta);
  for (const auto& v : phi) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw ConsistencyError("eta_coefficients: every basis function vanishes at the point");
    prep.norm_factor *= norm;
    prep.coeffs.push_back(v / norm);
    prep.angles.push_back(rotation_angles(prep.coeffs.back()));
  }
  return prep;
}

Eigen::VectorXd rotation_angles(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  if (n == 0) throw InvalidInput("rotation_angles: empty coefficient vector");
  if (std::abs(c.squaredNorm() - 1.0) > 1e-12) throw ConsistencyError("rotation_angles: coefficients are not normalized");
  // Tail sums give the residual without the cancellation in 1 - sum C^2.
  Eigen::VectorXd tail(n);
  double acc = 0.0;
  for (Eigen::Index a = n - 1; a >= 0; --a) {
    tail(a) = acc;
    acc += c(a) * c(a);
  }
  Eigen::VectorXd theta(n);
  double head = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    head += c(a) * c(a);
    if (1.0 - head < -1e-12) throw ConsistencyError("rotation_angles: negative residual amplitude");
    theta(a) = std::atan2(c(a), std::sqrt(tail(a)));
  }
  return theta;
}

void append_register_preparation(Circuit& circuit, const QubitLayout& layout, int dim, const Eigen::VectorXd& angles,
                                 const std::vector<int>& controls) {
  const int size = layout.sizes[static_cast<std::size_t>(dim)];
  if (angles.size() != size) throw InvalidInput("register preparation: angle count does not match the register");
  for (int a = 0; a < size; ++a) {
    const double theta = angles(a);
    if (theta == 0.0) continue;
    Gate g = Gate::single(GateKind::RY, layout.qubit(dim, a), theta);
    for (int b = 0; b < a; ++b) g.anti_controlled_on(layout.qubit(dim, b));
    for (int q : controls) g.controlled_on(q);
    circuit.add(std::move(g));
  }
}

Circuit prepare_eta_circuit(const EtaPreparation& prep, const QubitLayout& layout) {
  if (prep.angles.size() != layout.sizes.size()) throw InvalidInput("prepare_eta_circuit: dimension mismatch");
  Circuit c(layout.n_qubits());
  for (std::size_t k = 0; k < prep.angles.size(); ++k)
    append_register_preparation(c, layout, static_cast<int>(k), prep.angles[k]);
  return c;
}

namespace {

void prepare_branch(Circuit& circuit, const BasisSpec& basis, const QubitLayout& layout, int dim,
                    const std::vector<int>& controls, const Eigen::VectorXd& t) {
  const int n = basis.caps[static_cast<std::size_t>(dim)] + 1;
  if (dim == basis.nu() - 1) {
    append_register_preparation(circuit, layout, dim, rotation_angles(t), controls);
    return;
  }
  const Eigen::Index rest = t.size() / n;
  // Row-major: level a of this register owns the contiguous slice [a*rest, (a+1)*rest).
  Eigen::VectorXd marginal(n);
  for (int a = 0; a < n; ++a) marginal(a) = t.segment(a * rest, rest).norm();
  marginal /= marginal.norm();
  append_register_preparation(circuit, layout, dim, rotation_angles(marginal), controls);
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd slice = t.segment(a * rest, rest);
    const double norm = slice.norm();
    if (norm == 0.0) continue;
    auto next = controls;
    next.push_back(layout.qubit(dim, a));
    prepare_branch(circuit, basis, layout, dim + 1, next, slice / norm);
  }
}

}  // namespace

Circuit prepare_state_circuit(const Eigen::VectorXd& coeffs, const BasisSpec& basis) {
  if (coeffs.size() != basis.dim()) throw InvalidInput("prepare_state_circuit: coefficient size mismatch");
  const double norm = coeffs.norm();
  if (!(norm > 0.0)) throw InvalidInput("prepare_state_circuit: zero vector");
  const QubitLayout layout = QubitLayout::from_basis(basis);
  Circuit c(layout.n_qubits());
  prepare_branch(c, basis, layout, 0, {}, coeffs / norm);
  return c;
}

Circuit hadamard_test_circuit(const Circuit& u_target, const Circuit& u_eta) {
  if (u_target.n_qubits() != u_eta.n_qubits()) throw CircuitError("Hadamard test: circuits act on different registers");
  const int anc = u_target.n_qubits();
  Circuit c(anc + 1);
  c.add(Gate::single(GateKind::H, anc));
  c.append(u_target.controlled_on(anc));
  c.append(u_eta.adjoint().controlled_on(anc));
  c.add(Gate::single(GateKind::H, anc));
  return c;
}

HadamardTestResult hadamard_test_overlap(const Circuit& u_target, const Circuit& u_eta, double norm_factor,
                                         std::int64_t shots, std::uint64_t seed) {
  if (shots < 0) throw InvalidInput("hadamard_test_overlap: shots must be >= 0");
  const Circuit c = hadamard_test_circuit(u_target, u_eta);
  const auto state = run_circuit(c);
  const int anc = u_target.n_qubits();
  HadamardTestResult r;
  r.shots = shots;
  const double p1 = probability_one(state, anc);
  if (shots == 0) {
    r.p_one = p1;
    r.p_zero = 1.0 - p1;
  } else {
    const auto [zeros, ones] = measure_shots(state, anc, shots, seed);
    r.p_zero = static_cast<double>(zeros) / static_cast<double>(shots);
    r.p_one = static_cast<double>(ones) / static_cast<double>(shots);
    r.stderr_ = 2.0 * std::abs(norm_factor) * std::sqrt(r.p_zero * r.p_one / static_cast<double>(shots));
  }
  r.overlap = (r.p_zero - r.p_one) * norm_factor;
  return r;
}

FkpBasis fkp_basis_classical(const DensityModel& model, const std::vector<EigenPair>& eigen, const BasisSpec& basis,
                             const Eigen::MatrixXd& points) {
  FkpBasis out;
  out.path = "classical";
  out.values.resize(points.rows(), static_cast<Eigen::Index>(eigen.size()));
  out.eigen_lambdas.resize(static_cast<Eigen::Index>(eigen.size()));
  for (std::size_t m = 0; m < eigen.size(); ++m) out.eigen_lambdas(static_cast<Eigen::Index>(m)) = eigen[m].lambda;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    const Eigen::VectorXd eta = points.row(j).transpose();
    const double w = std::exp(0.5 * model.log_density(eta));
    for (std::size_t m = 0; m < eigen.size(); ++m)
      out.values(j, static_cast<Eigen::Index>(m)) = w * eval_eigenfunction(eigen[m].coeffs, basis, eta);
  }
  return out;
}

FkpBasis fkp_basis_quantum(const DensityModel& model, const std::vector<Circuit>& eigen_circuits,
                           const Eigen::VectorXd& lambdas, const BasisSpec& basis, const Eigen::MatrixXd& points,
                           const QuantumExtractionOptions& opts) {
  const QubitLayout layout = QubitLayout::from_basis(basis);
  FkpBasis out;
  out.path = opts.shots > 0 ? "quantum-shots" : "quantum-exact";
  out.eigen_lambdas = lambdas;
  const auto cols = static_cast<Eigen::Index>(eigen_circuits.size());
  out.values.resize(points.rows(), cols);
  const CounterRng rng(opts.seed, 0x4AD7);
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    const Eigen::VectorXd eta = points.row(j).transpose();
    const EtaPreparation prep = eta_coefficients(basis, eta);
    const Circuit u_eta = prepare_eta_circuit(prep, layout);
    const double w = std::exp(0.5 * model.log_density(eta));
    for (Eigen::Index m = 0; m < cols; ++m) {
      const std::uint64_t seed = rng.bits(static_cast<std::uint64_t>(j * cols + m));
      const auto r = hadamard_test_overlap(eigen_circuits[static_cast<std::size_t>(m)], u_eta, prep.norm_factor,
                                           opts.shots, seed);
      out.values(j, m) = w * r.overlap;
    }
  }
  return out;
}

void align_signs(const Eigen::MatrixXd& a, Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("align_signs: shape mismatch");
  for (Eigen::Index m = 0; m < a.cols(); ++m)
    if (a.col(m).dot(b.col(m)) < 0.0) b.col(m) *= -1.0;
}

Eigen::VectorXd column_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("column_relative_error: shape mismatch");
  Eigen::VectorXd e(a.cols());
  for (Eigen::Index m = 0; m < a.cols(); ++m) {
    const double scale = a.col(m).cwiseAbs().maxCoeff();
    e(m) = (a.col(m) - b.col(m)).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
  }
  return e;
}

}  // namespace fkp
