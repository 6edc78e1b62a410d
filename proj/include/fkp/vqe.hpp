#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fkp/nelder_mead.hpp"
#include "fkp/pauli.hpp"
#include "fkp/simulator.hpp"

namespace fkp {

/// One parameterized Givens rotation exp(-i tau (X_k Y_l - Y_k X_l) / 2),
/// optionally controlled on a qubit of another register.
struct AnsatzGenerator {
  int k = 0;
  int l = 0;
  int control = -1;
};

/// One-hot preserving ansatz: per repetition, an adjacent-level Givens sweep
/// inside every register, then for each neighbouring register pair a sweep
/// on the second register controlled by each level of the first.
struct Ansatz {
  QubitLayout layout;
  std::vector<AnsatzGenerator> generators;

  static Ansatz build(const QubitLayout& layout, int repetitions = 2);
  std::size_t n_params() const { return generators.size(); }
  Circuit circuit(const Eigen::VectorXd& tau) const;
};

/// X gates preparing the one-hot state of alpha.
Circuit initial_guess_circuit(const std::vector<int>& alpha, const QubitLayout& layout);

/// Coordinate descent over levels on the diagonal <alpha|H|alpha>.
std::vector<int> mean_field_guess(const CompiledObservable& h, const BasisSpec& basis);

StateVector<double> apply_ansatz(const StateVector<double>& state, const Ansatz& ansatz, const Eigen::VectorXd& tau);

/// Exact Rayleigh quotient <psi|H|psi>.
double rayleigh_quotient(const StateVector<double>& state, const CompiledObservable& h);

/// Shot estimate: each word measured `shots` times in its eigenbasis.
double rayleigh_quotient_shots(const StateVector<double>& state, const PauliSum& h, std::int64_t shots,
                               std::uint64_t seed);

/// <psi|P|psi> for one Pauli word.
double word_expectation(const StateVector<double>& state, const PauliWord& w);

/// Sum of Hamiltonian components sum_k (1 - <Z_{j,k}>)/2 for register j.
double register_occupation(const StateVector<double>& state, const QubitLayout& layout, int dim);

struct VqeOptions {
  int restarts = 3;                // total optimizer runs, first from tau = 0
  std::uint64_t seed = 12345;
  double perturbation = 0.3;       // std-dev of restart offsets (radians)
  NelderMeadOptions nm{};
  std::int64_t shots = 0;          // 0 selects exact expectations
};

struct VqeResult {
  double lambda = 0.0;     // Rayleigh quotient at the optimum (without penalty)
  double objective = 0.0;  // minimized value (with penalty)
  Eigen::VectorXd params;
  StateVector<double> state;
  Circuit circuit;         // init followed by the optimized ansatz
  std::int64_t iterations = 0;
  std::int64_t evaluations = 0;
  bool converged = false;
  std::vector<NelderMeadTrace> trace;
};

VqeResult optimize(const PauliSum& h, const Ansatz& ansatz, const Circuit& init, const VqeOptions& opts = {});

/// Minimizes R + rho * sum_k |<psi|q_k>|^2 over the ansatz.
VqeResult solve_excited(const PauliSum& h, const Ansatz& ansatz, const Circuit& init,
                        const std::vector<StateVector<double>>& priors, double rho, const VqeOptions& opts = {});

/// 10 * largest-eigenvalue estimate of a Hermitian matrix.
double default_penalty(const Eigen::MatrixXd& fbr);

}  // namespace fkp
