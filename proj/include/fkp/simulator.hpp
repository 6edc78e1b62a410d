#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fkp/errors.hpp"
#include "fkp/pauli.hpp"

namespace fkp {

enum class GateKind { X, Y, Z, H, S, RX, RY, RZ, CNOT, Unitary2, Givens };

const char* gate_name(GateKind k);

/// One gate. Rotations follow R_P(theta) = exp(-i theta P) (no half angle).
/// Givens acts on targets (k, l) as exp(-i theta (X_k Y_l - Y_k X_l) / 2).
/// CNOT is X on targets[0] with the control listed in `controls`.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<int> controls;       // must be |1>
  std::vector<int> anti_controls;  // must be |0>
  double theta = 0.0;
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();  // Unitary2 only

  static Gate single(GateKind k, int target, double theta = 0.0);
  static Gate cnot(int control, int target);
  static Gate unitary(const Eigen::Matrix2cd& u, int target);
  static Gate givens(int k, int l, double theta);

  Gate& controlled_on(int q);
  Gate& anti_controlled_on(int q);

  /// 2x2 matrix of a single-target gate (not Givens).
  Eigen::Matrix2cd unitary_2x2() const;
  Gate adjoint() const;
  std::string text() const;
};

class Circuit {
 public:
  explicit Circuit(int n_qubits = 0) : n_qubits_(n_qubits) {}

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  Circuit& add(Gate g);
  Circuit& append(const Circuit& other);

  /// Reversed sequence of adjoint gates.
  Circuit adjoint() const;

  /// Every gate additionally controlled on `q`; the result spans
  /// max(n_qubits, q + 1) qubits.
  Circuit controlled_on(int q) const;

  /// Validates indices against `n_qubits`.
  void validate() const;

  /// One gate per line: "kind targets controls params".
  std::string dump() const;

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
};

constexpr int kDefaultQubitLimit = 24;

template <typename Scalar>
using StateVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Computational basis state |bits> (bit q = qubit q).
template <typename Scalar = double>
StateVector<Scalar> basis_state(int n_qubits, std::uint64_t bits = 0, int qubit_limit = kDefaultQubitLimit) {
  if (n_qubits < 0 || n_qubits > qubit_limit)
    throw CapacityError("statevector of " + std::to_string(n_qubits) + " qubits exceeds the limit " +
                        std::to_string(qubit_limit));
  StateVector<Scalar> s = StateVector<Scalar>::Zero(Eigen::Index{1} << n_qubits);
  s(static_cast<Eigen::Index>(bits)) = 1;
  return s;
}

namespace detail {

inline void check_gate(const Gate& g, int n_qubits) {
  auto in_range = [&](int q) { return q >= 0 && q < n_qubits; };
  std::uint64_t used = 0;
  auto claim = [&](int q, const char* role) {
    if (!in_range(q)) throw CircuitError(std::string(role) + " qubit " + std::to_string(q) + " out of range");
    if ((used >> q) & 1U) throw CircuitError("qubit " + std::to_string(q) + " used twice in one gate");
    used |= std::uint64_t{1} << q;
  };
  const std::size_t want = g.kind == GateKind::Givens ? 2 : 1;
  if (g.targets.size() != want) throw CircuitError(std::string(gate_name(g.kind)) + ": wrong number of targets");
  for (int q : g.targets) claim(q, "target");
  for (int q : g.controls) claim(q, "control");
  for (int q : g.anti_controls) claim(q, "anti-control");
  if (g.kind == GateKind::CNOT && g.controls.empty()) throw CircuitError("CNOT needs a control");
}

}  // namespace detail

/// Applies one gate in place.
template <typename Scalar>
void apply_gate(StateVector<Scalar>& state, const Gate& g) {
  using C = std::complex<Scalar>;
  const Eigen::Index dim = state.size();
  const int n = static_cast<int>(std::countr_zero(static_cast<std::uint64_t>(dim)));
  detail::check_gate(g, n);
  std::uint64_t cmask = 0, amask = 0;
  for (int q : g.controls) cmask |= std::uint64_t{1} << q;
  for (int q : g.anti_controls) amask |= std::uint64_t{1} << q;
  auto active = [&](std::uint64_t b) { return (b & cmask) == cmask && (b & amask) == 0; };

  if (g.kind == GateKind::Givens) {
    const std::uint64_t bk = std::uint64_t{1} << g.targets[0], bl = std::uint64_t{1} << g.targets[1];
    const Scalar c = std::cos(Scalar(g.theta)), s = std::sin(Scalar(g.theta));
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      if ((b & bk) == 0 || (b & bl) != 0 || !active(b)) continue;
      const auto i10 = static_cast<Eigen::Index>(b), i01 = static_cast<Eigen::Index>((b ^ bk) | bl);
      const C a = state(i10), d = state(i01);
      state(i10) = c * a - s * d;
      state(i01) = s * a + c * d;
    }
    return;
  }
  const Eigen::Matrix2cd u = g.unitary_2x2();
  const C u00(Scalar(u(0, 0).real()), Scalar(u(0, 0).imag())), u01(Scalar(u(0, 1).real()), Scalar(u(0, 1).imag()));
  const C u10(Scalar(u(1, 0).real()), Scalar(u(1, 0).imag())), u11(Scalar(u(1, 1).real()), Scalar(u(1, 1).imag()));
  const std::uint64_t bt = std::uint64_t{1} << g.targets[0];
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
    if ((b & bt) != 0 || !active(b)) continue;
    const auto i0 = static_cast<Eigen::Index>(b), i1 = static_cast<Eigen::Index>(b | bt);
    const C a0 = state(i0), a1 = state(i1);
    state(i0) = u00 * a0 + u01 * a1;
    state(i1) = u10 * a0 + u11 * a1;
  }
}

template <typename Scalar>
void apply_circuit(StateVector<Scalar>& state, const Circuit& circuit) {
  if ((Eigen::Index{1} << circuit.n_qubits()) != state.size())
    throw CircuitError("circuit and state qubit counts differ");
  for (const auto& g : circuit.gates()) apply_gate(state, g);
}

/// Circuit applied to |0...0>.
StateVector<double> run_circuit(const Circuit& circuit, int qubit_limit = kDefaultQubitLimit);

/// Exact <psi|H|psi> (real part).
double expectation_pauli(const StateVector<double>& state, const PauliSum& obs);

/// Probability that qubit reads 1.
double probability_one(const StateVector<double>& state, int qubit);

/// Binomial shot counts (count0, count1) for a Z measurement of one qubit.
std::pair<std::int64_t, std::int64_t> measure_shots(const StateVector<double>& state, int qubit, std::int64_t shots,
                                                    std::uint64_t seed);

/// Dense unitary of a circuit (verification only).
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit, int qubit_limit = 12);

}  // namespace fkp
