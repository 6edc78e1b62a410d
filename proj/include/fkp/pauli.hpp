#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fkp/ladder.hpp"

namespace fkp {

using cplx = std::complex<double>;

/// Pauli word as (x, z) bitmasks over qubits; bit q set in both masks is Y.
/// Text form puts qubit 0 first.
struct PauliWord {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  auto operator<=>(const PauliWord&) const = default;

  static PauliWord from_text(const std::string& letters);
  std::string text(int n_qubits) const;
  char letter(int q) const;
};

struct PauliString {
  PauliWord word;
  cplx coeff{1.0, 0.0};
};

/// a * b with phase tracking.
PauliString pauli_multiply(const PauliString& a, const PauliString& b);

/// Complex-weighted sum of Pauli words on n qubits.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits = 0);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::map<PauliWord, cplx>& terms() const { return terms_; }

  void add(const PauliWord& w, cplx c);
  void add(const PauliSum& other, cplx scale = 1.0);
  PauliSum& prune(double tol = 1e-14);
  cplx coeff(const PauliWord& w) const;

  static PauliSum identity(int n_qubits, cplx c = 1.0);

  /// Lines "coeff word", real coefficients written as one number and complex
  /// ones as "re+imj"; full precision.
  std::string to_text() const;

 private:
  int n_qubits_;
  std::map<PauliWord, cplx> terms_;
};

PauliSum operator*(const PauliSum& a, const PauliSum& b);

/// One-hot register placement: dimension j owns qubits
/// [offsets[j], offsets[j] + sizes[j]), level k on qubit offsets[j] + k.
struct QubitLayout {
  std::vector<int> offsets;
  std::vector<int> sizes;

  static QubitLayout from_basis(const BasisSpec& basis);
  int n_qubits() const;
  int qubit(int dim, int level) const { return offsets[static_cast<std::size_t>(dim)] + level; }
};

/// One-hot bitmask (bit q = qubit q) of a multi-index.
std::uint64_t encode_basis_state(const std::vector<int>& alpha, const QubitLayout& layout);

/// Bit text with qubit 0 first, e.g. "100".
std::string bitstring_text(std::uint64_t bits, int n_qubits);

/// sigma+_{target} sigma-_{source} summed over the valid levels of the
/// (a+)^beta (a-)^gamma transition inside register j.
PauliSum ladder_pair_to_pauli(int dim, int beta, int gamma, const QubitLayout& layout, int cap);

/// Direct map of a ladder polynomial; real Hamiltonian enforced.
PauliSum hamiltonian_to_pauli(const LadderPolynomial& poly, const QubitLayout& layout, const std::vector<int>& caps,
                              double imag_tol = 1e-12);

constexpr int kDensePauliLimit = 14;

Eigen::MatrixXcd pauli_to_dense(const PauliSum& sum, int qubit_limit = kDensePauliLimit);

/// Dense matrix of the sum restricted to encoded one-hot basis states.
Eigen::MatrixXd one_hot_restriction(const PauliSum& sum, const BasisSpec& basis);

/// PauliSum arranged for fast expectation values: words sharing an x-mask
/// collapse into one diagonal vector.
class CompiledObservable {
 public:
  CompiledObservable() = default;
  explicit CompiledObservable(const PauliSum& sum);

  int n_qubits() const { return n_qubits_; }

  /// <psi|H|psi>, real part.
  double expectation(const Eigen::VectorXcd& psi) const;

  /// H |psi>.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;

 private:
  int n_qubits_ = 0;
  std::vector<std::pair<std::uint64_t, Eigen::VectorXcd>> blocks_;
};

}  // namespace fkp
