#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fkp/errors.hpp"
#include "fkp/random.hpp"
#include "fkp/simulator.hpp"
#include "oracles.hpp"

using namespace fkp;
using C = std::complex<double>;

namespace {

// exp(-i theta P) for a 2x2 Pauli by the eigendecomposition of P.
Eigen::Matrix2cd rotation_oracle(char p, double theta) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(oracle::pauli_matrix(p));
  Eigen::Vector2cd d;
  for (int i = 0; i < 2; ++i) d(i) = std::exp(C(0, -theta) * es.eigenvalues()(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().inverse();
}

StateVector<double> random_state(int n, std::uint64_t seed) {
  const CounterRng rng(seed);
  const auto re = rng.normal_block(0, Eigen::Index{1} << n, 2);
  StateVector<double> psi(re.rows());
  for (Eigen::Index i = 0; i < re.rows(); ++i) psi(i) = {re(i, 0), re(i, 1)};
  return psi.normalized();
}

}  // namespace

TEST(Gates, RotationConvention) {
  for (double theta : {0.0, 0.3, 1.1, -2.4}) {
    Circuit c(1);
    c.add(Gate::single(GateKind::RY, 0, theta));
    const auto s = run_circuit(c);
    EXPECT_NEAR(std::abs(s(0) - C(std::cos(theta), 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s(1) - C(std::sin(theta), 0)), 0.0, 1e-15);
    for (auto [k, p] : {std::pair{GateKind::RX, 'X'}, {GateKind::RY, 'Y'}, {GateKind::RZ, 'Z'}}) {
      const auto u = Gate::single(k, 0, theta).unitary_2x2();
      EXPECT_LT((u - rotation_oracle(p, theta)).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(Gates, GivensSubspaceAction) {
  const double tau = 0.7;
  Circuit c(2);
  c.add(Gate::single(GateKind::X, 0));
  c.add(Gate::givens(0, 1, tau));
  const auto s = run_circuit(c);
  EXPECT_NEAR(std::abs(s(1) - C(std::cos(tau), 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(2) - C(std::sin(tau), 0)), 0.0, 1e-15);
  // Matches exp(-i tau (X_0 Y_1 - Y_0 X_1) / 2) on the full space.
  const Eigen::MatrixXcd gen = 0.5 * (oracle::word_matrix("XY") - oracle::word_matrix("YX"));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen);
  Eigen::VectorXcd d(4);
  for (int i = 0; i < 4; ++i) d(i) = std::exp(C(0, -tau) * es.eigenvalues()(i));
  const Eigen::MatrixXcd ref = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().inverse();
  Circuit g(2);
  g.add(Gate::givens(0, 1, tau));
  EXPECT_LT((circuit_unitary(g) - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Gates, CircuitUnitaryMatchesKronecker) {
  Circuit c(3);
  c.add(Gate::single(GateKind::H, 0));
  c.add(Gate::single(GateKind::RX, 2, 0.4));
  c.add(Gate::cnot(0, 1));
  c.add(Gate::single(GateKind::S, 1));
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Eigen::Matrix2cd s;
  s << 1, 0, 0, C(0, 1);
  // CNOT(0 -> 1) built as |0><0|_0 + |1><1|_0 X_1.
  Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero(), p1 = Eigen::Matrix2cd::Zero();
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  const Eigen::MatrixXcd cnot = oracle::embed(p0, 0, 3) + oracle::embed(p1, 0, 3) * oracle::embed(oracle::pauli_matrix('X'), 1, 3);
  const Eigen::MatrixXcd ref =
      oracle::embed(s, 1, 3) * cnot * oracle::embed(rotation_oracle('X', 0.4), 2, 3) * oracle::embed(h, 0, 3);
  EXPECT_LT((circuit_unitary(c) - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gates, ControlsAndAntiControls) {
  Gate g = Gate::single(GateKind::X, 2);
  g.controlled_on(0).anti_controlled_on(1);
  Circuit c(3);
  c.add(g);
  const auto u = circuit_unitary(c);
  for (std::uint64_t b = 0; b < 8; ++b) {
    const bool fire = (b & 1U) && !(b & 2U);
    const std::uint64_t out = fire ? b ^ 4U : b;
    EXPECT_NEAR(std::abs(u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(b))), 1.0, 1e-15);
  }
}

TEST(Circuits, AdjointInverts) {
  Circuit c(3);
  c.add(Gate::single(GateKind::RY, 0, 0.3));
  c.add(Gate::givens(0, 2, 1.2).controlled_on(1));
  c.add(Gate::single(GateKind::S, 1));
  c.add(Gate::single(GateKind::RZ, 2, -0.8).anti_controlled_on(0));
  Circuit both = c;
  both.append(c.adjoint());
  EXPECT_LT((circuit_unitary(both) - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-14);
  const Circuit wide = c.controlled_on(3);
  EXPECT_EQ(wide.n_qubits(), 4);
  // Ancilla at 0 leaves the state untouched.
  auto psi = random_state(3, 1);
  StateVector<double> big = StateVector<double>::Zero(16);
  big.head(8) = psi;
  apply_circuit(big, wide);
  EXPECT_LT((big.head(8) - psi).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Circuits, Errors) {
  Circuit c(2);
  EXPECT_THROW(c.add(Gate::single(GateKind::X, 2)), CircuitError);
  EXPECT_THROW(c.add(Gate::cnot(1, 1)), CircuitError);
  Gate g = Gate::single(GateKind::X, 0);
  g.controlled_on(-1);
  EXPECT_THROW(c.add(g), CircuitError);
  EXPECT_THROW(run_circuit(Circuit(30)), CapacityError);
}

TEST(Measurement, ExpectationMatchesDense) {
  PauliSum s(3);
  s.add(PauliWord::from_text("XZI"), 0.4);
  s.add(PauliWord::from_text("YIY"), -1.1);
  s.add(PauliWord::from_text("ZZZ"), 0.25);
  s.add(PauliWord::from_text("III"), 2.0);
  const auto psi = random_state(3, 9);
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(8, 8);
  for (const auto& [w, c] : s.terms()) dense += c * oracle::word_matrix(w.text(3));
  EXPECT_NEAR(expectation_pauli(psi, s), (psi.adjoint() * dense * psi)(0, 0).real(), 1e-12);
}

TEST(Measurement, ShotStatistics) {
  Circuit c(1);
  c.add(Gate::single(GateKind::H, 0));
  const auto s = run_circuit(c);
  EXPECT_NEAR(probability_one(s, 0), 0.5, 1e-15);
  const std::int64_t shots = 100000;
  const auto [zeros, ones] = measure_shots(s, 0, shots, 42);
  EXPECT_EQ(zeros + ones, shots);
  EXPECT_LE(std::abs(double(ones) / shots - 0.5), 3 * std::sqrt(0.25 / shots));
  EXPECT_EQ(measure_shots(s, 0, shots, 42), measure_shots(s, 0, shots, 42));
}

TEST(Measurement, FloatStateAgreesWithDouble) {
  Circuit c(2);
  c.add(Gate::single(GateKind::RY, 0, 0.3));
  c.add(Gate::givens(0, 1, 0.9));
  auto sf = basis_state<float>(2, 0);
  apply_circuit(sf, c);
  const auto sd = run_circuit(c);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(C(sf(i)) - sd(i)), 0.0, 1e-6);
}
