#include "fkp/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "fkp/random.hpp"

namespace fkp {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Unitary2: return "U2";
    case GateKind::Givens: return "GIVENS";
  }
  return "?";
}

Gate Gate::single(GateKind k, int target, double theta) {
  if (k == GateKind::Givens || k == GateKind::CNOT || k == GateKind::Unitary2)
    throw CircuitError("Gate::single: use the dedicated constructor");
  Gate g;
  g.kind = k;
  g.targets = {target};
  g.theta = theta;
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.targets = {target};
  g.controls = {control};
  return g;
}

Gate Gate::unitary(const Eigen::Matrix2cd& u, int target) {
  if (!(u.adjoint() * u).isIdentity(1e-12)) throw CircuitError("Gate::unitary: matrix is not unitary");
  Gate g;
  g.kind = GateKind::Unitary2;
  g.targets = {target};
  g.matrix = u;
  return g;
}

Gate Gate::givens(int k, int l, double theta) {
  Gate g;
  g.kind = GateKind::Givens;
  g.targets = {k, l};
  g.theta = theta;
  return g;
}

Gate& Gate::controlled_on(int q) {
  controls.push_back(q);
  return *this;
}

Gate& Gate::anti_controlled_on(int q) {
  anti_controls.push_back(q);
  return *this;
}

Eigen::Matrix2cd Gate::unitary_2x2() const {
  using C = std::complex<double>;
  const double c = std::cos(theta), s = std::sin(theta);
  const double r = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd u;
  switch (kind) {
    case GateKind::X:
    case GateKind::CNOT: u << 0, 1, 1, 0; break;
    case GateKind::Y: u << 0, C(0, -1), C(0, 1), 0; break;
    case GateKind::Z: u << 1, 0, 0, -1; break;
    case GateKind::H: u << r, r, r, -r; break;
    case GateKind::S: u << 1, 0, 0, C(0, 1); break;
    case GateKind::RX: u << c, C(0, -s), C(0, -s), c; break;
    case GateKind::RY: u << c, -s, s, c; break;
    case GateKind::RZ: u << C(c, -s), 0, 0, C(c, s); break;
    case GateKind::Unitary2: u = matrix; break;
    case GateKind::Givens: throw CircuitError("Givens gate has no 2x2 matrix");
  }
  return u;
}

Gate Gate::adjoint() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::Givens: g.theta = -theta; break;
    case GateKind::S:
      g.kind = GateKind::Unitary2;
      g.matrix = unitary_2x2().adjoint();
      break;
    case GateKind::Unitary2: g.matrix = matrix.adjoint(); break;
    default: break;
  }
  return g;
}

std::string Gate::text() const {
  std::ostringstream os;
  auto list = [&](const std::vector<int>& v) {
    if (v.empty()) {
      os << '-';
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  };
  os << gate_name(kind) << ' ';
  list(targets);
  os << ' ';
  list(controls);
  if (!anti_controls.empty()) {
    os << ";~";
    list(anti_controls);
  }
  os << ' ';
  char buf[96];
  if (kind == GateKind::Unitary2) {
    for (int i = 0; i < 4; ++i) {
      const auto z = matrix(i / 2, i % 2);
      std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
      os << (i ? "," : "") << buf;
    }
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", theta);
    os << buf;
  }
  return os.str();
}

Circuit& Circuit::add(Gate g) {
  detail::check_gate(g, n_qubits_);
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ > n_qubits_) throw CircuitError("append: circuit is wider than the target");
  for (const auto& g : other.gates_) add(g);
  return *this;
}

Circuit Circuit::adjoint() const {
  Circuit out(n_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->adjoint());
  return out;
}

Circuit Circuit::controlled_on(int q) const {
  Circuit out(std::max(n_qubits_, q + 1));
  for (Gate g : gates_) out.add(std::move(g.controlled_on(q)));
  return out;
}

void Circuit::validate() const {
  for (const auto& g : gates_) detail::check_gate(g, n_qubits_);
}

std::string Circuit::dump() const {
  std::string s;
  for (const auto& g : gates_) s += g.text() + '\n';
  return s;
}

StateVector<double> run_circuit(const Circuit& circuit, int qubit_limit) {
  auto s = basis_state<double>(circuit.n_qubits(), 0, qubit_limit);
  apply_circuit(s, circuit);
  return s;
}

double expectation_pauli(const StateVector<double>& state, const PauliSum& obs) {
  return CompiledObservable(obs).expectation(state);
}

double probability_one(const StateVector<double>& state, int qubit) {
  const int n = static_cast<int>(std::countr_zero(static_cast<std::uint64_t>(state.size())));
  if (qubit < 0 || qubit >= n) throw CircuitError("measured qubit out of range");
  const std::uint64_t bq = std::uint64_t{1} << qubit;
  double p = 0.0;
  for (Eigen::Index b = 0; b < state.size(); ++b)
    if (static_cast<std::uint64_t>(b) & bq) p += std::norm(state(b));
  return std::clamp(p / state.squaredNorm(), 0.0, 1.0);
}

std::pair<std::int64_t, std::int64_t> measure_shots(const StateVector<double>& state, int qubit, std::int64_t shots,
                                                    std::uint64_t seed) {
  if (shots < 1) throw InvalidInput("measure_shots: shots must be >= 1");
  const std::int64_t ones = bernoulli_count(CounterRng(seed), probability_one(state, qubit), shots);
  return {shots - ones, ones};
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit, int qubit_limit) {
  const int n = circuit.n_qubits();
  if (n > qubit_limit) throw CapacityError("circuit_unitary: too many qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    auto s = basis_state<double>(n, static_cast<std::uint64_t>(b), qubit_limit);
    apply_circuit(s, circuit);
    u.col(b) = s;
  }
  return u;
}

}  // namespace fkp
