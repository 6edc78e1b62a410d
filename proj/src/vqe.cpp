#include "fkp/vqe.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "fkp/errors.hpp"
#include "fkp/ladder.hpp"
#include "fkp/random.hpp"

namespace fkp {

Ansatz Ansatz::build(const QubitLayout& layout, int repetitions) {
  if (repetitions < 1) throw InvalidInput("ansatz: repetitions must be >= 1");
  Ansatz a;
  a.layout = layout;
  const int nu = static_cast<int>(layout.sizes.size());
  for (int r = 0; r < repetitions; ++r) {
    for (int j = 0; j < nu; ++j)
      for (int k = 0; k + 1 < layout.sizes[static_cast<std::size_t>(j)]; ++k)
        a.generators.push_back({layout.qubit(j, k), layout.qubit(j, k + 1), -1});
    for (int j = 0; j + 1 < nu; ++j)
      for (int l = 0; l < layout.sizes[static_cast<std::size_t>(j)]; ++l)
        for (int k = 0; k + 1 < layout.sizes[static_cast<std::size_t>(j + 1)]; ++k)
          a.generators.push_back({layout.qubit(j + 1, k), layout.qubit(j + 1, k + 1), layout.qubit(j, l)});
  }
  return a;
}

Circuit Ansatz::circuit(const Eigen::VectorXd& tau) const {
  if (static_cast<std::size_t>(tau.size()) != generators.size())
    throw InvalidInput("ansatz: parameter count does not match the generators");
  if (!tau.allFinite()) throw InvalidInput("ansatz: non-finite parameters");
  Circuit c(layout.n_qubits());
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    Gate gate = Gate::givens(g.k, g.l, tau(static_cast<Eigen::Index>(i)));
    if (g.control >= 0) gate.controlled_on(g.control);
    c.add(std::move(gate));
  }
  return c;
}

Circuit initial_guess_circuit(const std::vector<int>& alpha, const QubitLayout& layout) {
  const std::uint64_t bits = encode_basis_state(alpha, layout);
  Circuit c(layout.n_qubits());
  for (int q = 0; q < layout.n_qubits(); ++q)
    if ((bits >> q) & 1U) c.add(Gate::single(GateKind::X, q));
  return c;
}

std::vector<int> mean_field_guess(const CompiledObservable& h, const BasisSpec& basis) {
  const QubitLayout layout = QubitLayout::from_basis(basis);
  std::vector<int> alpha(static_cast<std::size_t>(basis.nu()), 0);
  auto diag = [&](const std::vector<int>& a) {
    return h.expectation(basis_state<double>(layout.n_qubits(), encode_basis_state(a, layout)));
  };
  double best = diag(alpha);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (int j = 0; j < basis.nu(); ++j) {
      auto trial = alpha;
      for (int lv = 0; lv <= basis.caps[static_cast<std::size_t>(j)]; ++lv) {
        trial[static_cast<std::size_t>(j)] = lv;
        const double d = diag(trial);
        if (d < best - 1e-14) {
          best = d;
          alpha = trial;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return alpha;
}

StateVector<double> apply_ansatz(const StateVector<double>& state, const Ansatz& ansatz, const Eigen::VectorXd& tau) {
  StateVector<double> out = state;
  apply_circuit(out, ansatz.circuit(tau));
  return out;
}

double rayleigh_quotient(const StateVector<double>& state, const CompiledObservable& h) {
  return h.expectation(state);
}

double word_expectation(const StateVector<double>& state, const PauliWord& w) {
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = ipow[std::popcount(w.x & w.z) % 4];
  cplx acc = 0.0;
  for (Eigen::Index b = 0; b < state.size(); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const double sign = (std::popcount(w.z & ub) & 1) ? -1.0 : 1.0;
    acc += std::conj(state(static_cast<Eigen::Index>(ub ^ w.x))) * sign * state(b);
  }
  return (base * acc).real();
}

double rayleigh_quotient_shots(const StateVector<double>& state, const PauliSum& h, std::int64_t shots,
                               std::uint64_t seed) {
  if (shots < 1) throw InvalidInput("rayleigh_quotient_shots: shots must be >= 1");
  const CounterRng rng(seed, 0x5707);
  double acc = 0.0;
  std::uint64_t idx = 0;
  for (const auto& [w, c] : h.terms()) {
    if (w.x == 0 && w.z == 0) {
      acc += c.real();
      continue;
    }
    const double e = std::clamp(word_expectation(state, w), -1.0, 1.0);
    const std::int64_t plus = bernoulli_count(rng.substream(idx++), 0.5 * (1.0 + e), shots);
    acc += c.real() * (2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0);
  }
  return acc;
}

double register_occupation(const StateVector<double>& state, const QubitLayout& layout, int dim) {
  double occ = 0.0;
  for (int k = 0; k < layout.sizes[static_cast<std::size_t>(dim)]; ++k)
    occ += probability_one(state, layout.qubit(dim, k));
  return occ;
}

namespace {

VqeResult run(const PauliSum& h, const Ansatz& ansatz, const Circuit& init,
              const std::vector<StateVector<double>>& priors, double rho, const VqeOptions& opts) {
  if (init.n_qubits() != ansatz.layout.n_qubits() || h.n_qubits() != ansatz.layout.n_qubits())
    throw CircuitError("VQE: Hamiltonian, ansatz and initial circuit qubit counts differ");
  const CompiledObservable compiled(h);
  const StateVector<double> start = run_circuit(init);
  const auto n = static_cast<Eigen::Index>(ansatz.n_params());
  std::uint64_t shot_counter = 0;

  auto energy = [&](const StateVector<double>& psi) {
    return opts.shots > 0 ? rayleigh_quotient_shots(psi, h, opts.shots, opts.seed + shot_counter++)
                          : compiled.expectation(psi);
  };
  auto objective = [&](const Eigen::VectorXd& tau) {
    const StateVector<double> psi = apply_ansatz(start, ansatz, tau);
    double v = energy(psi);
    for (const auto& q : priors) v += rho * std::norm(q.dot(psi));
    return v;
  };

  const CounterRng rng(opts.seed, 0xA5A7);
  VqeResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const int runs = std::max(1, opts.restarts);
  for (int r = 0; r < runs; ++r) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    if (r > 0) {
      const CounterRng sub = rng.substream(static_cast<std::uint64_t>(r));
      for (Eigen::Index i = 0; i < n; ++i) x0(i) = opts.perturbation * sub.normal(static_cast<std::uint64_t>(i));
    }
    const NelderMeadResult nm = nelder_mead(objective, x0, opts.nm);
    best.evaluations += nm.evaluations;
    best.iterations += nm.iterations;
    if (nm.f < best.objective) {
      best.objective = nm.f;
      best.params = nm.x;
      best.converged = nm.converged;
      best.trace = nm.trace;
    }
  }
  best.state = apply_ansatz(start, ansatz, best.params);
  best.lambda = compiled.expectation(best.state);
  best.circuit = Circuit(init.n_qubits());
  best.circuit.append(init).append(ansatz.circuit(best.params));
  return best;
}

}  // namespace

VqeResult optimize(const PauliSum& h, const Ansatz& ansatz, const Circuit& init, const VqeOptions& opts) {
  return run(h, ansatz, init, {}, 0.0, opts);
}

VqeResult solve_excited(const PauliSum& h, const Ansatz& ansatz, const Circuit& init,
                        const std::vector<StateVector<double>>& priors, double rho, const VqeOptions& opts) {
  for (const auto& q : priors)
    if (std::abs(q.norm() - 1.0) > 1e-10) throw InvalidInput("solve_excited: prior states must be normalized");
  if (!(rho >= 0.0)) throw InvalidInput("solve_excited: rho must be non-negative");
  return run(h, ansatz, init, priors, rho, opts);
}

double default_penalty(const Eigen::MatrixXd& fbr) { return 10.0 * power_iteration_max(fbr); }

}  // namespace fkp
