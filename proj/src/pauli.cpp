#include "fkp/pauli.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

#include "fkp/errors.hpp"

namespace fkp {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popcount(std::uint64_t v) { return std::popcount(v); }

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PauliWord PauliWord::from_text(const std::string& letters) {
  if (letters.size() > 64) throw InvalidInput("Pauli word longer than 64 qubits");
  PauliWord w;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    switch (letters[q]) {
      case 'I': break;
      case 'X': w.x |= bit(static_cast<int>(q)); break;
      case 'Y': w.x |= bit(static_cast<int>(q)); w.z |= bit(static_cast<int>(q)); break;
      case 'Z': w.z |= bit(static_cast<int>(q)); break;
      default: throw InvalidInput(std::string("invalid Pauli letter '") + letters[q] + "'");
    }
  }
  return w;
}

char PauliWord::letter(int q) const {
  const bool bx = (x >> q) & 1U, bz = (z >> q) & 1U;
  return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
}

std::string PauliWord::text(int n_qubits) const {
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) s[static_cast<std::size_t>(q)] = letter(q);
  return s;
}

PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
  // P = i^{|x&z|} X^x Z^z, and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
  const PauliWord w{a.word.x ^ b.word.x, a.word.z ^ b.word.z};
  int e = popcount(a.word.x & a.word.z) + popcount(b.word.x & b.word.z) - popcount(w.x & w.z) +
          2 * popcount(a.word.z & b.word.x);
  e = ((e % 4) + 4) % 4;
  return {w, a.coeff * b.coeff * kIPow[e]};
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 64) throw InvalidInput("PauliSum: qubit count must be in [0, 64]");
}

void PauliSum::add(const PauliWord& w, cplx c) {
  if (n_qubits_ < 64 && ((w.x | w.z) >> n_qubits_) != 0) throw InvalidInput("Pauli word acts outside the register");
  terms_[w] += c;
}

void PauliSum::add(const PauliSum& other, cplx scale) {
  if (other.n_qubits_ != n_qubits_) throw InvalidInput("PauliSum qubit counts differ");
  for (const auto& [w, c] : other.terms_) terms_[w] += scale * c;
}

PauliSum& PauliSum::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
  return *this;
}

cplx PauliSum::coeff(const PauliWord& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? cplx{} : it->second;
}

PauliSum PauliSum::identity(int n_qubits, cplx c) {
  PauliSum s(n_qubits);
  s.add(PauliWord{}, c);
  return s;
}

std::string PauliSum::to_text() const {
  std::ostringstream os;
  for (const auto& [w, c] : terms_) {
    if (c.imag() == 0.0)
      os << format_double(c.real());
    else
      os << format_double(c.real()) << (c.imag() < 0 ? "" : "+") << format_double(c.imag()) << 'j';
    os << ' ' << w.text(n_qubits_) << '\n';
  }
  return os.str();
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw InvalidInput("PauliSum qubit counts differ");
  PauliSum out(a.n_qubits());
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      const auto p = pauli_multiply({wa, ca}, {wb, cb});
      out.add(p.word, p.coeff);
    }
  return out;
}

QubitLayout QubitLayout::from_basis(const BasisSpec& basis) {
  QubitLayout l;
  int offset = 0;
  for (int c : basis.caps) {
    l.offsets.push_back(offset);
    l.sizes.push_back(c + 1);
    offset += c + 1;
  }
  return l;
}

int QubitLayout::n_qubits() const {
  int n = 0;
  for (int s : sizes) n += s;
  return n;
}

std::uint64_t encode_basis_state(const std::vector<int>& alpha, const QubitLayout& layout) {
  if (alpha.size() != layout.sizes.size()) throw InvalidInput("encode_basis_state: dimension mismatch");
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] < 0 || alpha[j] >= layout.sizes[j])
      throw EncodingError("occupation index " + std::to_string(alpha[j]) + " outside register " + std::to_string(j) +
                          " (cap " + std::to_string(layout.sizes[j] - 1) + ")");
    bits |= bit(layout.offsets[j] + alpha[j]);
  }
  return bits;
}

std::string bitstring_text(std::uint64_t bits, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((bits >> q) & 1U) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

PauliSum ladder_pair_to_pauli(int dim, int beta, int gamma, const QubitLayout& layout, int cap) {
  if (beta < 0 || gamma < 0) throw InvalidInput("ladder_pair_to_pauli: negative power");
  const int nq = layout.n_qubits();
  PauliSum out(nq);
  // sigma- = (X + iY)/2 = |0><1| empties the source level,
  // sigma+ = (X - iY)/2 = |1><0| fills the target level.
  auto lower = [&](int q) {
    PauliSum s(nq);
    s.add({bit(q), 0}, 0.5);
    s.add({bit(q), bit(q)}, cplx(0, 0.5));
    return s;
  };
  auto raise = [&](int q) {
    PauliSum s(nq);
    s.add({bit(q), 0}, 0.5);
    s.add({bit(q), bit(q)}, cplx(0, -0.5));
    return s;
  };
  const int hi = std::min(cap, cap - beta + gamma);
  for (int n = gamma; n <= hi; ++n) {
    const auto [target, amp] = ladder_matrix_element(beta, gamma, n, cap);
    if (amp == 0.0) continue;
    out.add(raise(layout.qubit(dim, target)) * lower(layout.qubit(dim, n)), amp);
  }
  return out.prune();
}

PauliSum hamiltonian_to_pauli(const LadderPolynomial& poly, const QubitLayout& layout, const std::vector<int>& caps,
                              double imag_tol) {
  if (static_cast<std::size_t>(poly.nu()) != layout.sizes.size() || caps.size() != layout.sizes.size())
    throw InvalidInput("hamiltonian_to_pauli: polynomial and layout dimensions differ");
  const int nq = layout.n_qubits();
  PauliSum acc(nq);
  for (const auto& t : poly.terms()) {
    PauliSum prod = PauliSum::identity(nq, t.coeff);
    for (std::size_t j = 0; j < caps.size() && !prod.empty(); ++j) {
      if (t.create[j] == 0 && t.annihilate[j] == 0) continue;
      prod = prod * ladder_pair_to_pauli(static_cast<int>(j), t.create[j], t.annihilate[j], layout, caps[j]);
    }
    acc.add(prod);
  }
  double scale = 1.0;
  for (const auto& [w, c] : acc.terms()) scale = std::max(scale, std::abs(c));
  PauliSum out(nq);
  for (const auto& [w, c] : acc.terms()) {
    if (std::abs(c.imag()) > imag_tol * scale)
      throw ConsistencyError("non-real Pauli coefficient " + format_double(c.imag()) + " on " + w.text(nq));
    out.add(w, c.real());
  }
  return out.prune();
}

Eigen::MatrixXcd pauli_to_dense(const PauliSum& sum, int qubit_limit) {
  const int n = sum.n_qubits();
  if (n > qubit_limit)
    throw CapacityError("dense Pauli matrix on " + std::to_string(n) + " qubits exceeds the limit " +
                        std::to_string(qubit_limit));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, c] : sum.terms()) {
    const cplx base = c * kIPow[popcount(w.x & w.z) % 4];
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const double sign = (popcount(w.z & ub) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(ub ^ w.x), b) += sign * base;
    }
  }
  return m;
}

Eigen::MatrixXd one_hot_restriction(const PauliSum& sum, const BasisSpec& basis) {
  const QubitLayout layout = QubitLayout::from_basis(basis);
  const Eigen::Index dim = basis.dim();
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) codes[static_cast<std::size_t>(i)] = encode_basis_state(basis.levels(i), layout);
  // <a|P|b> is non-zero only when a = b ^ x.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  std::map<std::uint64_t, Eigen::Index> row_of;
  for (Eigen::Index i = 0; i < dim; ++i) row_of[codes[static_cast<std::size_t>(i)]] = i;
  for (const auto& [w, c] : sum.terms()) {
    const cplx base = c * kIPow[popcount(w.x & w.z) % 4];
    for (Eigen::Index b = 0; b < dim; ++b) {
      const std::uint64_t ub = codes[static_cast<std::size_t>(b)];
      const auto it = row_of.find(ub ^ w.x);
      if (it == row_of.end()) continue;
      const double sign = (popcount(w.z & ub) & 1) ? -1.0 : 1.0;
      out(it->second, b) += (sign * base).real();
    }
  }
  return out;
}

CompiledObservable::CompiledObservable(const PauliSum& sum) : n_qubits_(sum.n_qubits()) {
  if (n_qubits_ > 30) throw CapacityError("observable too large for a dense statevector");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  std::map<std::uint64_t, Eigen::VectorXcd> by_x;
  for (const auto& [w, c] : sum.terms()) {
    auto [it, fresh] = by_x.try_emplace(w.x);
    if (fresh) it->second = Eigen::VectorXcd::Zero(dim);
    const cplx base = c * kIPow[popcount(w.x & w.z) % 4];
    for (Eigen::Index b = 0; b < dim; ++b)
      it->second(b) += (popcount(w.z & static_cast<std::uint64_t>(b)) & 1) ? -base : base;
  }
  for (auto& [x, d] : by_x) blocks_.emplace_back(x, std::move(d));
}

double CompiledObservable::expectation(const Eigen::VectorXcd& psi) const {
  if (psi.size() != (Eigen::Index{1} << n_qubits_)) throw InvalidInput("expectation: state size mismatch");
  double acc = 0.0;
  for (const auto& [x, d] : blocks_) {
    if (x == 0) {
      acc += (psi.cwiseAbs2().array() * d.real().array()).sum();
      continue;
    }
    cplx s = 0.0;
    for (Eigen::Index b = 0; b < psi.size(); ++b)
      s += std::conj(psi(static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ x))) * d(b) * psi(b);
    acc += s.real();
  }
  return acc;
}

Eigen::VectorXcd CompiledObservable::apply(const Eigen::VectorXcd& psi) const {
  if (psi.size() != (Eigen::Index{1} << n_qubits_)) throw InvalidInput("apply: state size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& [x, d] : blocks_)
    for (Eigen::Index b = 0; b < psi.size(); ++b)
      out(static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ x)) += d(b) * psi(b);
  return out;
}

}  // namespace fkp
