#include <cmath>

#include <gtest/gtest.h>

#include "fkp/chaos.hpp"
#include "fkp/errors.hpp"
#include "fkp/pauli.hpp"
#include "fkp/random.hpp"
#include "oracles.hpp"

using namespace fkp;

namespace {

Eigen::VectorXcd random_state(int n, std::uint64_t seed) {
  const CounterRng rng(seed);
  const Eigen::Index dim = Eigen::Index{1} << n;
  const auto re = rng.normal_block(0, dim, 2);
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) psi(i) = {re(i, 0), re(i, 1)};
  return psi.normalized();
}

Eigen::MatrixXcd dense_oracle(const PauliSum& s) {
  const Eigen::Index dim = Eigen::Index{1} << s.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, c] : s.terms()) m += c * oracle::word_matrix(w.text(s.n_qubits()));
  return m;
}

}  // namespace

TEST(Words, TextRoundTrip) {
  const auto w = PauliWord::from_text("XIYZ");
  EXPECT_EQ(w.x, 0b0101U);
  EXPECT_EQ(w.z, 0b1100U);
  EXPECT_EQ(w.text(4), "XIYZ");
  EXPECT_EQ(w.letter(2), 'Y');
  EXPECT_THROW(PauliWord::from_text("XQ"), InvalidInput);
}

TEST(Words, MultiplicationMatchesMatrices) {
  const std::vector<std::string> words = {"XI", "IY", "ZZ", "YX", "XY", "YY", "ZI", "II"};
  for (const auto& a : words)
    for (const auto& b : words) {
      const auto p = pauli_multiply({PauliWord::from_text(a), 1.0}, {PauliWord::from_text(b), 1.0});
      const Eigen::MatrixXcd lhs = p.coeff * oracle::word_matrix(p.word.text(2));
      const Eigen::MatrixXcd rhs = oracle::word_matrix(a) * oracle::word_matrix(b);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-15) << a << "*" << b;
    }
  const auto xy = pauli_multiply({PauliWord::from_text("XI"), 1.0}, {PauliWord::from_text("IY"), 1.0});
  EXPECT_EQ(xy.word.text(2), "XY");
  EXPECT_EQ(xy.coeff, cplx(1.0, 0.0));
}

TEST(Sums, DenseKronecker) {
  PauliSum s(2);
  s.add(PauliWord::from_text("XY"), 1.0);
  s.add(PauliWord::from_text("YX"), 1.0);
  const auto d = pauli_to_dense(s);
  EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  // Hand Kronecker product: only |00><11| = -2i and |11><00| = 2i survive.
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
  want(0, 3) = cplx(0, -2);
  want(3, 0) = cplx(0, 2);
  EXPECT_LT((d - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((d - oracle::word_matrix("XY") - oracle::word_matrix("YX")).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(pauli_to_dense(PauliSum(20)), CapacityError);
}

TEST(Sums, ProductAndPrune) {
  PauliSum a(1), b(1);
  a.add(PauliWord::from_text("X"), 1.0);
  b.add(PauliWord::from_text("Y"), 1.0);
  const auto p = a * b;
  EXPECT_EQ(p.coeff(PauliWord::from_text("Z")), cplx(0, 1));
  PauliSum c(1);
  c.add(PauliWord::from_text("Z"), 1e-20);
  c.prune();
  EXPECT_TRUE(c.empty());
}

TEST(Encoding, OneHot) {
  const auto l1 = QubitLayout::from_basis(BasisSpec::uniform(1, 2));
  EXPECT_EQ(bitstring_text(encode_basis_state({0}, l1), 3), "100");
  const auto l2 = QubitLayout::from_basis(BasisSpec::uniform(2, 1));
  EXPECT_EQ(bitstring_text(encode_basis_state({1, 0}, l2), 4), "0110");
  EXPECT_THROW(encode_basis_state({2, 0}, l2), EncodingError);
  EXPECT_THROW(encode_basis_state({0}, l2), InvalidInput);
}

TEST(DirectMap, RaisingPairOnTwoQubits) {
  const auto layout = QubitLayout::from_basis(BasisSpec::uniform(1, 1));
  const auto s = ladder_pair_to_pauli(0, 1, 0, layout, 1);
  EXPECT_LT(std::abs(s.coeff(PauliWord::from_text("XX")) - cplx(0.25, 0)), 1e-15);
  EXPECT_LT(std::abs(s.coeff(PauliWord::from_text("XY")) - cplx(0, -0.25)), 1e-15);
  EXPECT_LT(std::abs(s.coeff(PauliWord::from_text("YX")) - cplx(0, 0.25)), 1e-15);
  EXPECT_LT(std::abs(s.coeff(PauliWord::from_text("YY")) - cplx(0.25, 0)), 1e-15);
  const Eigen::MatrixXcd d = pauli_to_dense(s);
  // |10> (qubit 0 set, level 0) -> |01> (level 1).
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(4);
  in(1) = 1.0;
  const Eigen::VectorXcd out = d * in;
  EXPECT_NEAR(std::abs(out(2) - cplx(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(out.norm(), 1.0, 1e-15);
}

TEST(DirectMap, NumberOperatorIsDiagonal) {
  const BasisSpec b = BasisSpec::uniform(1, 2);
  const auto layout = QubitLayout::from_basis(b);
  const auto s = ladder_pair_to_pauli(0, 1, 1, layout, 2);
  PauliSum wrap(layout.n_qubits());
  wrap.add(s);
  const auto r = one_hot_restriction(wrap, b);
  Eigen::Vector3d diag(0, 1, 2);
  EXPECT_LT((r - Eigen::MatrixXd(diag.asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(DirectMap, GaussianReferenceRestriction) {
  const BasisSpec b = BasisSpec::uniform(1, 3, 0.5);
  const auto h = assemble_fkp_ladder(to_monomial(gaussian_reference_coeffs(1, 4)), b);
  const auto pauli = hamiltonian_to_pauli(h, QubitLayout::from_basis(b), b.caps);
  const auto r = one_hot_restriction(pauli, b);
  Eigen::Vector4d diag(0, 0.5, 1.0, 1.5);
  EXPECT_LT((r - Eigen::MatrixXd(diag.asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
  // Dense restriction agrees with the sparse one.
  const auto dense = pauli_to_dense(pauli);
  const auto layout = QubitLayout::from_basis(b);
  for (int a = 0; a <= 3; ++a)
    for (int c = 0; c <= 3; ++c) {
      const auto ia = static_cast<Eigen::Index>(encode_basis_state({a}, layout));
      const auto ic = static_cast<Eigen::Index>(encode_basis_state({c}, layout));
      EXPECT_NEAR(std::abs(dense(ia, ic) - cplx(r(a, c), 0)), 0.0, 1e-12);
    }
}

TEST(DirectMap, MatchesFbrForRandomPolynomials) {
  for (int nu = 1; nu <= 2; ++nu)
    for (int cap = 1; cap <= 3; ++cap) {
      const auto a0 = multi_index_set(nu, 4, 0);
      const CounterRng rng(nu * 10 + cap);
      Eigen::VectorXd f(static_cast<Eigen::Index>(a0.size()));
      for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = rng.normal(static_cast<std::uint64_t>(i));
      BasisSpec b = BasisSpec::uniform(nu, cap, 0.6, 0.2);
      if (nu == 2) b.caps[1] = std::max(1, cap - 1);
      const auto h = assemble_fkp_ladder(to_monomial(coefficients_from_f(nu, 4, f)), b);
      const auto fbr = build_fbr_matrix(h, b);
      const auto pauli = hamiltonian_to_pauli(h, QubitLayout::from_basis(b), b.caps);
      const auto r = one_hot_restriction(pauli, b);
      const double scale = std::max(1.0, fbr.entries.cwiseAbs().maxCoeff());
      EXPECT_LT((r - fbr.entries).cwiseAbs().maxCoeff(), 1e-10 * scale) << nu << " " << cap;
      for (const auto& [w, c] : pauli.terms()) EXPECT_LT(std::abs(c.imag()), 1e-12 * scale);
    }
}

TEST(Compiled, MatchesDenseQuadraticForm) {
  PauliSum s(3);
  const std::vector<std::string> words = {"XIZ", "YYI", "ZZZ", "IXY", "III", "YIX"};
  for (std::size_t i = 0; i < words.size(); ++i) s.add(PauliWord::from_text(words[i]), 0.3 * double(i) - 0.7);
  const CompiledObservable obs(s);
  const auto dense = dense_oracle(s);
  const auto psi = random_state(3, 4);
  EXPECT_NEAR(obs.expectation(psi), (psi.adjoint() * dense * psi)(0, 0).real(), 1e-12);
  EXPECT_LT((obs.apply(psi) - dense * psi).cwiseAbs().maxCoeff(), 1e-12);
}
