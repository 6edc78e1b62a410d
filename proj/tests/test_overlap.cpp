#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fkp/chaos.hpp"
#include "fkp/errors.hpp"
#include "fkp/overlap.hpp"
#include "fkp/random.hpp"

using namespace fkp;
using C = std::complex<double>;

namespace {

// Amplitude vector over the product basis read off the one-hot encoding.
Eigen::VectorXcd one_hot_amplitudes(const StateVector<double>& s, const BasisSpec& b) {
  const auto layout = QubitLayout::from_basis(b);
  Eigen::VectorXcd out(b.dim());
  for (Eigen::Index f = 0; f < b.dim(); ++f)
    out(f) = s(static_cast<Eigen::Index>(encode_basis_state(b.levels(f), layout)));
  return out;
}

Eigen::VectorXd kron_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

TEST(Eta, CenterPoint) {
  const auto b = BasisSpec::uniform(1, 1, 0.5);
  const auto p = eta_coefficients(b, Eigen::VectorXd::Zero(1));
  EXPECT_NEAR(p.coeffs[0](0), 1.0, 1e-15);
  EXPECT_EQ(p.coeffs[0](1), 0.0);
  EXPECT_NEAR(p.norm_factor, std::pow(2 * std::numbers::pi, -0.25), 1e-15);
  EXPECT_NEAR(p.norm_factor, 0.63161, 1e-5);
}

TEST(Eta, Reconstruction) {
  const BasisSpec b{{4, 3}, {0.5, 0.8}, {0.0, 0.3}};
  const Eigen::Vector2d eta(0.7, -1.2);
  const auto p = eta_coefficients(b, eta);
  const auto raw = basis_values(b, eta);
  const Eigen::VectorXd prod = kron_vec(raw[0], raw[1]);
  const Eigen::VectorXd rec = p.norm_factor * kron_vec(p.coeffs[0], p.coeffs[1]);
  EXPECT_LT((prod - rec).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Angles, TwoLevelWorkedExample) {
  const Eigen::Vector2d c(0.6, 0.8);
  const auto th = rotation_angles(c);
  EXPECT_NEAR(th(0), std::atan(0.75), 1e-15);
  EXPECT_NEAR(th(0), 0.64350, 1e-5);
  EXPECT_NEAR(th(1), std::numbers::pi / 2, 1e-15);

  const BasisSpec b = BasisSpec::uniform(1, 1);
  const auto layout = QubitLayout::from_basis(b);
  // First rotation alone: 0.8 on vacuum, 0.6 on level 0.
  Circuit first(2);
  first.add(Gate::single(GateKind::RY, 0, th(0)));
  const auto s1 = run_circuit(first);
  EXPECT_NEAR(std::abs(s1(0) - C(0.8, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s1(1) - C(0.6, 0)), 0.0, 1e-15);
  // Full cascade: vacuum emptied, 0.6 |phi_0> + 0.8 |phi_1>.
  Circuit full(2);
  append_register_preparation(full, layout, 0, th);
  const auto s2 = run_circuit(full);
  EXPECT_NEAR(std::abs(s2(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s2(1) - C(0.6, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s2(2) - C(0.8, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s2(3)), 0.0, 1e-15);
}

TEST(Angles, Errors) {
  EXPECT_THROW(rotation_angles(Eigen::Vector2d(0.6, 0.7)), ConsistencyError);
  EXPECT_THROW(rotation_angles(Eigen::VectorXd()), InvalidInput);
  // Negative and zero entries.
  const auto th = rotation_angles(Eigen::Vector3d(0.0, -0.6, 0.8));
  EXPECT_EQ(th(0), 0.0);
  EXPECT_NEAR(th(2), std::numbers::pi / 2, 1e-15);
}

TEST(Preparation, ProductStateMatchesKronecker) {
  const BasisSpec b{{3, 2}, {0.5, 0.5}, {0.0, 0.0}};
  const auto p = eta_coefficients(b, Eigen::Vector2d(0.4, 1.3));
  const auto s = run_circuit(prepare_eta_circuit(p, QubitLayout::from_basis(b)));
  const Eigen::VectorXd want = kron_vec(p.coeffs[0], p.coeffs[1]);
  const auto got = one_hot_amplitudes(s, b);
  EXPECT_LT((got - want.cast<C>()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(got.squaredNorm(), 1.0, 1e-12);
}

TEST(Preparation, ArbitraryRealVectors) {
  const std::vector<BasisSpec> bases = {BasisSpec::uniform(1, 6), BasisSpec{{2, 3}, {0.5, 0.5}, {0, 0}},
                                        BasisSpec{{1, 2, 1}, {0.5, 0.5, 0.5}, {0, 0, 0}}};
  const CounterRng rng(19);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    Eigen::VectorXd c = rng.normal_block(i, 1, bases[i].dim()).transpose();
    c(1) = 0.0;  // exercise empty branches
    c.normalize();
    const auto s = run_circuit(prepare_state_circuit(c, bases[i]));
    EXPECT_LT((one_hot_amplitudes(s, bases[i]) - c.cast<C>()).cwiseAbs().maxCoeff(), 1e-12) << i;
    EXPECT_NEAR(s.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(HadamardTest, ExactModeMatchesInnerProduct) {
  const BasisSpec b{{3, 2}, {0.5, 0.6}, {0.0, 0.1}};
  const auto layout = QubitLayout::from_basis(b);
  const CounterRng rng(23);
  for (int t = 0; t < 5; ++t) {
    const Eigen::VectorXd q = rng.normal_block(10 * t, 1, b.dim()).transpose().normalized();
    const Eigen::VectorXd eta = rng.normal_block(10 * t + 1, 1, 2).transpose();
    const auto prep = eta_coefficients(b, eta);
    const Circuit uq = prepare_state_circuit(q, b);
    const Circuit ue = prepare_eta_circuit(prep, layout);
    const auto r = hadamard_test_overlap(uq, ue, prep.norm_factor);
    const C inner = run_circuit(ue).dot(run_circuit(uq));
    EXPECT_NEAR(r.overlap, inner.real() * prep.norm_factor, 1e-10);
    // Scaled overlap equals the eigenfunction value at eta.
    EXPECT_NEAR(r.overlap, eval_eigenfunction(q, b, eta), 1e-10);
    EXPECT_NEAR(r.p_zero + r.p_one, 1.0, 1e-12);
  }
}

TEST(HadamardTest, ProbabilityLabels) {
  // <eta|q> / N = 0.6 with a two-level register.
  const BasisSpec b = BasisSpec::uniform(1, 1);
  const auto layout = QubitLayout::from_basis(b);
  Circuit ue(2);
  append_register_preparation(ue, layout, 0, rotation_angles(Eigen::Vector2d(1.0, 0.0)));
  const Circuit uq = prepare_state_circuit(Eigen::Vector2d(0.6, 0.8), b);
  const auto r = hadamard_test_overlap(uq, ue, 1.0);
  EXPECT_NEAR(r.p_zero, 0.8, 1e-14);
  EXPECT_NEAR(r.p_one, 0.2, 1e-14);
  EXPECT_NEAR(r.overlap, 0.6, 1e-14);
  EXPECT_EQ(hadamard_test_circuit(uq, ue).n_qubits(), 3);
  EXPECT_THROW(hadamard_test_overlap(uq, ue, 1.0, -1), InvalidInput);
}

TEST(HadamardTest, ShotNoiseEnvelope) {
  const BasisSpec b = BasisSpec::uniform(1, 3);
  const auto layout = QubitLayout::from_basis(b);
  const CounterRng rng(5);
  int inside = 0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd q = rng.normal_block(10 * t, 1, 4).transpose().normalized();
    Eigen::VectorXd eta(1);
    eta << 1.5 * rng.normal(1000 + t);
    const auto prep = eta_coefficients(b, eta);
    const Circuit uq = prepare_state_circuit(q, b), ue = prepare_eta_circuit(prep, layout);
    const auto exact = hadamard_test_overlap(uq, ue, prep.norm_factor);
    const auto shot = hadamard_test_overlap(uq, ue, prep.norm_factor, 100000, 900 + t);
    EXPECT_GT(shot.stderr_, 0.0);
    if (std::abs(shot.overlap - exact.overlap) <= 4.0 * shot.stderr_) ++inside;
  }
  EXPECT_GE(inside, 19);
}

class FkpBasisTest : public ::testing::Test {
 protected:
  void SetUp() override {
    model_ = std::make_unique<DensityModel>(DensityModel::gaussian_reference(1));
    basis_ = BasisSpec::uniform(1, 6, 0.5);
    const auto h = assemble_fkp_ladder(to_monomial(gaussian_reference_coeffs(1, 4)), basis_);
    eigen_ = classical_eigensolve(build_fbr_matrix(h, basis_), 3);
    const CounterRng rng(4);
    points_ = rng.normal_block(0, 25, 1);
  }
  std::unique_ptr<DensityModel> model_;
  BasisSpec basis_;
  std::vector<EigenPair> eigen_;
  Eigen::MatrixXd points_;
};

TEST_F(FkpBasisTest, ClassicalClosedForm) {
  const auto g = fkp_basis_classical(*model_, eigen_, basis_, points_);
  EXPECT_EQ(g.path, "classical");
  for (Eigen::Index j = 0; j < points_.rows(); ++j) {
    const double y = points_(j, 0);
    const double p = std::exp(-y * y / 2) / std::sqrt(2 * std::numbers::pi);
    // Closed-form OU eigenfunctions q_m = phi_m with omega = 1/2.
    const auto phi = oscillator_functions(2, 0.5, 0.0, y);
    for (int m = 0; m < 3; ++m) {
      const double sign = eigen_[static_cast<std::size_t>(m)].coeffs(m) > 0 ? 1.0 : -1.0;
      EXPECT_NEAR(g.values(j, m), sign * std::sqrt(p) * phi(m), 1e-8);
    }
    EXPECT_NEAR(g.values(j, 0), p, 1e-8);  // p^{1/2} q_0 = p_H
  }
}

TEST_F(FkpBasisTest, QuantumExactAndShots) {
  const auto classical = fkp_basis_classical(*model_, eigen_, basis_, points_);
  std::vector<Circuit> circuits;
  Eigen::VectorXd lambdas(3);
  for (int m = 0; m < 3; ++m) {
    circuits.push_back(prepare_state_circuit(eigen_[static_cast<std::size_t>(m)].coeffs, basis_));
    lambdas(m) = eigen_[static_cast<std::size_t>(m)].lambda;
  }
  auto exact = fkp_basis_quantum(*model_, circuits, lambdas, basis_, points_);
  EXPECT_EQ(exact.path, "quantum-exact");
  align_signs(classical.values, exact.values);
  EXPECT_LT(column_relative_error(classical.values, exact.values).maxCoeff(), 1e-6);

  QuantumExtractionOptions o;
  o.shots = 100000;
  o.seed = 3;
  auto shots = fkp_basis_quantum(*model_, circuits, lambdas, basis_, points_, o);
  align_signs(classical.values, shots.values);
  // Per-entry binomial bound: 4 * 2 |N| sqrt(1/4 / shots) scaled by p_H^{1/2}.
  int outside = 0;
  for (Eigen::Index j = 0; j < points_.rows(); ++j) {
    Eigen::VectorXd eta(1);
    eta << points_(j, 0);
    const double n = eta_coefficients(basis_, eta).norm_factor;
    const double w = std::exp(0.5 * model_->log_density(eta));
    const double bound = 4.0 * w * 2.0 * n * std::sqrt(0.25 / o.shots);
    for (int m = 0; m < 3; ++m)
      if (std::abs(shots.values(j, m) - exact.values(j, m)) > bound) ++outside;
  }
  EXPECT_LE(outside, 1);
}

TEST_F(FkpBasisTest, ColumnOrthogonalityDiagnostic) {
  const CounterRng rng(6);
  const Eigen::MatrixXd pts = rng.normal_block(0, 4000, 1);
  const auto g = fkp_basis_classical(*model_, eigen_, basis_, pts);
  // (1/nd) sum_j g0_j g1_j estimates E[p^{1/2} q0 q1]-type moment; q0 q1 is odd here.
  EXPECT_LT(std::abs(g.values.col(0).dot(g.values.col(1)) / pts.rows()), 0.01);
}
