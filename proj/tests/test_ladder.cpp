#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fkp/chaos.hpp"
#include "fkp/errors.hpp"
#include "fkp/ladder.hpp"
#include "fkp/random.hpp"
#include "oracles.hpp"

using namespace fkp;

namespace {

ChaosCoefficients random_coeffs(int nu, int mu, std::uint64_t seed) {
  const auto a0 = multi_index_set(nu, mu, 0);
  const CounterRng rng(seed);
  Eigen::VectorXd f(static_cast<Eigen::Index>(a0.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f(i) = 0.5 * rng.normal(static_cast<std::uint64_t>(i)) / (1.0 + degree(a0[static_cast<std::size_t>(i)]));
  return coefficients_from_f(nu, mu, f);
}

ChaosCoefficients two_cluster_coeffs() {
  const CounterRng rng(31, 2);
  Eigen::MatrixXd raw = rng.normal_block(0, 20, 1) * 0.5;
  for (Eigen::Index r = 0; r < raw.rows(); ++r) raw(r, 0) += r % 2 ? 1.5 : -1.5;
  const auto model = DensityModel::gkde(normalize_dataset(raw));
  return estimate_f_coeffs(model, 4, 200000, 5);
}

}  // namespace

TEST(Basis, FlatIndexRowMajor) {
  BasisSpec b{{1, 2}, {0.5, 0.5}, {0.0, 0.0}};
  EXPECT_EQ(b.dim(), 6);
  EXPECT_EQ(b.n_qubits(), 5);
  EXPECT_EQ(b.flat_index({0, 0}), 0);
  EXPECT_EQ(b.flat_index({0, 1}), 1);
  EXPECT_EQ(b.flat_index({1, 0}), 3);
  for (Eigen::Index f = 0; f < b.dim(); ++f) EXPECT_EQ(b.flat_index(b.levels(f)), f);
  EXPECT_THROW(b.flat_index({2, 0}), InvalidInput);
  BasisSpec bad{{1}, {-0.5}, {0.0}};
  EXPECT_THROW(bad.validate(), InvalidInput);
}

TEST(Oscillator, ValuesAndNormalization) {
  const auto phi = oscillator_functions(4, 0.5, 0.0, 0.0);
  EXPECT_NEAR(phi(0), std::pow(2 * std::numbers::pi, -0.25), 1e-15);
  EXPECT_NEAR(phi(0), 0.63161, 1e-5);
  EXPECT_EQ(phi(1), 0.0);
  EXPECT_EQ(phi(3), 0.0);
  // Orthonormal under Lebesgue measure; checked by quadrature.
  const auto q = oracle::gauss_hermite(64);
  const double omega = 0.8, c = 0.4;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(7, 7);
  for (Eigen::Index k = 0; k < q.nodes.size(); ++k) {
    const double y = c + q.nodes(k) / std::sqrt(omega);
    const auto v = oscillator_functions(6, omega, c, y);
    gram += q.weights(k) * std::exp(q.nodes(k) * q.nodes(k)) / std::sqrt(omega) * v * v.transpose();
  }
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LadderAlgebra, MatrixElements) {
  auto [t1, a1] = ladder_matrix_element(0, 1, 3);
  EXPECT_EQ(t1, 2);
  EXPECT_NEAR(a1, std::sqrt(3.0), 1e-15);
  auto [t2, a2] = ladder_matrix_element(1, 1, 2);
  EXPECT_EQ(t2, 2);
  EXPECT_NEAR(a2, 2.0, 1e-15);
  EXPECT_EQ(ladder_matrix_element(0, 2, 1).second, 0.0);
  EXPECT_EQ(ladder_matrix_element(2, 0, 3, 4).second, 0.0);
  auto [t3, a3] = ladder_matrix_element(2, 1, 1);
  EXPECT_EQ(t3, 2);
  EXPECT_NEAR(a3, std::sqrt(2.0) * std::sqrt(1.0) * 1.0, 1e-15);  // a- then a+ a+
}

TEST(LadderAlgebra, PositionPowers) {
  const auto b = BasisSpec::uniform(1, 4, 0.5);
  const auto y1 = monomial_to_ladder({1}, b);
  const double s = 1.0 / std::sqrt(2 * 0.5);
  EXPECT_NEAR(y1.coeff({1}, {0}), s, 1e-15);
  EXPECT_NEAR(y1.coeff({0}, {1}), s, 1e-15);
  EXPECT_EQ(y1.size(), 2U);
  const auto y2 = monomial_to_ladder({2}, b);
  const double s2 = 1.0 / (2 * 0.5);
  EXPECT_NEAR(y2.coeff({2}, {0}), s2, 1e-15);
  EXPECT_NEAR(y2.coeff({0}, {2}), s2, 1e-15);
  EXPECT_NEAR(y2.coeff({1}, {1}), 2 * s2, 1e-15);
  EXPECT_NEAR(y2.coeff({0}, {0}), s2, 1e-15);
  EXPECT_EQ(y2.size(), 4U);
}

TEST(LadderAlgebra, LaplacianForm) {
  const auto lap = laplacian_ladder(BasisSpec::uniform(1, 4, 0.5));
  EXPECT_NEAR(lap.coeff({2}, {0}), 0.25, 1e-15);
  EXPECT_NEAR(lap.coeff({0}, {2}), 0.25, 1e-15);
  EXPECT_NEAR(lap.coeff({1}, {1}), -0.5, 1e-15);
  EXPECT_NEAR(lap.coeff({0}, {0}), -0.25, 1e-15);
}

TEST(Fbr, LaplacianMatchesQuadrature) {
  for (double omega : {0.5, 1.3}) {
    const BasisSpec b{{7}, {omega}, {0.0}};
    const auto fbr = build_fbr_matrix(laplacian_ladder(b), b);
    // quadrature_fbr with V = 0 gives -(1/2) Laplacian.
    const Eigen::MatrixXd ref = -2.0 * oracle::quadrature_fbr(b.caps, b.omegas, b.centers,
                                                              [](const Eigen::VectorXd&) { return 0.0; });
    EXPECT_LT((fbr.entries - ref).cwiseAbs().maxCoeff(), 1e-8) << omega;
  }
}

TEST(Fbr, GaussianReferenceIsNumberOperator) {
  const auto pot = to_monomial(gaussian_reference_coeffs(1, 4));
  const auto b = BasisSpec::uniform(1, 5, 0.5);
  auto h = assemble_fkp_ladder(pot, b);
  h.prune(1e-12);
  ASSERT_EQ(h.size(), 1U);
  EXPECT_NEAR(h.coeff({1}, {1}), 0.5, 1e-14);
  const auto fbr = build_fbr_matrix(h, b);
  Eigen::VectorXd diag(6);
  diag << 0, 0.5, 1.0, 1.5, 2.0, 2.5;
  EXPECT_LT((fbr.entries - Eigen::MatrixXd(diag.asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Fbr, AssembledOperatorMatchesQuadrature) {
  struct Case {
    int nu, mu;
    BasisSpec basis;
  };
  const std::vector<Case> cases = {
      {1, 4, BasisSpec{{8}, {0.5}, {0.0}}},
      {1, 5, BasisSpec{{6}, {0.9}, {0.3}}},
      {2, 3, BasisSpec{{2, 2}, {0.5, 0.7}, {0.0, -0.2}}},
      {2, 4, BasisSpec{{3, 2}, {0.6, 0.5}, {0.1, 0.0}}},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto coeffs = random_coeffs(c.nu, c.mu, 40 + i);
    const auto pot = to_monomial(coeffs);
    const auto fbr = build_fbr_matrix(assemble_fkp_ladder(pot, c.basis), c.basis);
    const Eigen::MatrixXd ref = oracle::quadrature_fbr(c.basis.caps, c.basis.omegas, c.basis.centers,
                                                       [&](const Eigen::VectorXd& y) { return potential_hermite(coeffs, y); });
    const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    EXPECT_LT((fbr.entries - ref).cwiseAbs().maxCoeff(), 1e-8 * scale) << "case " << i;
    EXPECT_LT(fbr.asymmetry, 1e-10 * scale);
  }
}

TEST(Fbr, ApplyMatchesDense) {
  const auto coeffs = random_coeffs(2, 4, 3);
  const BasisSpec b{{3, 4}, {0.5, 0.6}, {0.0, 0.1}};
  const auto poly = assemble_fkp_ladder(to_monomial(coeffs), b);
  const auto fbr = build_fbr_matrix(poly, b);
  const CounterRng rng(2);
  const Eigen::VectorXd x = rng.normal_block(0, b.dim(), 1);
  EXPECT_LT((apply_ladder(poly, b, x) - fbr.entries * x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fbr, CapacityLimit) {
  const auto b = BasisSpec::uniform(2, 9);
  const auto h = laplacian_ladder(b);
  EXPECT_THROW(build_fbr_matrix(h, b, 50), CapacityError);
}

TEST(Eigen, OrnsteinUhlenbeckSpectrum) {
  const auto pot = to_monomial(gaussian_reference_coeffs(1, 4));
  const auto b = BasisSpec::uniform(1, 8, 0.5);
  const auto fbr = build_fbr_matrix(assemble_fkp_ladder(pot, b), b);
  const auto pairs = classical_eigensolve(fbr, 5);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(pairs[static_cast<std::size_t>(k)].lambda, 0.5 * k, 1e-12);
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(b.dim());
  e0(0) = 1.0;
  EXPECT_NEAR(pairs[0].coeffs.dot(e0), 1.0, 1e-12);
  EXPECT_GT(pairs[0].coeffs(0), 0.0);
  // Ground state equals p_H^{1/2}.
  for (int i = 0; i < 20; ++i) {
    const double y = -4.0 + 0.4 * i;
    Eigen::VectorXd v(1);
    v << y;
    EXPECT_NEAR(eval_eigenfunction(pairs[0].coeffs, b, v), std::pow(2 * std::numbers::pi, -0.25) * std::exp(-y * y / 4),
                1e-8);
  }
}

TEST(Eigen, DatasetHamiltonianIsPositive) {
  const auto coeffs = two_cluster_coeffs();
  const auto b = BasisSpec::uniform(1, 10, 0.5);
  const auto fbr = build_fbr_matrix(assemble_fkp_ladder(to_monomial(coeffs), b), b);
  const auto pairs = classical_eigensolve(fbr, 4);
  EXPECT_GE(pairs[0].lambda, -1e-8);
  for (std::size_t k = 1; k < pairs.size(); ++k) EXPECT_GT(pairs[k].lambda, pairs[k - 1].lambda);
  // Orthonormality of q_n under Lebesgue measure by importance-sampled MC.
  const double sigma = 2.5;
  const Eigen::Index n = 200000;
  const CounterRng rng(12);
  const auto z = rng.normal_block(0, n, 1);
  Eigen::ArrayXXd prod(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd y(1);
    y << sigma * z(i, 0);
    const double w = sigma * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * z(i, 0) * z(i, 0));
    const double q0 = eval_eigenfunction(pairs[0].coeffs, b, y);
    const double q1 = eval_eigenfunction(pairs[1].coeffs, b, y);
    prod(i, 0) = w * q0 * q0;
    prod(i, 1) = w * q0 * q1;
    prod(i, 2) = w * q1 * q1;
  }
  const double want[3] = {1.0, 0.0, 1.0};
  for (int c = 0; c < 3; ++c) {
    const double mean = prod.col(c).mean();
    const double se = std::sqrt((prod.col(c) - mean).square().sum() / double(n - 1) / double(n));
    EXPECT_LE(std::abs(mean - want[c]), 3.0 * se + 1e-12) << c;
  }
}

TEST(Eigen, PowerIteration) {
  Eigen::MatrixXd m(3, 3);
  m << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  EXPECT_NEAR(power_iteration_max(m, 500), es.eigenvalues().maxCoeff(), 1e-8);
}
