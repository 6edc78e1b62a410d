#include "fkp/monomial.hpp"

#include <cmath>

#include "fkp/errors.hpp"

namespace fkp {

namespace {

double monomial_value(const MultiIndex& m, const Eigen::Ref<const Eigen::VectorXd>& y) {
  double v = 1.0;
  for (std::size_t j = 0; j < m.size(); ++j) v *= std::pow(y(static_cast<Eigen::Index>(j)), m[j]);
  return v;
}

Eigen::VectorXd monomial_vector(const IndexSet& set, const Eigen::Ref<const Eigen::VectorXd>& y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) v(static_cast<Eigen::Index>(i)) = monomial_value(set[i], y);
  return v;
}

}  // namespace

Eigen::MatrixXd hermite_monomial_table(int max_degree) {
  if (max_degree < 0) throw InvalidInput("hermite_monomial_table: max_degree must be >= 0");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(max_degree + 1, max_degree + 1);
  a(0, 0) = 1.0;
  if (max_degree >= 1) a(1, 1) = 1.0;
  // He_{n+1} = t He_n - n He_{n-1}
  for (int n = 1; n < max_degree; ++n) {
    for (int m = 0; m <= n; ++m) a(m + 1, n + 1) += a(m, n);
    for (int m = 0; m <= n - 1; ++m) a(m, n + 1) -= n * a(m, n - 1);
  }
  return a;
}

Eigen::MatrixXd hermite_to_monomial_matrix(const IndexSet& set) {
  const Eigen::MatrixXd a = hermite_monomial_table(set.max_degree());
  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const MultiIndex& alpha = set[static_cast<std::size_t>(col)];
    double inv_sqrt_fact = 1.0;
    for (int aj : alpha) inv_sqrt_fact /= std::sqrt(std::tgamma(aj + 1.0));
    for (Eigen::Index row = 0; row < n; ++row) {
      const MultiIndex& m = set[static_cast<std::size_t>(row)];
      double prod = inv_sqrt_fact;
      for (std::size_t j = 0; j < m.size() && prod != 0.0; ++j) prod *= a(m[j], alpha[j]);
      out(row, col) = prod;
    }
  }
  return out;
}

MonomialPotential to_monomial(const ChaosCoefficients& c) {
  MonomialPotential p;
  p.nu = c.nu;
  p.mu = c.mu;
  p.m1 = c.a1;
  p.m2 = c.a2;
  const Eigen::MatrixXd t1 = hermite_to_monomial_matrix(c.a1);
  const Eigen::MatrixXd t2 = hermite_to_monomial_matrix(c.a2);
  p.quad = t1 * gram_gg(c.g) * t1.transpose();
  p.quad = 0.5 * (p.quad + p.quad.transpose()).eval();
  p.lin = t2 * c.h;
  return p;
}

std::vector<QuadraticTerm> MonomialPotential::quad_terms() const {
  std::vector<QuadraticTerm> out;
  for (Eigen::Index r = 0; r < quad.rows(); ++r)
    for (Eigen::Index s = 0; s < quad.cols(); ++s)
      if (quad(r, s) != 0.0) out.push_back({m1[static_cast<std::size_t>(r)], m1[static_cast<std::size_t>(s)], quad(r, s)});
  return out;
}

std::vector<MonomialTerm> MonomialPotential::lin_terms() const {
  std::vector<MonomialTerm> out;
  for (Eigen::Index r = 0; r < lin.size(); ++r)
    if (lin(r) != 0.0) out.push_back({m2[static_cast<std::size_t>(r)], lin(r)});
  return out;
}

bool MonomialPotential::empty() const {
  return (quad.size() == 0 || (quad.array() == 0.0).all()) && (lin.size() == 0 || (lin.array() == 0.0).all());
}

double eval_monomial_quadratic(const MonomialPotential& pot, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() != pot.nu) throw InvalidInput("eval_monomial: dimension mismatch");
  if (!y.allFinite()) throw InvalidInput("eval_monomial: non-finite point");
  const Eigen::VectorXd v1 = monomial_vector(pot.m1, y);
  return v1.dot(pot.quad * v1) / 8.0;
}

double eval_monomial(const MonomialPotential& pot, const Eigen::Ref<const Eigen::VectorXd>& y) {
  return eval_monomial_quadratic(pot, y) + pot.lin.dot(monomial_vector(pot.m2, y)) / 4.0;
}

}  // namespace fkp
