#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fkp/chaos.hpp"
#include "fkp/multi_index.hpp"

namespace fkp {

/// a(m, n): coefficient of t^m in He_n(t), zero for m > n.
Eigen::MatrixXd hermite_monomial_table(int max_degree);

struct MonomialTerm {
  MultiIndex m;
  double value = 0.0;
};

struct QuadraticTerm {
  MultiIndex m;
  MultiIndex mp;
  double value = 0.0;
};

/// V(y) = (1/8) sum ghat_{m m'} y^m y^{m'} + (1/4) sum hhat_m y^m.
/// Exponent sets coincide with A_{1,mu} and A_{2,mu}, the only monomials a
/// truncated Hermite expansion can reach.
struct MonomialPotential {
  int nu = 0;
  int mu = 0;
  IndexSet m1;
  IndexSet m2;
  Eigen::MatrixXd quad;  // |m1| x |m1|, symmetric
  Eigen::VectorXd lin;   // |m2|

  std::vector<QuadraticTerm> quad_terms() const;  // non-zero entries, m <= m' order kept as stored
  std::vector<MonomialTerm> lin_terms() const;
  bool empty() const;
};

/// Change of basis psi_alpha -> y^m over an index set: entry (m, alpha) is
/// prod_j a(m_j, alpha_j) / sqrt(alpha_j!).
Eigen::MatrixXd hermite_to_monomial_matrix(const IndexSet& set);

MonomialPotential to_monomial(const ChaosCoefficients& coeffs);

double eval_monomial(const MonomialPotential& pot, const Eigen::Ref<const Eigen::VectorXd>& y);

/// (1/8) sum ghat y^m y^{m'} alone.
double eval_monomial_quadratic(const MonomialPotential& pot, const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace fkp
