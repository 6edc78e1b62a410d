#include "fkp/ladder.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "fkp/errors.hpp"

namespace fkp {

namespace {

struct Monomial1d {
  int beta;
  int gamma;
  double coeff;
};

double factorial(int n) { return std::tgamma(n + 1.0); }

double double_factorial_odd(int n) {  // (n)!! for odd n, (-1)!! = 1
  double v = 1.0;
  for (int k = n; k > 1; k -= 2) v *= k;
  return v;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Normal-ordered ((a+ + a-) / sqrt(2 omega))^k.
std::vector<Monomial1d> centred_power(int k, double omega) {
  std::vector<Monomial1d> out;
  const double scale = std::pow(2.0 * omega, -0.5 * k) * factorial(k);
  for (int s = 0; 2 * s <= k; ++s)
    for (int p = 0; p <= k - 2 * s; ++p) {
      const double c = double_factorial_odd(2 * s - 1) / (factorial(k - 2 * s - p) * factorial(2 * s) * factorial(p));
      out.push_back({k - 2 * s - p, p, scale * c});
    }
  return out;
}

// Normal-ordered y^m in one dimension, shifted by the basis centre.
std::vector<Monomial1d> power_1d(int m, double omega, double center) {
  std::map<std::pair<int, int>, double> acc;
  for (int k = 0; k <= m; ++k) {
    const double w = binomial(m, k) * std::pow(center, m - k);
    if (w == 0.0) continue;
    for (const auto& t : centred_power(k, omega)) acc[{t.beta, t.gamma}] += w * t.coeff;
  }
  std::vector<Monomial1d> out;
  for (const auto& [key, c] : acc)
    if (c != 0.0) out.push_back({key.first, key.second, c});
  return out;
}

}  // namespace

BasisSpec BasisSpec::uniform(int nu, int cap, double omega, double center) {
  BasisSpec b;
  b.caps.assign(static_cast<std::size_t>(nu), cap);
  b.omegas.assign(static_cast<std::size_t>(nu), omega);
  b.centers.assign(static_cast<std::size_t>(nu), center);
  b.validate();
  return b;
}

void BasisSpec::validate() const {
  if (caps.empty()) throw InvalidInput("basis: nu must be >= 1");
  if (omegas.size() != caps.size() || centers.size() != caps.size())
    throw InvalidInput("basis: caps, omegas and centers must have length nu");
  for (std::size_t j = 0; j < caps.size(); ++j) {
    if (caps[j] < 0) throw InvalidInput("basis: caps must be >= 0");
    if (!(omegas[j] > 0.0) || !std::isfinite(omegas[j])) throw InvalidInput("basis: omegas must be positive");
    if (!std::isfinite(centers[j])) throw InvalidInput("basis: centers must be finite");
  }
}

Eigen::Index BasisSpec::dim() const {
  Eigen::Index d = 1;
  for (int c : caps) d *= c + 1;
  return d;
}

int BasisSpec::n_qubits() const {
  int q = 0;
  for (int c : caps) q += c + 1;
  return q;
}

Eigen::Index BasisSpec::flat_index(const std::vector<int>& lv) const {
  if (lv.size() != caps.size()) throw InvalidInput("flat_index: level vector has the wrong dimension");
  Eigen::Index idx = 0;
  for (std::size_t j = 0; j < caps.size(); ++j) {
    if (lv[j] < 0 || lv[j] > caps[j]) throw InvalidInput("flat_index: level outside register " + std::to_string(j));
    idx = idx * (caps[j] + 1) + lv[j];
  }
  return idx;
}

std::vector<int> BasisSpec::levels(Eigen::Index flat) const {
  std::vector<int> lv(caps.size());
  for (std::size_t j = caps.size(); j-- > 0;) {
    lv[j] = static_cast<int>(flat % (caps[j] + 1));
    flat /= caps[j] + 1;
  }
  return lv;
}

void LadderPolynomial::add(const std::vector<int>& create, const std::vector<int>& annihilate, double coeff) {
  if (static_cast<int>(create.size()) != nu_ || static_cast<int>(annihilate.size()) != nu_)
    throw InvalidInput("ladder term dimension mismatch");
  terms_[{create, annihilate}] += coeff;
}

void LadderPolynomial::add(const LadderPolynomial& other, double scale) {
  if (other.nu_ != nu_) throw InvalidInput("ladder polynomial dimension mismatch");
  for (const auto& [key, c] : other.terms_) terms_[key] += scale * c;
}

LadderPolynomial& LadderPolynomial::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
  return *this;
}

std::vector<LadderTerm> LadderPolynomial::terms() const {
  std::vector<LadderTerm> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back({c, key.first, key.second});
  return out;
}

double LadderPolynomial::coeff(const std::vector<int>& create, const std::vector<int>& annihilate) const {
  const auto it = terms_.find({create, annihilate});
  return it == terms_.end() ? 0.0 : it->second;
}

std::pair<int, double> ladder_matrix_element(int beta, int gamma, int n, int cap) {
  if (beta < 0 || gamma < 0 || n < 0) throw InvalidInput("ladder_matrix_element: negative argument");
  const int target = n + beta - gamma;
  if (n < gamma || (cap >= 0 && target > cap)) return {target, 0.0};
  // sqrt(n! / (n-gamma)!) * sqrt(target! / (n-gamma)!)
  double amp = 1.0;
  for (int i = n - gamma + 1; i <= n; ++i) amp *= std::sqrt(static_cast<double>(i));
  for (int i = n - gamma + 1; i <= target; ++i) amp *= std::sqrt(static_cast<double>(i));
  return {target, amp};
}

LadderPolynomial monomial_to_ladder(const MultiIndex& m, const BasisSpec& basis) {
  const int nu = basis.nu();
  if (static_cast<int>(m.size()) != nu) throw InvalidInput("monomial_to_ladder: dimension mismatch");
  LadderPolynomial out(nu);
  std::vector<int> create(static_cast<std::size_t>(nu), 0), annihilate(static_cast<std::size_t>(nu), 0);
  out.add(create, annihilate, 1.0);
  for (int j = 0; j < nu; ++j) {
    if (m[static_cast<std::size_t>(j)] < 0) throw InvalidInput("monomial_to_ladder: negative exponent");
    if (m[static_cast<std::size_t>(j)] == 0) continue;
    const auto factor = power_1d(m[static_cast<std::size_t>(j)], basis.omegas[static_cast<std::size_t>(j)],
                                 basis.centers[static_cast<std::size_t>(j)]);
    LadderPolynomial next(nu);
    for (const auto& t : out.terms())
      for (const auto& f : factor) {
        auto c = t.create;
        auto a = t.annihilate;
        c[static_cast<std::size_t>(j)] = f.beta;
        a[static_cast<std::size_t>(j)] = f.gamma;
        next.add(c, a, t.coeff * f.coeff);
      }
    out = std::move(next);
  }
  return out;
}

LadderPolynomial laplacian_ladder(const BasisSpec& basis) {
  const int nu = basis.nu();
  LadderPolynomial out(nu);
  for (int j = 0; j < nu; ++j) {
    const double w = basis.omegas[static_cast<std::size_t>(j)] / 2.0;
    auto unit = [&](int b, int g) {
      std::vector<int> c(static_cast<std::size_t>(nu), 0), a(static_cast<std::size_t>(nu), 0);
      c[static_cast<std::size_t>(j)] = b;
      a[static_cast<std::size_t>(j)] = g;
      return std::make_pair(c, a);
    };
    for (const auto& [b, g, c] : {std::tuple{2, 0, w}, std::tuple{0, 2, w}, std::tuple{1, 1, -2.0 * w}}) {
      const auto [cr, an] = unit(b, g);
      out.add(cr, an, c);
    }
    const auto [cr, an] = unit(0, 0);
    out.add(cr, an, -w);
  }
  return out;
}

LadderPolynomial assemble_fkp_ladder(const MonomialPotential& pot, const BasisSpec& basis) {
  if (pot.nu != basis.nu()) throw InvalidInput("assemble_fkp_ladder: potential and basis dimensions differ");
  std::map<MultiIndex, double> exponents;
  for (const auto& q : pot.quad_terms()) {
    MultiIndex sum = q.m;
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += q.mp[j];
    exponents[sum] += q.value / 8.0;
  }
  for (const auto& l : pot.lin_terms()) exponents[l.m] += l.value / 4.0;

  LadderPolynomial out(basis.nu());
  for (const auto& [m, c] : exponents)
    if (c != 0.0) out.add(monomial_to_ladder(m, basis), c);
  out.add(laplacian_ladder(basis), -0.5);
  return out.prune();
}

FbrMatrix build_fbr_matrix(const LadderPolynomial& poly, const BasisSpec& basis, Eigen::Index dense_limit) {
  basis.validate();
  if (poly.nu() != basis.nu()) throw InvalidInput("build_fbr_matrix: polynomial and basis dimensions differ");
  const Eigen::Index dim = basis.dim();
  if (dim > dense_limit)
    throw CapacityError("FBR dimension " + std::to_string(dim) + " exceeds the dense limit " +
                        std::to_string(dense_limit) + "; reduce caps or use the quantum path");
  FbrMatrix out;
  out.basis = basis;
  out.entries = Eigen::MatrixXd::Zero(dim, dim);
  const auto terms = poly.terms();
  const int nu = basis.nu();
  std::vector<int> target(static_cast<std::size_t>(nu));
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto lv = basis.levels(col);
    for (const auto& t : terms) {
      double amp = t.coeff;
      for (int j = 0; j < nu && amp != 0.0; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const auto [n_out, a] = ladder_matrix_element(t.create[uj], t.annihilate[uj], lv[uj], basis.caps[uj]);
        target[uj] = n_out;
        amp *= a;
      }
      if (amp != 0.0) out.entries(basis.flat_index(target), col) += amp;
    }
  }
  out.asymmetry = (out.entries - out.entries.transpose()).cwiseAbs().maxCoeff();
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

Eigen::VectorXd apply_ladder(const LadderPolynomial& poly, const BasisSpec& basis, const Eigen::VectorXd& x) {
  if (x.size() != basis.dim()) throw InvalidInput("apply_ladder: vector size does not match the basis");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  const int nu = basis.nu();
  std::vector<int> target(static_cast<std::size_t>(nu));
  for (const auto& t : poly.terms())
    for (Eigen::Index col = 0; col < x.size(); ++col) {
      const auto lv = basis.levels(col);
      double amp = t.coeff * x(col);
      for (int j = 0; j < nu && amp != 0.0; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const auto [n_out, a] = ladder_matrix_element(t.create[uj], t.annihilate[uj], lv[uj], basis.caps[uj]);
        target[uj] = n_out;
        amp *= a;
      }
      if (amp != 0.0) y(basis.flat_index(target)) += amp;
    }
  return y;
}

std::vector<EigenPair> classical_eigensolve(const FbrMatrix& mat, int k) {
  const Eigen::Index dim = mat.entries.rows();
  if (k < 1 || k > dim) throw InvalidInput("classical_eigensolve: k must be in [1, dim]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat.entries);
  std::vector<EigenPair> all;
  all.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd v = eig.eigenvectors().col(i);
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v(at) < 0.0) v = -v;
    all.push_back({eig.eigenvalues()(i), std::move(v)});
  }
  // Ascending; near-ties ordered by the rounded coefficient vector.
  std::stable_sort(all.begin(), all.end(), [](const EigenPair& a, const EigenPair& b) {
    if (std::abs(a.lambda - b.lambda) > 1e-10) return a.lambda < b.lambda;
    for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) {
      const double ra = std::round(a.coeffs(i) * 1e8), rb = std::round(b.coeffs(i) * 1e8);
      if (ra != rb) return ra < rb;
    }
    return false;
  });
  all.resize(static_cast<std::size_t>(k));
  return all;
}

std::vector<Eigen::VectorXd> basis_values(const BasisSpec& basis, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() != basis.nu()) throw InvalidInput("basis_values: dimension mismatch");
  if (!y.allFinite()) throw InvalidInput("basis_values: non-finite point");
  std::vector<Eigen::VectorXd> out;
  for (int j = 0; j < basis.nu(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    out.push_back(oscillator_functions(basis.caps[uj], basis.omegas[uj], basis.centers[uj], y(j)));
  }
  return out;
}

double eval_eigenfunction(const Eigen::VectorXd& coeffs, const BasisSpec& basis,
                          const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (coeffs.size() != basis.dim()) throw InvalidInput("eval_eigenfunction: coefficient size mismatch");
  const auto phi = basis_values(basis, y);
  // Contract the last dimension first so the flat index stays row-major.
  Eigen::VectorXd cur = coeffs;
  for (int j = basis.nu() - 1; j >= 0; --j) {
    const Eigen::Index n = basis.caps[static_cast<std::size_t>(j)] + 1;
    const Eigen::Map<const Eigen::MatrixXd> block(cur.data(), n, cur.size() / n);
    cur = (block.transpose() * phi[static_cast<std::size_t>(j)]).eval();
  }
  return cur(0);
}

double power_iteration_max(const Eigen::MatrixXd& m, int iterations) {
  if (m.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
  double lambda = 0.0;
  for (int i = 0; i < iterations; ++i) {
    Eigen::VectorXd w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    lambda = v.dot(w);
    v = w / norm;
  }
  return std::abs(lambda);
}

}  // namespace fkp
