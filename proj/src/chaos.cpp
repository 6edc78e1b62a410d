#include "fkp/chaos.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "fkp/errors.hpp"
#include "fkp/random.hpp"

namespace fkp {

namespace {

constexpr std::int64_t kChunk = std::int64_t{1} << 16;
constexpr Eigen::Index kSubBlock = 4096;

// Each non-zero alpha is psi of its parent (last non-zero entry cleared)
// times one univariate factor.
struct PsiRecipe {
  std::vector<long> parent;
  std::vector<int> dim;
  std::vector<int> order;
};

PsiRecipe make_recipe(const IndexSet& set) {
  PsiRecipe r;
  r.parent.assign(set.size(), -1);
  r.dim.assign(set.size(), -1);
  r.order.assign(set.size(), 0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    MultiIndex alpha = set[i];
    int j = set.nu() - 1;
    while (j >= 0 && alpha[static_cast<std::size_t>(j)] == 0) --j;
    if (j < 0) continue;
    r.dim[i] = j;
    r.order[i] = alpha[static_cast<std::size_t>(j)];
    alpha[static_cast<std::size_t>(j)] = 0;
    r.parent[i] = set.find(alpha);
  }
  return r;
}

void fill_psi(const IndexSet& set, const PsiRecipe& recipe, const Eigen::Ref<const Eigen::MatrixXd>& ys,
              Eigen::MatrixXd& psi) {
  const int nu = set.nu();
  std::vector<Eigen::MatrixXd> tables(static_cast<std::size_t>(nu));
  for (int j = 0; j < nu; ++j) tables[static_cast<std::size_t>(j)] = normalized_hermite_table(ys.col(j), set.max_degree());
  psi.resize(ys.rows(), static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    if (recipe.parent[i] < 0) {
      psi.col(c).setOnes();
      continue;
    }
    psi.col(c) = psi.col(recipe.parent[i]).cwiseProduct(
        tables[static_cast<std::size_t>(recipe.dim[i])].col(recipe.order[i]));
  }
}

// Per-chunk raw sums; every estimator is a function of these.
struct ChunkSums {
  std::int64_t n = 0;
  double sum_f = 0.0;
  Eigen::VectorXd sum_f_psi;
  Eigen::VectorXd sum_psi;
};

ChunkSums sample_chunk(const DensityModel& model, const IndexSet& a0, const PsiRecipe& recipe,
                       const CounterRng& rng, std::int64_t rows) {
  ChunkSums s;
  s.n = rows;
  s.sum_f_psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a0.size()));
  s.sum_psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a0.size()));
  Eigen::MatrixXd psi;
  for (std::int64_t r0 = 0; r0 < rows; r0 += kSubBlock) {
    const Eigen::Index n = static_cast<Eigen::Index>(std::min<std::int64_t>(kSubBlock, rows - r0));
    const Eigen::MatrixXd ys = rng.normal_block(static_cast<std::uint64_t>(r0), n, model.nu());
    const Eigen::VectorXd f = model.log_density_rows(ys);
    fill_psi(a0, recipe, ys, psi);
    s.sum_f += f.sum();
    s.sum_f_psi.noalias() += psi.transpose() * f;
    s.sum_psi += psi.colwise().sum().transpose();
  }
  return s;
}

ChunkSums add(const ChunkSums& a, const ChunkSums& b) {
  ChunkSums s;
  s.n = a.n + b.n;
  s.sum_f = a.sum_f + b.sum_f;
  s.sum_f_psi = a.sum_f_psi + b.sum_f_psi;
  s.sum_psi = a.sum_psi + b.sum_psi;
  return s;
}

ChunkSums pairwise_reduce(const std::vector<ChunkSums>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return add(pairwise_reduce(parts, lo, mid), pairwise_reduce(parts, mid, hi));
}

Eigen::VectorXd finish(const ChunkSums& s, Estimator e) {
  const double n = static_cast<double>(s.n);
  Eigen::VectorXd f = s.sum_f_psi / n;
  if (e == Estimator::Centered) {
    const double mean_f = s.sum_f / n;
    f = (s.sum_f_psi - mean_f * s.sum_psi) / n;
    f(0) = mean_f;
  }
  return f;
}

Eigen::VectorXd batch_stderr(const std::vector<ChunkSums>& parts, const Eigen::VectorXd& total, Estimator e) {
  const Eigen::Index m = total.size();
  if (parts.size() < 2) return Eigen::VectorXd::Constant(m, std::numeric_limits<double>::quiet_NaN());
  double n_total = 0.0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  for (const auto& p : parts) {
    const double w = static_cast<double>(p.n);
    acc += (w * w) * (finish(p, e) - total).array().square().matrix();
    n_total += w;
  }
  const double k = static_cast<double>(parts.size());
  return (acc * (k / (k - 1.0))).cwiseSqrt() / n_total;
}

std::vector<ChunkSums> sample_all(const DensityModel& model, const IndexSet& a0, std::int64_t n_samples,
                                  std::uint64_t seed, int threads) {
  if (n_samples < 1) throw InvalidInput("estimate_f_coeffs: N must be >= 1");
  const PsiRecipe recipe = make_recipe(a0);
  const CounterRng root(seed);
  const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<ChunkSums> parts(static_cast<std::size_t>(n_chunks));
  auto work = [&](std::int64_t c) {
    const std::int64_t rows = std::min(kChunk, n_samples - c * kChunk);
    parts[static_cast<std::size_t>(c)] =
        sample_chunk(model, a0, recipe, root.substream(static_cast<std::uint64_t>(c)), rows);
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n_chunks)));
  if (workers == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::int64_t c = w; c < n_chunks; c += workers) work(c);
      });
    for (auto& t : pool) t.join();
  }
  return parts;
}

ChaosCoefficients build(const DensityModel& model, int mu, std::int64_t n_samples, std::uint64_t seed, Estimator e,
                        const std::vector<ChunkSums>& parts, const ChunkSums& total) {
  ChaosCoefficients c = coefficients_from_f(static_cast<int>(model.nu()), mu, finish(total, e));
  c.n_samples = n_samples;
  c.seed = seed;
  c.estimator = e;
  c.f_stderr = batch_stderr(parts, c.f, e);
  return c;
}

}  // namespace

const char* estimator_name(Estimator e) { return e == Estimator::Plain ? "plain" : "centered"; }

Estimator parse_estimator(const std::string& name) {
  if (name == "plain") return Estimator::Plain;
  if (name == "centered") return Estimator::Centered;
  throw InvalidInput("unknown estimator '" + name + "' (expected plain or centered)");
}

double hermite_psi(const MultiIndex& alpha, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (static_cast<Eigen::Index>(alpha.size()) != y.size()) throw InvalidInput("hermite_psi: dimension mismatch");
  if (!y.allFinite()) throw InvalidInput("hermite_psi: non-finite point");
  double v = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const int n = alpha[j];
    v *= hermite_he(n, y(static_cast<Eigen::Index>(j))) / std::sqrt(std::tgamma(n + 1.0));
  }
  return v;
}

Eigen::MatrixXd hermite_psi_rows(const IndexSet& set, const Eigen::Ref<const Eigen::MatrixXd>& ys) {
  if (ys.cols() != set.nu()) throw InvalidInput("hermite_psi_rows: dimension mismatch");
  Eigen::MatrixXd psi;
  fill_psi(set, make_recipe(set), ys, psi);
  return psi;
}

double ChaosCoefficients::f_at(const MultiIndex& alpha) const {
  const long i = a0.find(alpha);
  return i < 0 ? 0.0 : f(i);
}

ChaosCoefficients estimate_f_coeffs(const DensityModel& model, int mu, std::int64_t n_samples, std::uint64_t seed,
                                    const EstimationOptions& opts) {
  const IndexSet a0(static_cast<int>(model.nu()), mu, 0);
  const auto parts = sample_all(model, a0, n_samples, seed, opts.threads);
  const ChunkSums total = pairwise_reduce(parts, 0, parts.size());
  return build(model, mu, n_samples, seed, opts.estimator, parts, total);
}

ChaosEstimatePair estimate_f_coeffs_both(const DensityModel& model, int mu, std::int64_t n_samples,
                                         std::uint64_t seed, int threads) {
  const IndexSet a0(static_cast<int>(model.nu()), mu, 0);
  const auto parts = sample_all(model, a0, n_samples, seed, threads);
  const ChunkSums total = pairwise_reduce(parts, 0, parts.size());
  return {build(model, mu, n_samples, seed, Estimator::Centered, parts, total),
          build(model, mu, n_samples, seed, Estimator::Plain, parts, total)};
}

ChaosCoefficients coefficients_from_f(int nu, int mu, Eigen::VectorXd f) {
  ChaosCoefficients c;
  c.nu = nu;
  c.mu = mu;
  c.a0 = IndexSet(nu, mu, 0);
  c.a1 = IndexSet(nu, mu, 1);
  c.a2 = IndexSet(nu, mu, 2);
  if (f.size() != static_cast<Eigen::Index>(c.a0.size()))
    throw InvalidInput("coefficient vector does not match |A_{0,mu}|");
  c.f = std::move(f);
  c.f_stderr = Eigen::VectorXd::Zero(c.f.size());
  c.g = derive_g_coeffs(c.a0, c.f, mu);
  c.h = derive_h_coeffs(c.a0, c.f, mu);
  return c;
}

ChaosCoefficients gaussian_reference_coeffs(int nu, int mu) {
  const IndexSet a0(nu, mu, 0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a0.size()));
  const double d = static_cast<double>(nu);
  // f = -(nu/2) log 2pi - |y|^2/2 and y_j^2 = 1 + sqrt(2) psi_{2 e_j}.
  f(0) = -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * d;
  if (mu >= 2) {
    for (int j = 0; j < nu; ++j) {
      MultiIndex alpha(static_cast<std::size_t>(nu), 0);
      alpha[static_cast<std::size_t>(j)] = 2;
      f(a0.find(alpha)) = -1.0 / std::sqrt(2.0);
    }
  }
  return coefficients_from_f(nu, mu, std::move(f));
}

Eigen::MatrixXd derive_g_coeffs(const IndexSet& a0, const Eigen::VectorXd& f, int mu) {
  const int nu = a0.nu();
  const IndexSet a1(nu, mu, 1);
  Eigen::MatrixXd g(nu, static_cast<Eigen::Index>(a1.size()));
  for (std::size_t i = 0; i < a1.size(); ++i) {
    for (int j = 0; j < nu; ++j) {
      MultiIndex up = a1[i];
      const int aj = up[static_cast<std::size_t>(j)]++;
      const long p = a0.find(up);
      if (p < 0) throw ConsistencyError("derive_g_coeffs: missing parent coefficient");
      g(j, static_cast<Eigen::Index>(i)) = std::sqrt(aj + 1.0) * f(p);
    }
  }
  return g;
}

Eigen::VectorXd derive_h_coeffs(const IndexSet& a0, const Eigen::VectorXd& f, int mu) {
  const int nu = a0.nu();
  const IndexSet a2(nu, mu, 2);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a2.size()));
  for (std::size_t i = 0; i < a2.size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < nu; ++j) {
      MultiIndex up = a2[i];
      const int aj = up[static_cast<std::size_t>(j)];
      up[static_cast<std::size_t>(j)] += 2;
      const long p = a0.find(up);
      if (p < 0) throw ConsistencyError("derive_h_coeffs: missing parent coefficient");
      acc += std::sqrt((aj + 1.0) * (aj + 2.0)) * f(p);
    }
    h(static_cast<Eigen::Index>(i)) = acc;
  }
  return h;
}

ConvergenceNorms convergence_norms(const ChaosCoefficients& c) {
  return {c.f.norm(), c.g.norm(), c.h.norm()};
}

ConvergenceNorms gaussian_reference_norms(int nu) {
  if (nu < 1) throw InvalidInput("gaussian_reference_norms: nu must be >= 1");
  const double d = static_cast<double>(nu);
  const double l = std::log(2.0 * std::numbers::pi);
  return {std::sqrt(d / 2.0 + (1.0 + 2.0 * l + l * l) * d * d / 4.0), std::sqrt(d), d};
}

double potential_mean_diagnostic(const ChaosCoefficients& c) {
  return c.g.squaredNorm() / 8.0 + (c.h.size() > 0 ? c.h(0) / 4.0 : 0.0);
}

double potential_hermite(const ChaosCoefficients& c, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() != c.nu) throw InvalidInput("potential_hermite: dimension mismatch");
  const Eigen::MatrixXd row = y.transpose();
  const Eigen::VectorXd psi1 = hermite_psi_rows(c.a1, row).row(0).transpose();
  const Eigen::VectorXd psi2 = hermite_psi_rows(c.a2, row).row(0).transpose();
  return (c.g * psi1).squaredNorm() / 8.0 + c.h.dot(psi2) / 4.0;
}

}  // namespace fkp
