#include "fkp/multi_index.hpp"

#include "fkp/errors.hpp"

namespace fkp {

namespace {

// All alpha of exact degree d in dimensions [j, nu), leading entries descending.
void emit_degree(MultiIndex& alpha, int j, int remaining, std::vector<MultiIndex>& out) {
  const int nu = static_cast<int>(alpha.size());
  if (j == nu - 1) {
    alpha[j] = remaining;
    out.push_back(alpha);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    alpha[j] = a;
    emit_degree(alpha, j + 1, remaining - a, out);
  }
  alpha[j] = 0;
}

}  // namespace

IndexSet::IndexSet(int nu, int mu, int kappa) : nu_(nu), mu_(mu), kappa_(kappa) {
  if (nu < 1) throw InvalidInput("multi_index_set: nu must be >= 1");
  if (kappa < 0 || kappa > 2) throw InvalidInput("multi_index_set: kappa must be 0, 1 or 2");
  if (mu - kappa < 0) throw InvalidInput("invalid truncation: mu - kappa < 0");
  MultiIndex alpha(static_cast<std::size_t>(nu), 0);
  for (int d = 0; d <= mu - kappa; ++d) emit_degree(alpha, 0, d, indices_);
  for (std::size_t i = 0; i < indices_.size(); ++i) position_.emplace(indices_[i], i);
}

long IndexSet::find(const MultiIndex& alpha) const {
  const auto it = position_.find(alpha);
  return it == position_.end() ? -1 : static_cast<long>(it->second);
}

IndexSet multi_index_set(int nu, int mu, int kappa) { return IndexSet(nu, mu, kappa); }

std::size_t multi_index_count(int nu, int d) {
  if (d < 0) return 0;
  // C(nu + d, d) by the multiplicative formula; each partial product is exact.
  std::size_t c = 1;
  for (int i = 1; i <= d; ++i) c = c * static_cast<std::size_t>(nu + i) / static_cast<std::size_t>(i);
  return c;
}

}  // namespace fkp
