#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace fkp {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

/// A_{kappa,mu}: every alpha in N^nu with |alpha| <= mu - kappa, in graded
/// lexicographic order (degree ascending; within a degree, larger leading
/// entries first).
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(int nu, int mu, int kappa);

  int nu() const { return nu_; }
  int mu() const { return mu_; }
  int kappa() const { return kappa_; }
  int max_degree() const { return mu_ - kappa_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Position of alpha, or -1 when alpha is not a member.
  long find(const MultiIndex& alpha) const;

 private:
  int nu_ = 0;
  int mu_ = 0;
  int kappa_ = 0;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> position_;
};

IndexSet multi_index_set(int nu, int mu, int kappa);

/// (nu + d)! / (nu! d!) without overflow for the sizes used here.
std::size_t multi_index_count(int nu, int d);

}  // namespace fkp
