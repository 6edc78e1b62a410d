#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace fkp {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so any sample can be regenerated independently
/// of how the work was chunked or scheduled.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept;

  /// Standard normal by inverse CDF of uniform(counter).
  double normal(std::uint64_t counter) const noexcept;

  /// Rows [first_row, first_row + rows) of an infinite N(0, I_cols) sample
  /// matrix; entry (r, c) uses counter r * cols + c.
  Eigen::MatrixXd normal_block(std::uint64_t first_row, Eigen::Index rows, Eigen::Index cols) const;

  CounterRng substream(std::uint64_t stream) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
};

/// Number of successes in `trials` Bernoulli(p) draws taken from
/// counters [0, trials) of `rng`.
std::int64_t bernoulli_count(const CounterRng& rng, double p, std::int64_t trials);

/// Standard normal quantile function.
double normal_quantile(double u);

}  // namespace fkp
