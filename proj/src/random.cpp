#include "fkp/random.hpp"

#include <cmath>

#include <boost/math/special_functions/erf.hpp>

namespace fkp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), key_(splitmix(splitmix(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  // Two rounds keep consecutive counters decorrelated.
  return splitmix(splitmix(counter ^ key_) + key_);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  // 53 random mantissa bits, shifted by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const noexcept { return normal_quantile(uniform(counter)); }

Eigen::MatrixXd CounterRng::normal_block(std::uint64_t first_row, Eigen::Index rows, Eigen::Index cols) const {
  Eigen::MatrixXd out(rows, cols);
  const auto ucols = static_cast<std::uint64_t>(cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::uint64_t base = (first_row + static_cast<std::uint64_t>(r)) * ucols;
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = normal(base + static_cast<std::uint64_t>(c));
  }
  return out;
}

CounterRng CounterRng::substream(std::uint64_t stream) const noexcept {
  return CounterRng(seed_, splitmix(stream_ + kGolden * (stream + 1)));
}

std::int64_t bernoulli_count(const CounterRng& rng, double p, std::int64_t trials) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) hits += rng.uniform(static_cast<std::uint64_t>(i)) < p ? 1 : 0;
  return hits;
}

double normal_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

}  // namespace fkp
