#include "streamcount/l0_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "streamcount/error.hpp"
#include "streamcount/random.hpp"

namespace streamcount {
namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  std::uint64_t low = static_cast<std::uint64_t>(product & kPrime);
  std::uint64_t high = static_cast<std::uint64_t>(product >> 61);
  std::uint64_t sum = low + high;
  if (sum >= kPrime) sum -= kPrime;
  return sum;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  while (exponent != 0) {
    if (exponent & 1U) result = mul_mod(result, base);
    base = mul_mod(base, base);
    exponent >>= 1;
  }
  return result;
}

// delta reduced into [0, p).
std::uint64_t residue(std::int64_t delta) {
  const std::int64_t r = delta % static_cast<std::int64_t>(kPrime);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(kPrime) : r);
}

std::size_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(64 - std::countl_zero(x - 1));
}

}  // namespace

L0Sampler::L0Sampler(std::uint64_t universe_size, std::uint64_t seed, double failure_exponent,
                     std::uint64_t failure_base)
    : universe_(universe_size), seed_(seed) {
  if (universe_size == 0) throw Error(ErrorCode::kInvalidParams, "empty sketch universe");
  if (!(failure_exponent > 0)) throw Error(ErrorCode::kInvalidParams, "failure exponent must be positive");
  const std::uint64_t bound = std::max<std::uint64_t>(failure_base == 0 ? universe_size : failure_base, 2);
  repetitions_ = static_cast<std::size_t>(
      std::ceil(failure_exponent * std::log2(static_cast<double>(bound)) - 1e-9));
  repetitions_ = std::max<std::size_t>(repetitions_, 1);
  levels_ = ceil_log2(universe_size) + 3;

  Rng rng(derive_seed(seed, 0x6c30));
  base_ = 1 + rng.below(kPrime - 1);
  hash_seeds_.resize(repetitions_);
  for (auto& s : hash_seeds_) s = rng();
  cells_.resize(repetitions_ * levels_);
}

std::size_t L0Sampler::level_of(std::size_t repetition, std::uint64_t index) const {
  const std::uint64_t h = mix64(index ^ hash_seeds_[repetition]);
  return std::min<std::size_t>(static_cast<std::size_t>(std::countl_zero(h)), levels_ - 1);
}

void L0Sampler::update(std::uint64_t index, std::int64_t delta) {
  if (index >= universe_) throw Error(ErrorCode::kIndexOutOfRange, "sketch index out of range");
  if (delta == 0) return;
  const std::uint64_t term = mul_mod(residue(delta), pow_mod(base_, index));
  const auto weighted = static_cast<std::uint64_t>(delta) * index;
  for (std::size_t r = 0; r < repetitions_; ++r) {
    const std::size_t top = level_of(r, index);
    Cell* row = cells_.data() + r * levels_;
    for (std::size_t level = 0; level <= top; ++level) {
      Cell& cell = row[level];
      cell.count += delta;
      cell.index_sum += weighted;
      cell.fingerprint += term;
      if (cell.fingerprint >= kPrime) cell.fingerprint -= kPrime;
    }
  }
}

std::optional<std::uint64_t> L0Sampler::recover(const Cell& cell) const {
  if (cell.count == 0) return std::nullopt;
  const auto count = cell.count;
  const auto sum = static_cast<std::int64_t>(cell.index_sum);
  if (sum % count != 0) return std::nullopt;
  const std::int64_t index = sum / count;
  if (index < 0 || static_cast<std::uint64_t>(index) >= universe_) return std::nullopt;
  const auto idx = static_cast<std::uint64_t>(index);
  if (mul_mod(residue(count), pow_mod(base_, idx)) != cell.fingerprint) return std::nullopt;
  return idx;
}

std::optional<std::uint64_t> L0Sampler::sample() const {
  for (std::size_t r = 0; r < repetitions_; ++r) {
    const Cell* row = cells_.data() + r * levels_;
    std::size_t level = levels_;
    while (level > 0 && row[level - 1].empty()) --level;
    if (level == 0) return std::nullopt;  // every level empty: the zero vector
    if (auto idx = recover(row[level - 1])) return idx;
  }
  return std::nullopt;
}

bool L0Sampler::operator==(const L0Sampler& other) const {
  return universe_ == other.universe_ && seed_ == other.seed_ && cells_ == other.cells_;
}

}  // namespace streamcount
