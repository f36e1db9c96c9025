#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace streamcount {

// Linear sketch of an integer vector over [0, universe_size) that returns a
// uniformly random index of nonzero frequency.
//
// Each repetition keeps one cell per level; index i lands in levels
// 0..level(i), where level(i) counts the leading zeros of a seeded hash. The
// deepest nonempty level holds the indices with the largest hash level, so
// when it is one-sparse its index is uniform over the support. A cell stores
// the frequency sum, the index-weighted sum and a polynomial fingerprint
// modulo 2^61 - 1 that certifies one-sparseness.
class L0Sampler {
 public:
  // failure_base defaults to universe_size; the sketch keeps
  // ceil(failure_exponent * log2(failure_base)) repetitions, each failing with
  // probability below 1/2, for overall failure below failure_base^-failure_exponent.
  L0Sampler(std::uint64_t universe_size, std::uint64_t seed, double failure_exponent = 2.0,
            std::uint64_t failure_base = 0);

  void update(std::uint64_t index, std::int64_t delta);
  // nullopt for the zero vector or when every repetition fails.
  std::optional<std::uint64_t> sample() const;

  std::size_t repetitions() const { return repetitions_; }
  std::size_t levels() const { return levels_; }
  // Machine words of sketch state, including hash seeds and fingerprint base.
  std::size_t word_count() const { return cells_.size() * 3 + repetitions_ + 2; }
  std::uint64_t universe_size() const { return universe_; }

  bool operator==(const L0Sampler& other) const;

 private:
  struct Cell {
    std::int64_t count = 0;
    std::uint64_t index_sum = 0;    // wraps modulo 2^64
    std::uint64_t fingerprint = 0;  // modulo 2^61 - 1

    bool empty() const { return count == 0 && index_sum == 0 && fingerprint == 0; }
    bool operator==(const Cell&) const = default;
  };

  std::size_t level_of(std::size_t repetition, std::uint64_t index) const;
  std::optional<std::uint64_t> recover(const Cell& cell) const;

  std::uint64_t universe_;
  std::uint64_t seed_;
  std::uint64_t base_;  // fingerprint evaluation point
  std::size_t repetitions_;
  std::size_t levels_;
  std::vector<std::uint64_t> hash_seeds_;
  std::vector<Cell> cells_;  // repetition-major
};

}  // namespace streamcount
