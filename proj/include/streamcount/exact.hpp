#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "streamcount/copy.hpp"
#include "streamcount/graph.hpp"
#include "streamcount/pattern.hpp"
#include "streamcount/random.hpp"
#include "streamcount/rational.hpp"

namespace streamcount {

inline constexpr std::size_t kExactMaxPatternVertices = 6;
inline constexpr std::size_t kExactMaxHostVertices = 30;

// Copies of a pattern in a host, one entry per unordered occurrence.
struct CopySet {
  std::vector<Copy> copies;                 // sorted
  std::vector<std::vector<Vertex>> maps;    // maps[i][x] is the image of pattern vertex x
  std::uint64_t ordered_count = 0;          // edge-preserving injections, = count() * |Aut(H)|

  std::size_t count() const { return copies.size(); }
};

// Backtracking enumeration. Throws kSizeLimitExceeded beyond 6 pattern or
// 30 host vertices.
CopySet enumerate_copies(const Graph& host, const Graph& pattern);

// A copy drawn uniformly from the set; throws kEmptySampleSet if there is none.
const Copy& uniform_copy(const CopySet& set, Rng& rng);

// Exact output distribution of sample_subgraph over an exact oracle, obtained
// by summing over every directed-edge draw, wedge index, coin and final slot.
// Copies absent from the map have probability 0. Probabilities live in
// Q(sqrt(2m)).
std::map<Copy, Surd> exact_copy_distribution(const Graph& host, const Pattern& pattern);

Surd exact_copy_probability(const Graph& host, const Pattern& pattern, const Copy& copy);

}  // namespace streamcount
