#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "streamcount/copy.hpp"
#include "streamcount/estimate.hpp"
#include "streamcount/oracle.hpp"
#include "streamcount/pattern.hpp"
#include "streamcount/random.hpp"
#include "streamcount/rounds.hpp"
#include "streamcount/stream.hpp"

namespace streamcount {

// Checks passed by one sampling attempt, as a bit set.
enum SampleCheck : std::uint32_t {
  kPiecesSampled = 1U << 0,  // every cycle and star piece was produced
  kDisjoint = 1U << 1,       // pieces are vertex-disjoint and cover |V(H)| vertices
  kCandidate = 1U << 2,      // the pieces span at least one copy of H
  kAccepted = 1U << 3,       // the final 1/f coin selected a copy
};

struct SampleOutcome {
  std::optional<Copy> copy;
  std::uint32_t checks = 0;
};

// Query-model sampler over an oracle. In the exact model, each fixed copy of
// H is returned with probability exactly (2m)^-rho(H). In the relaxed model,
// random neighbors replace i-th neighbor queries.

// A candidate w for closing a cycle at u, or a failure. Every neighbor w of u
// with u < w in the vertex order comes out with probability 1/sqrt(2m). When u
// has high degree, w may be a non-neighbor; callers check adjacency.
std::optional<Vertex> sample_wedge(QueryOracle& oracle, Vertex u, Rng& rng);
// A canonical odd cycle as its vertex sequence, each with probability (2m)^-(length/2).
std::optional<std::vector<Vertex>> sample_odd_cycle(QueryOracle& oracle, std::size_t length, Rng& rng);
// A canonical star (center first), each with probability (2m)^-petals.
std::optional<std::vector<Vertex>> sample_star(QueryOracle& oracle, std::size_t petals, Rng& rng);
SampleOutcome sample_subgraph(QueryOracle& oracle, const Pattern& pattern, Rng& rng);
// Repeats sample_subgraph ceil(10 (2m)^rho / copies_lower_bound) times.
std::optional<Copy> sample_subgraph_uniformly(QueryOracle& oracle, const Pattern& pattern,
                                              double copies_lower_bound, Rng& rng);

// All copies of pattern on exactly the given vertices, using only the listed
// host edges, that contain every required edge. Sorted by edge set.
std::vector<Copy> copies_spanning(const Graph& pattern, std::span<const Vertex> vertices,
                                  const EdgeSet& host_edges, std::span<const Edge> required);

struct SubgRun {
  std::uint64_t edge_count = 0;
  std::vector<SampleOutcome> outcomes;
};

// Three-round streaming form of sample_subgraph, running independent attempts
// side by side. Round 1 draws every random edge, round 2 draws one wedge
// neighbor per cycle piece, round 3 queries degrees and all pairs among the
// collected vertices. keep(m) may cut the number of attempts once m is known
// after round 1; by default every attempt is kept.
Task<SubgRun> stream_subg_program(
    const Pattern& pattern, StreamMode mode, std::size_t attempts, std::uint64_t seed,
    std::function<std::size_t(std::uint64_t)> keep = {});

inline constexpr std::size_t kStreamSubgRounds = 3;

// Sketch failure exponent for turnstile sampling: max(5|V(H)|, log_n(2^h n (2m)^rho / eps)).
double turnstile_failure_exponent(const Pattern& pattern, std::size_t n, std::uint64_t m,
                                  double epsilon);

// Runs stream_subg_program over a stream. In turnstile mode the sketch
// exponent uses epsilon and the bound m <= n(n-1)/2.
SubgRun stream_subg(const Pattern& pattern, const EdgeStream& stream,
                                       StreamMode mode, std::size_t attempts, std::uint64_t seed,
                                       RunStats* stats = nullptr, double epsilon = 0.1);

struct CountingConfig {
  double epsilon = 0.1;
  double lower_bound = 1;  // L <= #H
  StreamMode mode = StreamMode::kInsertionOnly;
  // Overrides the computed repetition count.
  std::optional<std::uint64_t> repetitions;
  // Upper bound on m known before the first pass; defaults to n(n-1)/2.
  std::optional<std::uint64_t> edge_bound;
  // Abort instead of running more repetitions than this.
  std::uint64_t repetition_cap = 20'000'000;
};

// ceil(30 (2m)^rho ln n / (eps^2 L)).
std::uint64_t counting_repetitions(const Pattern& pattern, std::uint64_t m, std::size_t n,
                                   double epsilon, double lower_bound);

// (2m)^rho times the fraction of successful attempts, in exactly 3 passes.
Estimate count_subgraph(const Pattern& pattern, const EdgeStream& stream,
                        const CountingConfig& config, std::uint64_t seed);

// Without a lower bound: halves L from an upper bound on #H until the
// estimate reaches L. Each probe costs 3 passes.
Estimate count_subgraph_search(const Pattern& pattern, const EdgeStream& stream,
                               const CountingConfig& config, std::uint64_t seed);

}  // namespace streamcount
