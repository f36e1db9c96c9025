#pragma once

// Clique counting in low-degeneracy graphs: a multi-pass insertion-only
// streaming counter and its vertex-seeded query-model counterpart.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "streamcount/estimate.hpp"
#include "streamcount/graph.hpp"
#include "streamcount/oracle.hpp"
#include "streamcount/random.hpp"
#include "streamcount/rounds.hpp"
#include "streamcount/stream.hpp"

namespace streamcount {

using OrderedClique = std::vector<Vertex>;

// A multiset R_t of ordered t-cliques with the degrees of their vertices.
struct CliqueSampleSet {
  std::size_t level = 0;
  std::vector<OrderedClique> members;
  std::unordered_map<Vertex, std::uint64_t> directory;

  // d(T): degree of the minimum-degree vertex of T.
  std::uint64_t weight(const OrderedClique& t) const;
  // d(R_t): sum of weights of all members.
  std::uint64_t total_weight() const;
  // Minimum-degree vertex of T, ties to the smallest id.
  Vertex anchor(const OrderedClique& t) const;
};

// Shrinks the constants so that desk-scale inputs are feasible. Each factor
// multiplies the quantity named; 1 everywhere reproduces the literal constants.
struct CliqueScaling {
  double tau = 1;              // thresholds tau_t for t < r (and tau_1)
  double sample = 1;           // sample sizes of the counting instances (and their abort caps)
  double activity_sample = 1;  // sample sizes inside activity checks (and their abort caps)
  double trials = 1;           // trials per activity check
  double instances = 1;        // median instances
  // Replace every random sample by full enumeration with s_{t+1} = d(R_t).
  // The estimate is then the exact number of assigned cliques.
  bool saturate = false;
  // Factor on tau_1 of the vertex-seeded variant; defaults to tau.
  std::optional<double> tau_one;

  static CliqueScaling uniform(double scale) { return {scale, scale, scale, scale, scale, false, std::nullopt}; }
};

struct CliqueParams {
  std::size_t r = 3;
  std::size_t lambda = 1;  // degeneracy bound
  double epsilon = 0.1;
  double delta = 1;        // failure parameter of the activity check
  CliqueScaling scaling;
  std::uint64_t max_sample = 5'000'000;  // abort beyond this many samples in any single set

  // tau_t = r^{4r} / (beta^r gamma^2) * lambda^{r-t} * scaling.tau for 2 <= t < r,
  // tau_r = 1, with beta = 1/(6r) and gamma = eps/(8 r r!).
  double tau(std::size_t t) const;
  // Query-model tau_1 = r^{4r} / gamma^2 * min(lambda^{r-1}, L^{(r-1)/r}) * scaling.tau_one.
  double tau_one(double lower_bound) const;
  // ceil(12 ln(n^{r+10} / delta) * scaling.trials), at least 1.
  std::size_t activity_trials(std::size_t n) const;
  // ceil(12 ln n * scaling.instances), made odd.
  std::size_t instances(std::size_t n) const;

  void validate() const;
};

// Literal constants of the counting instances: beta = 1/(18 r), gamma = eps/(2 r).
double approx_beta(std::size_t r);
double approx_gamma(double epsilon, std::size_t r);
// Literal constants of the activity checks and of tau: beta = 1/(6 r), gamma = eps/(8 r r!).
double activity_beta(std::size_t r);
double activity_gamma(double epsilon, std::size_t r);

// ceil(d(R_t) tau_{t+1} / omega_t * 3 ln(2/beta) / gamma^2 * factor).
double next_sample_size(double weight, double tau_next, double omega, double beta, double gamma,
                        double factor);
// 4 m lambda^{t-1} tau_{t+1} / L * (r!)^2 3 ln(2/beta) / (beta^t gamma^2) * factor.
double approx_abort_cap(const CliqueParams& p, std::size_t t, std::uint64_t m, double lower_bound);
// 2 m lambda^{t-1} tau_{t+1} / L * 12 ln(1/beta) / (beta^r gamma^3) * factor.
double activity_abort_cap(const CliqueParams& p, std::size_t t, std::uint64_t m, double lower_bound);

// Lexicographic order on ordered cliques by vertex id.
bool lex_less(const OrderedClique& a, const OrderedClique& b);

// Streaming building blocks. All are coroutine programs run by run_rounds.

// Two passes: draws s ordered (t+1)-clique candidates from R_t, each extension
// (T, w) with probability 1/d(R_t) per trial, and keeps the cliques.
// In saturated mode every extension is taken once and s is ignored.
Task<CliqueSampleSet> stream_set(CliqueSampleSet sets, std::uint64_t samples, bool saturate,
                                 std::uint64_t seed);

struct ActivityResult {
  bool active = false;
  std::size_t trials = 0;
  std::size_t votes = 0;  // trials with c_r(I) <= tau_i / 4
};

// 1 + 2(r - i) passes. Level-r prefixes are active without any pass.
Task<ActivityResult> stream_activity(OrderedClique prefix, CliqueParams params,
                                     std::size_t n, std::uint64_t m, double lower_bound,
                                     std::uint64_t seed);

struct InstanceResult {
  double value = 0;
  bool aborted = false;
  std::vector<std::uint64_t> sizes;    // s_2..s_r
  std::vector<std::uint64_t> weights;  // d(R_2)..d(R_{r-1})
  std::uint64_t assigned = 0;          // members of R_r that are assigned
  std::uint64_t edge_count = 0;
};

// One counting instance: 4r - 4 passes.
Task<InstanceResult> stream_approx_clique(CliqueParams params, std::size_t n, double lower_bound,
                                          std::uint64_t seed);

// Pass budget claimed for the streaming counter.
std::size_t clique_pass_budget(std::size_t r);

struct CliqueConfig {
  CliqueParams params;
  // Known lower bound on #K_r. Without one, a geometric search over
  // L = U, U/2, ..., 1 runs in parallel with the same passes.
  std::optional<double> lower_bound;
  // Overrides the number of median instances.
  std::optional<std::size_t> instances;
};

struct CliqueEstimate {
  Estimate estimate;
  double lower_bound = 0;  // L behind the reported value
  std::size_t aborted_instances = 0;
};

// Median of independent instances. Aborted instances count as 0; if every
// instance aborts the result is flagged aborted. Insertion-only streams only.
CliqueEstimate stream_count_clique(const EdgeStream& stream, const CliqueConfig& config,
                                   std::uint64_t seed);

// Vertex-seeded counter over a general-graph oracle (degree, neighbor and pair
// queries only). L is required; m is the edge count handed to the algorithm.
CliqueEstimate query_model_count_clique(QueryOracle& oracle, const CliqueParams& params,
                                        double lower_bound, std::uint64_t m, std::uint64_t seed,
                                        std::optional<std::size_t> instances = std::nullopt);

}  // namespace streamcount
