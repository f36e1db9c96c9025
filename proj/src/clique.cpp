#include "streamcount/clique.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "streamcount/error.hpp"

namespace streamcount {

std::uint64_t CliqueSampleSet::weight(const OrderedClique& t) const {
  return directory.at(anchor(t));
}

std::uint64_t CliqueSampleSet::total_weight() const {
  std::uint64_t total = 0;
  for (const OrderedClique& t : members) total += weight(t);
  return total;
}

Vertex CliqueSampleSet::anchor(const OrderedClique& t) const {
  Vertex best = t.front();
  std::uint64_t best_degree = directory.at(best);
  for (Vertex v : t) {
    const std::uint64_t d = directory.at(v);
    if (d < best_degree || (d == best_degree && v < best)) {
      best = v;
      best_degree = d;
    }
  }
  return best;
}

namespace {

double factorial(std::size_t r) {
  double f = 1;
  for (std::size_t i = 2; i <= r; ++i) f *= static_cast<double>(i);
  return f;
}

double log_n(std::size_t n) { return std::log(static_cast<double>(std::max<std::size_t>(n, 2))); }

}  // namespace

double approx_beta(std::size_t r) { return 1.0 / (18.0 * static_cast<double>(r)); }
double approx_gamma(double epsilon, std::size_t r) { return epsilon / (2.0 * static_cast<double>(r)); }
double activity_beta(std::size_t r) { return 1.0 / (6.0 * static_cast<double>(r)); }
double activity_gamma(double epsilon, std::size_t r) {
  return epsilon / (8.0 * static_cast<double>(r) * factorial(r));
}

double CliqueParams::tau(std::size_t t) const {
  if (t >= r) return 1;
  const double rr = static_cast<double>(r);
  const double beta = activity_beta(r);
  const double gamma = activity_gamma(epsilon, r);
  return std::pow(rr, 4 * rr) / (std::pow(beta, rr) * gamma * gamma) *
         std::pow(static_cast<double>(lambda), static_cast<double>(r - t)) * scaling.tau;
}

double CliqueParams::tau_one(double lower_bound) const {
  const double rr = static_cast<double>(r);
  const double gamma = activity_gamma(epsilon, r);
  const double spread = std::min(std::pow(static_cast<double>(lambda), rr - 1),
                                 std::pow(lower_bound, (rr - 1) / rr));
  return std::pow(rr, 4 * rr) / (gamma * gamma) * spread * scaling.tau_one.value_or(scaling.tau);
}

std::size_t CliqueParams::activity_trials(std::size_t n) const {
  const double q = 12.0 * ((static_cast<double>(r) + 10) * log_n(n) - std::log(delta)) * scaling.trials;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(q)));
}

std::size_t CliqueParams::instances(std::size_t n) const {
  auto q = static_cast<std::size_t>(std::ceil(12.0 * log_n(n) * scaling.instances));
  q = std::max<std::size_t>(q, 1);
  return q % 2 == 0 ? q + 1 : q;
}

void CliqueParams::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidParams, what); };
  if (r < 2 || r > 10) fail("clique size must lie in [2, 10]");
  if (lambda < 1) fail("degeneracy bound must be positive");
  if (!(epsilon > 0 && epsilon < 1)) fail("epsilon must lie in (0, 1)");
  if (!(delta > 0 && delta <= 1)) fail("delta must lie in (0, 1]");
  if (!(scaling.tau > 0 && scaling.sample > 0 && scaling.activity_sample > 0 &&
        scaling.trials > 0 && scaling.instances > 0 &&
        scaling.tau_one.value_or(1) > 0)) {
    fail("scaling factors must be positive");
  }
}

double next_sample_size(double weight, double tau_next, double omega, double beta, double gamma,
                        double factor) {
  return std::ceil(weight * tau_next / omega * 3.0 * std::log(2.0 / beta) / (gamma * gamma) * factor);
}

double approx_abort_cap(const CliqueParams& p, std::size_t t, std::uint64_t m, double lower_bound) {
  const double beta = approx_beta(p.r);
  const double gamma = approx_gamma(p.epsilon, p.r);
  const double rf = factorial(p.r);
  return 4.0 * static_cast<double>(m) * std::pow(static_cast<double>(p.lambda), static_cast<double>(t) - 1) *
         p.tau(t + 1) / lower_bound * rf * rf * 3.0 * std::log(2.0 / beta) /
         (std::pow(beta, static_cast<double>(t)) * gamma * gamma) * p.scaling.sample;
}

double activity_abort_cap(const CliqueParams& p, std::size_t t, std::uint64_t m, double lower_bound) {
  const double beta = activity_beta(p.r);
  const double gamma = activity_gamma(p.epsilon, p.r);
  return 2.0 * static_cast<double>(m) * std::pow(static_cast<double>(p.lambda), static_cast<double>(t) - 1) *
         p.tau(t + 1) / lower_bound * 12.0 * std::log(1.0 / beta) /
         (std::pow(beta, static_cast<double>(p.r)) * gamma * gamma * gamma) * p.scaling.activity_sample;
}

bool lex_less(const OrderedClique& a, const OrderedClique& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t clique_pass_budget(std::size_t r) { return r < 3 ? 3 : 4 * r - 4; }

namespace {

// Draws members of R_t proportionally to their weight.
class WeightedPicker {
 public:
  explicit WeightedPicker(const CliqueSampleSet& set) {
    std::uint64_t total = 0;
    for (const OrderedClique& t : set.members) {
      total += set.weight(t);
      cumulative_.push_back(total);
    }
  }
  std::uint64_t total() const { return cumulative_.empty() ? 0 : cumulative_.back(); }
  std::size_t pick(Rng& rng) const {
    const std::uint64_t x = rng.below(total());
    return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), x) -
                                    cumulative_.begin());
  }

 private:
  std::vector<std::uint64_t> cumulative_;
};

bool contains(const OrderedClique& t, Vertex w) { return std::find(t.begin(), t.end(), w) != t.end(); }

struct Extension {
  std::size_t member;
  Vertex anchor;
  std::uint64_t index;  // 1-based neighbor index
};

// The extensions tried by one round of set sampling.
std::vector<Extension> plan_extensions(const CliqueSampleSet& sets, std::uint64_t samples, bool saturate,
                                       Rng& rng) {
  std::vector<Extension> out;
  if (saturate) {
    for (std::size_t i = 0; i < sets.members.size(); ++i) {
      const Vertex u = sets.anchor(sets.members[i]);
      for (std::uint64_t j = 1; j <= sets.directory.at(u); ++j) out.push_back({i, u, j});
    }
    return out;
  }
  const WeightedPicker picker(sets);
  if (picker.total() == 0) return out;
  out.reserve(samples);
  for (std::uint64_t l = 0; l < samples; ++l) {
    const std::size_t i = picker.pick(rng);
    const Vertex u = sets.anchor(sets.members[i]);
    out.push_back({i, u, 1 + rng.below(sets.directory.at(u))});
  }
  return out;
}

struct Assignment {
  std::map<OrderedClique, std::size_t> prefix_index;
  std::vector<OrderedClique> prefixes;
};

// Prefixes of every ordering of every distinct clique among the members,
// with lengths in [first, last].
Assignment collect_prefixes(const std::vector<OrderedClique>& members, std::size_t first, std::size_t last) {
  Assignment a;
  std::set<OrderedClique> cliques;
  for (OrderedClique c : members) {
    std::sort(c.begin(), c.end());
    cliques.insert(std::move(c));
  }
  for (OrderedClique c : cliques) {
    do {
      for (std::size_t t = first; t <= last && t <= c.size(); ++t) {
        OrderedClique prefix(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(t));
        if (a.prefix_index.emplace(prefix, a.prefixes.size()).second) a.prefixes.push_back(prefix);
      }
    } while (std::next_permutation(c.begin(), c.end()));
  }
  return a;
}

// Counts members that are the lexicographically first fully active ordering
// of their clique.
std::uint64_t count_assigned(const std::vector<OrderedClique>& members, const Assignment& a,
                             const std::vector<bool>& active, std::size_t first, std::size_t last) {
  std::map<OrderedClique, std::optional<OrderedClique>> chosen;
  std::uint64_t assigned = 0;
  for (const OrderedClique& member : members) {
    OrderedClique key = member;
    std::sort(key.begin(), key.end());
    auto it = chosen.find(key);
    if (it == chosen.end()) {
      std::optional<OrderedClique> best;
      OrderedClique c = key;
      do {
        bool full = true;
        for (std::size_t t = first; t <= last && t <= c.size() && full; ++t) {
          const OrderedClique prefix(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(t));
          full = active[a.prefix_index.at(prefix)];
        }
        if (full) {
          best = c;
          break;
        }
      } while (std::next_permutation(c.begin(), c.end()));
      it = chosen.emplace(std::move(key), std::move(best)).first;
    }
    if (it->second && *it->second == member) ++assigned;
  }
  return assigned;
}

template <class T>
Task<std::vector<T>> gather(std::vector<Task<T>> tasks) {
  std::vector<T> results = co_await when_all(std::move(tasks));
  co_return results;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t q = values.size();
  if (q == 0) return 0;
  return q % 2 == 1 ? values[q / 2] : (values[q / 2 - 1] + values[q / 2]) / 2;
}

}  // namespace

Task<CliqueSampleSet> stream_set(CliqueSampleSet sets, std::uint64_t samples, bool saturate,
                                 std::uint64_t seed) {
  Rng rng(seed);
  CliqueSampleSet next;
  next.level = sets.level + 1;
  const std::vector<Extension> trials = plan_extensions(sets, samples, saturate, rng);
  if (trials.empty()) co_return next;

  std::vector<Query> first;
  first.reserve(trials.size());
  for (const Extension& e : trials) first.push_back(Query::neighbor(e.anchor, e.index));
  const Reply neighbors = co_await ask(std::move(first));

  std::vector<Query> second;
  std::vector<std::size_t> start(trials.size(), SIZE_MAX);
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const Answer& ans = neighbors.answers[k];
    if (!ans.ok()) continue;
    const OrderedClique& t = sets.members[trials[k].member];
    const Vertex w = ans.vertex();
    if (contains(t, w)) continue;
    start[k] = second.size();
    for (Vertex v : t) second.push_back(Query::pair(v, w));
    second.push_back(Query::degree(w));
  }
  const Reply checks = co_await ask(std::move(second));

  for (std::size_t k = 0; k < trials.size(); ++k) {
    if (start[k] == SIZE_MAX) continue;
    const OrderedClique& t = sets.members[trials[k].member];
    bool clique = true;
    for (std::size_t j = 0; j < t.size(); ++j) clique = clique && checks.answers[start[k] + j].value != 0;
    if (!clique) continue;
    const Vertex w = neighbors.answers[k].vertex();
    OrderedClique grown = t;
    grown.push_back(w);
    for (Vertex v : t) next.directory.emplace(v, sets.directory.at(v));
    next.directory[w] = checks.answers[start[k] + t.size()].value;
    next.members.push_back(std::move(grown));
  }
  co_return next;
}

namespace {

// One trial of the activity check: warm-started sampling from R_i = {I}.
Task<bool> activity_trial(CliqueSampleSet base, CliqueParams params, std::uint64_t m, double lower_bound,
                          std::uint64_t seed) {
  const std::size_t r = params.r;
  const std::size_t i = base.level;
  const bool saturate = params.scaling.saturate;
  const double beta = activity_beta(r);
  const double gamma = activity_gamma(params.epsilon, r);
  const double tau_i = params.tau(i);

  CliqueSampleSet sets = std::move(base);
  double omega = (1 - params.epsilon / 2) * tau_i;
  double ratio = 1;
  double prev_weight = 0;
  double prev_size = 0;
  for (std::size_t t = i; t < r; ++t) {
    const auto weight = static_cast<double>(sets.total_weight());
    if (weight == 0) co_return true;  // no extension survives, so c_r(I) = 0
    if (t > i) omega = (1 - gamma) * omega * prev_size / prev_weight;
    const double size = saturate ? weight
                                 : next_sample_size(weight, params.tau(t + 1), omega, beta, gamma,
                                                    params.scaling.activity_sample);
    if (!saturate && size > activity_abort_cap(params, t, m, lower_bound)) co_return false;
    if (size > static_cast<double>(params.max_sample)) co_return false;
    ratio *= weight / size;
    Task<CliqueSampleSet> step =
        stream_set(std::move(sets), static_cast<std::uint64_t>(size), saturate, derive_seed(seed, t));
    sets = co_await std::move(step);
    prev_weight = weight;
    prev_size = size;
  }
  const double estimate = ratio * static_cast<double>(sets.members.size());
  co_return estimate <= tau_i / 4;
}

}  // namespace

Task<ActivityResult> stream_activity(OrderedClique prefix, CliqueParams params, std::size_t n,
                                     std::uint64_t m, double lower_bound, std::uint64_t seed) {
  ActivityResult result;
  if (prefix.size() >= params.r) {
    result.active = true;
    co_return result;
  }
  std::vector<Query> degrees;
  for (Vertex v : prefix) degrees.push_back(Query::degree(v));
  const Reply reply = co_await ask(std::move(degrees));

  CliqueSampleSet base;
  base.level = prefix.size();
  for (std::size_t j = 0; j < prefix.size(); ++j) base.directory[prefix[j]] = reply.answers[j].value;
  base.members.push_back(std::move(prefix));

  result.trials = params.scaling.saturate ? 1 : params.activity_trials(n);
  std::vector<Task<bool>> trials;
  trials.reserve(result.trials);
  for (std::size_t l = 0; l < result.trials; ++l) {
    trials.push_back(activity_trial(base, params, m, lower_bound, derive_seed(seed, l)));
  }
  const std::vector<bool> votes = co_await when_all(std::move(trials));
  result.votes = static_cast<std::size_t>(std::count(votes.begin(), votes.end(), true));
  result.active = 2 * result.votes >= result.trials;
  co_return result;
}

Task<InstanceResult> stream_approx_clique(CliqueParams params, std::size_t n, double lower_bound,
                                          std::uint64_t seed) {
  const std::size_t r = params.r;
  const bool saturate = params.scaling.saturate;
  const double beta = approx_beta(r);
  const double gamma = approx_gamma(params.epsilon, r);
  Rng rng(derive_seed(seed, 0));
  InstanceResult out;

  // Pass 1: the edge count.
  const Reply counted = co_await ask({});
  const std::uint64_t m = counted.edge_count;
  out.edge_count = m;
  if (m == 0) co_return out;

  // Pass 2: R_2 as ordered edges, each with probability 1/(2m) per draw.
  const double two_m = 2.0 * static_cast<double>(m);
  double omega = (1 - params.epsilon / 2) * lower_bound;
  double prev_weight = two_m;
  const double s2 = saturate ? two_m
                             : next_sample_size(two_m, params.tau(2), omega, beta, gamma,
                                                params.scaling.sample);
  if (s2 > static_cast<double>(params.max_sample)) {
    out.aborted = true;
    co_return out;
  }
  std::vector<Query> draws;
  if (saturate) {
    for (Vertex v = 0; v < n; ++v) {
      for (std::uint64_t j = 1; j < n; ++j) draws.push_back(Query::neighbor(v, j));
    }
  } else {
    draws.assign(static_cast<std::size_t>(s2), Query::random_edge());
  }
  const Reply drawn = co_await ask(draws);
  CliqueSampleSet sets;
  sets.level = 2;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const Answer& ans = drawn.answers[k];
    if (!ans.ok()) continue;
    if (saturate) {
      sets.members.push_back({draws[k].u, ans.vertex()});
    } else if (rng.below(2) == 0) {
      sets.members.push_back({ans.edge.u, ans.edge.v});
    } else {
      sets.members.push_back({ans.edge.v, ans.edge.u});
    }
  }
  out.sizes.push_back(static_cast<std::uint64_t>(s2));
  double ratio = two_m / s2;

  // Pass 3: the degree directory of R_2.
  std::vector<Vertex> seen;
  for (const OrderedClique& e : sets.members) seen.insert(seen.end(), e.begin(), e.end());
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  std::vector<Query> degree_plan;
  for (Vertex v : seen) degree_plan.push_back(Query::degree(v));
  const Reply degrees = co_await ask(std::move(degree_plan));
  for (std::size_t k = 0; k < seen.size(); ++k) sets.directory[seen[k]] = degrees.answers[k].value;

  // Passes 4 .. 2r - 1: R_3 .. R_r.
  double size = s2;
  for (std::size_t t = 2; t < r; ++t) {
    const auto weight = static_cast<double>(sets.total_weight());
    out.weights.push_back(static_cast<std::uint64_t>(weight));
    if (weight == 0) co_return out;
    omega = (1 - gamma) * omega / prev_weight * size;
    const double next = saturate ? weight
                                 : next_sample_size(weight, params.tau(t + 1), omega, beta, gamma,
                                                    params.scaling.sample);
    if ((!saturate && next > approx_abort_cap(params, t, m, lower_bound)) ||
        next > static_cast<double>(params.max_sample)) {
      out.aborted = true;
      co_return out;
    }
    ratio *= weight / next;
    Task<CliqueSampleSet> step =
        stream_set(std::move(sets), static_cast<std::uint64_t>(next), saturate, derive_seed(seed, t));
    sets = co_await std::move(step);
    out.sizes.push_back(static_cast<std::uint64_t>(next));
    prev_weight = weight;
    size = next;
  }
  if (sets.members.empty()) co_return out;

  // Remaining passes: activity of every prefix of every ordering, in parallel.
  const Assignment assignment = collect_prefixes(sets.members, 2, r - 1);
  std::vector<Task<ActivityResult>> checks;
  const std::uint64_t check_seed = derive_seed(seed, 0xac7);
  for (std::size_t k = 0; k < assignment.prefixes.size(); ++k) {
    checks.push_back(stream_activity(assignment.prefixes[k], params, n, m, lower_bound,
                                     derive_seed(check_seed, k)));
  }
  const std::vector<ActivityResult> results = co_await when_all(std::move(checks));
  std::vector<bool> active;
  for (const ActivityResult& a : results) active.push_back(a.active);
  out.assigned = count_assigned(sets.members, assignment, active, 2, r - 1);
  out.value = ratio * static_cast<double>(out.assigned);
  co_return out;
}

namespace {

double clique_upper_bound(std::size_t n, std::size_t r, std::size_t lambda) {
  auto choose = [](double a, std::size_t b) {
    double c = 1;
    for (std::size_t i = 0; i < b; ++i) c = c * (a - static_cast<double>(i)) / static_cast<double>(i + 1);
    return std::max(c, 0.0);
  };
  const double all = choose(static_cast<double>(n), r);
  const double sparse = static_cast<double>(n) * choose(static_cast<double>(lambda), r - 1);
  return std::max(1.0, std::min(all, sparse));
}

std::vector<double> search_ladder(std::optional<double> lower_bound, std::size_t n, const CliqueParams& p) {
  if (lower_bound) {
    if (!(*lower_bound > 0)) throw Error(ErrorCode::kInvalidParams, "lower bound must be positive");
    return {*lower_bound};
  }
  std::vector<double> ladder;
  for (double l = clique_upper_bound(n, p.r, p.lambda);; l /= 2) {
    if (l <= 1) {
      ladder.push_back(1);
      break;
    }
    ladder.push_back(l);
  }
  return ladder;
}

struct Summary {
  double value = 0;
  std::size_t aborted = 0;
  std::size_t count = 0;
};

Summary summarize(const std::vector<InstanceResult>& results, std::size_t from, std::size_t count) {
  Summary s;
  s.count = count;
  std::vector<double> values;
  for (std::size_t j = from; j < from + count; ++j) {
    values.push_back(results[j].aborted ? 0.0 : results[j].value);
    s.aborted += results[j].aborted ? 1 : 0;
  }
  s.value = median(std::move(values));
  return s;
}

}  // namespace

CliqueEstimate stream_count_clique(const EdgeStream& stream, const CliqueConfig& config,
                                   std::uint64_t seed) {
  const CliqueParams& params = config.params;
  params.validate();
  const std::size_t n = stream.vertex_count();
  const std::vector<double> ladder = search_ladder(config.lower_bound, n, params);
  const std::size_t q =
      config.instances.value_or(params.scaling.saturate ? 1 : params.instances(n));
  if (q == 0) throw Error(ErrorCode::kInvalidParams, "at least one instance is required");

  std::vector<Task<InstanceResult>> tasks;
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    for (std::size_t j = 0; j < q; ++j) {
      tasks.push_back(stream_approx_clique(params, n, ladder[l], derive_seed(seed, l * q + j)));
    }
  }
  TaskDriver<std::vector<InstanceResult>> driver(gather(std::move(tasks)), clique_pass_budget(params.r));
  const RunStats stats =
      run_rounds(driver, stream, PassOptions{StreamMode::kInsertionOnly}, derive_seed(seed, 0x5eed));
  const std::vector<InstanceResult> results = driver.result();

  CliqueEstimate out;
  std::size_t pick = ladder.size() - 1;
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    const Summary s = summarize(results, l * q, q);
    if (s.aborted < q && s.value >= ladder[l]) {
      pick = l;
      break;
    }
  }
  const Summary s = summarize(results, pick * q, q);
  out.lower_bound = ladder[pick];
  out.aborted_instances = s.aborted;
  out.estimate.value = s.value;
  out.estimate.aborted = s.aborted == q;
  out.estimate.passes = stats.pass_count();
  out.estimate.queries = stats.total_queries();
  out.estimate.bits_tracked = stats.max_bits();
  out.estimate.per_pass = stats.passes;
  out.estimate.edge_count = results.empty() ? 0 : results.front().edge_count;
  out.estimate.repetitions = q;
  out.estimate.successes = q - s.aborted;
  return out;
}

// ---------------------------------------------------------------------------
// Query-model variant, seeded with a uniform sample of vertices.

namespace {

class QueryCounter {
 public:
  QueryCounter(QueryOracle& oracle, const CliqueParams& params, double lower_bound, std::uint64_t m)
      : oracle_(oracle), p_(params), lower_bound_(lower_bound), m_(m), n_(oracle.vertex_count()) {}

  double tau(std::size_t t) const { return t == 1 ? p_.tau_one(lower_bound_) : p_.tau(t); }

  InstanceResult run(Rng& rng) {
    active_.clear();
    InstanceResult out;
    out.edge_count = m_;
    const bool saturate = p_.scaling.saturate;
    const double beta = approx_beta(p_.r);
    const double gamma = approx_gamma(p_.epsilon, p_.r);
    const auto n = static_cast<double>(n_);
    if (n_ == 0) return out;

    double omega = (1 - p_.epsilon / 2) * lower_bound_;
    double prev_weight = n;
    double size = saturate ? n : next_sample_size(n, tau(1), omega, beta, gamma, p_.scaling.sample);
    if (size > static_cast<double>(p_.max_sample)) {
      out.aborted = true;
      return out;
    }
    CliqueSampleSet sets;
    sets.level = 1;
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(size); ++k) {
      const auto v = static_cast<Vertex>(saturate ? k : rng.below(n_));
      sets.members.push_back({v});
      if (!sets.directory.count(v)) sets.directory[v] = oracle_.degree(v);
    }
    out.sizes.push_back(static_cast<std::uint64_t>(size));
    double ratio = n / size;

    for (std::size_t t = 1; t < p_.r; ++t) {
      const auto weight = static_cast<double>(sets.total_weight());
      out.weights.push_back(static_cast<std::uint64_t>(weight));
      if (weight == 0) return out;
      omega = (1 - gamma) * omega / prev_weight * size;
      const double next = saturate ? weight
                                   : next_sample_size(weight, tau(t + 1), omega, beta, gamma,
                                                      p_.scaling.sample);
      if ((!saturate && next > approx_abort_cap(p_, t, m_, lower_bound_)) ||
          next > static_cast<double>(p_.max_sample)) {
        out.aborted = true;
        return out;
      }
      ratio *= weight / next;
      sets = sample_a_set(sets, static_cast<std::uint64_t>(next), rng);
      out.sizes.push_back(static_cast<std::uint64_t>(next));
      prev_weight = weight;
      size = next;
    }
    if (sets.members.empty()) return out;

    const Assignment assignment = collect_prefixes(sets.members, 1, p_.r - 1);
    std::vector<bool> active;
    for (const OrderedClique& prefix : assignment.prefixes) active.push_back(is_active(prefix, rng));
    out.assigned = count_assigned(sets.members, assignment, active, 1, p_.r - 1);
    out.value = ratio * static_cast<double>(out.assigned);
    return out;
  }

 private:
  CliqueSampleSet sample_a_set(const CliqueSampleSet& sets, std::uint64_t samples, Rng& rng) {
    CliqueSampleSet next;
    next.level = sets.level + 1;
    for (const Extension& e : plan_extensions(sets, samples, p_.scaling.saturate, rng)) {
      const OrderedClique& t = sets.members[e.member];
      const Vertex w = oracle_.neighbor(e.anchor, e.index);
      if (contains(t, w)) continue;
      bool clique = true;
      for (Vertex v : t) clique = clique && oracle_.pair(v, w);
      if (!clique) continue;
      for (Vertex v : t) next.directory.emplace(v, sets.directory.at(v));
      if (!next.directory.count(w)) next.directory[w] = oracle_.degree(w);
      OrderedClique grown = t;
      grown.push_back(w);
      next.members.push_back(std::move(grown));
    }
    return next;
  }

  bool is_active(const OrderedClique& prefix, Rng& rng) {
    if (auto it = active_.find(prefix); it != active_.end()) return it->second;
    const std::size_t i = prefix.size();
    const double beta = activity_beta(p_.r);
    const double gamma = activity_gamma(p_.epsilon, p_.r);
    const bool saturate = p_.scaling.saturate;
    CliqueSampleSet base;
    base.level = i;
    for (Vertex v : prefix) base.directory[v] = oracle_.degree(v);
    base.members.push_back(prefix);

    const std::size_t q = saturate ? 1 : p_.activity_trials(n_);
    std::size_t votes = 0;
    for (std::size_t l = 0; l < q; ++l) {
      CliqueSampleSet sets = base;
      double omega = (1 - p_.epsilon / 2) * tau(i);
      double ratio = 1;
      double prev_weight = 0;
      double prev_size = 0;
      bool capped = false;
      for (std::size_t t = i; t < p_.r && !sets.members.empty(); ++t) {
        const auto weight = static_cast<double>(sets.total_weight());
        if (t > i) omega = (1 - gamma) * omega * prev_size / prev_weight;
        const double size = saturate ? weight
                                     : next_sample_size(weight, tau(t + 1), omega, beta, gamma,
                                                        p_.scaling.activity_sample);
        if ((!saturate && size > activity_abort_cap(p_, t, m_, lower_bound_)) ||
            size > static_cast<double>(p_.max_sample)) {
          capped = true;
          break;
        }
        ratio *= weight / size;
        sets = sample_a_set(sets, static_cast<std::uint64_t>(size), rng);
        prev_weight = weight;
        prev_size = size;
      }
      if (capped) continue;
      votes += ratio * static_cast<double>(sets.members.size()) <= tau(i) / 4 ? 1 : 0;
    }
    const bool active = 2 * votes >= q;
    active_.emplace(prefix, active);
    return active;
  }

  QueryOracle& oracle_;
  const CliqueParams& p_;
  double lower_bound_;
  std::uint64_t m_;
  std::size_t n_;
  std::map<OrderedClique, bool> active_;
};

}  // namespace

CliqueEstimate query_model_count_clique(QueryOracle& oracle, const CliqueParams& params,
                                        double lower_bound, std::uint64_t m, std::uint64_t seed,
                                        std::optional<std::size_t> instances) {
  params.validate();
  if (!(lower_bound > 0)) throw Error(ErrorCode::kInvalidParams, "lower bound must be positive");
  const std::size_t n = oracle.vertex_count();
  const std::size_t q = instances.value_or(params.scaling.saturate ? 1 : params.instances(n));
  if (q == 0) throw Error(ErrorCode::kInvalidParams, "at least one instance is required");
  const OracleStats before = oracle.stats();

  QueryCounter counter(oracle, params, lower_bound, m);
  std::vector<InstanceResult> results;
  for (std::size_t j = 0; j < q; ++j) {
    Rng rng(derive_seed(seed, j));
    results.push_back(counter.run(rng));
  }
  const Summary s = summarize(results, 0, q);
  CliqueEstimate out;
  out.lower_bound = lower_bound;
  out.aborted_instances = s.aborted;
  out.estimate.value = s.value;
  out.estimate.aborted = s.aborted == q;
  out.estimate.edge_count = m;
  out.estimate.repetitions = q;
  out.estimate.successes = q - s.aborted;
  const OracleStats& after = oracle.stats();
  out.estimate.queries[static_cast<std::size_t>(QueryKind::kDegree)] = after.degree - before.degree;
  out.estimate.queries[static_cast<std::size_t>(QueryKind::kNeighbor)] = after.neighbor - before.neighbor;
  out.estimate.queries[static_cast<std::size_t>(QueryKind::kPair)] = after.pair - before.pair;
  return out;
}

}  // namespace streamcount
