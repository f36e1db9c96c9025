#include "streamcount/subgraph_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "streamcount/error.hpp"

namespace streamcount {

Copy make_copy(std::vector<Edge> edges) {
  Copy copy;
  for (Edge& e : edges) {
    e = make_edge(e.u, e.v);
    copy.vertices.push_back(e.u);
    copy.vertices.push_back(e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(copy.vertices.begin(), copy.vertices.end());
  copy.vertices.erase(std::unique(copy.vertices.begin(), copy.vertices.end()), copy.vertices.end());
  copy.edges = std::move(edges);
  return copy;
}

std::vector<Copy> copies_spanning(const Graph& pattern, std::span<const Vertex> vertices,
                                  const EdgeSet& host_edges, std::span<const Edge> required) {
  const std::size_t h = pattern.vertex_count();
  if (vertices.size() != h) return {};
  // Map pattern vertices in order of decreasing degree for early pruning.
  std::vector<Vertex> order(h);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return pattern.degree(a) > pattern.degree(b); });
  std::vector<Vertex> image(h);
  std::vector<bool> used(h, false);
  std::set<Copy> found;

  auto assign = [&](auto&& self, std::size_t depth) -> void {
    if (depth == h) {
      std::vector<Edge> edges;
      for (const Edge& e : pattern.edges()) edges.push_back(make_edge(image[e.u], image[e.v]));
      Copy copy = make_copy(std::move(edges));
      for (const Edge& r : required) {
        if (!std::binary_search(copy.edges.begin(), copy.edges.end(), make_edge(r.u, r.v))) return;
      }
      found.insert(std::move(copy));
      return;
    }
    const Vertex x = order[depth];
    for (std::size_t slot = 0; slot < h; ++slot) {
      if (used[slot]) continue;
      const Vertex target = vertices[slot];
      bool fits = true;
      for (Vertex y : pattern.neighbors(x)) {
        const auto pos = std::find(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(depth), y);
        if (pos != order.begin() + static_cast<std::ptrdiff_t>(depth) &&
            !host_edges.contains(target, image[y])) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      used[slot] = true;
      image[x] = target;
      self(self, depth + 1);
      used[slot] = false;
    }
  };
  assign(assign, 0);
  return {found.begin(), found.end()};
}

namespace {

double root_of(std::uint64_t two_m) { return std::sqrt(static_cast<double>(two_m)); }

bool low_degree(std::uint64_t degree, std::uint64_t two_m) {
  return static_cast<unsigned __int128>(degree) * degree <= two_m;
}

// Directed edge from a uniform edge and a fair orientation coin.
Edge orient(const Edge& e, Rng& rng) { return rng.below(2) == 0 ? Edge{e.u, e.v} : Edge{e.v, e.u}; }

std::optional<Edge> directed_edge(QueryOracle& oracle, Rng& rng) {
  const auto e = oracle.random_edge();
  if (!e) return std::nullopt;
  return orient(*e, rng);
}

// Edges a piece sequence must contain: the cycle, or all center-petal pairs.
void piece_edges(const std::vector<Vertex>& seq, bool cycle, std::vector<Edge>& out) {
  if (cycle) {
    for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(make_edge(seq[i], seq[(i + 1) % seq.size()]));
  } else {
    for (std::size_t i = 1; i < seq.size(); ++i) out.push_back(make_edge(seq[0], seq[i]));
  }
}

// Shared final step: the pieces must be disjoint, span a copy of H, and
// survive the 1/f coin.
SampleOutcome finish(const Pattern& pattern, const std::vector<std::vector<Vertex>>& pieces,
                     const EdgeSet& host_edges, Rng& rng) {
  SampleOutcome outcome;
  outcome.checks |= kPiecesSampled;
  std::vector<Vertex> vertices;
  std::vector<Edge> required;
  const auto& kinds = pattern.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    vertices.insert(vertices.end(), pieces[i].begin(), pieces[i].end());
    piece_edges(pieces[i], kinds[i].kind == PieceKind::kOddCycle, required);
  }
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end() ||
      vertices.size() != pattern.vertex_count()) {
    return outcome;
  }
  outcome.checks |= kDisjoint;
  std::vector<Copy> candidates = copies_spanning(pattern.graph(), vertices, host_edges, required);
  if (candidates.empty()) return outcome;
  outcome.checks |= kCandidate;
  const std::uint64_t f = pattern.decomposition_count();
  if (candidates.size() > f) {
    throw std::logic_error("more spanned copies than decompositions");
  }
  const std::uint64_t slot = rng.below(f);
  if (slot < candidates.size()) {
    outcome.checks |= kAccepted;
    outcome.copy = std::move(candidates[slot]);
  }
  return outcome;
}

std::size_t cycle_half(std::size_t length) {
  if (length < 3 || length % 2 == 0) {
    throw Error(ErrorCode::kInvalidParams, "cycle length must be odd and at least 3");
  }
  return (length - 1) / 2;
}

}  // namespace

std::optional<Vertex> sample_wedge(QueryOracle& oracle, Vertex u, Rng& rng) {
  const std::uint64_t two_m = 2 * oracle.edge_count();
  if (two_m == 0) return std::nullopt;
  const double root = root_of(two_m);
  const std::uint64_t d = oracle.degree(u);
  if (low_degree(d, two_m)) {
    // A grid of floor(sqrt(2m)) slots plus a coin of floor(sqrt(2m)) / sqrt(2m)
    // gives each neighbor probability exactly 1/sqrt(2m).
    const std::uint64_t grid = isqrt(two_m);
    std::optional<Vertex> w;
    if (oracle.model() == OracleModel::kExact) {
      const std::uint64_t j = 1 + rng.below(grid);
      if (j > d) return std::nullopt;
      w = oracle.neighbor(u, j);
    } else {
      w = oracle.random_neighbor(u);
      if (!w || rng.below(grid) >= d) return std::nullopt;
    }
    if (!rng.bernoulli(static_cast<double>(grid) / root)) return std::nullopt;
    return w;
  }
  const auto e = directed_edge(oracle, rng);
  if (!e) return std::nullopt;
  const Vertex w = e->v;
  const double accept = root / static_cast<double>(oracle.degree(w));
  if (accept < 1.0 && !rng.bernoulli(accept)) return std::nullopt;
  return w;
}

std::optional<std::vector<Vertex>> sample_odd_cycle(QueryOracle& oracle, std::size_t length, Rng& rng) {
  const std::size_t k = cycle_half(length);
  if (oracle.edge_count() == 0) return std::nullopt;
  std::vector<Vertex> seq;
  EdgeSet known;
  for (std::size_t t = 0; t < k; ++t) {
    const auto e = directed_edge(oracle, rng);
    if (!e) return std::nullopt;
    seq.push_back(e->u);
    seq.push_back(e->v);
    known.insert(e->u, e->v);
  }
  const auto w = sample_wedge(oracle, seq[0], rng);
  if (!w) return std::nullopt;
  seq.push_back(*w);

  std::unordered_map<Vertex, std::size_t> degrees;
  for (Vertex x : seq) degrees.emplace(x, oracle.degree(x));
  for (std::size_t i = 1; i < seq.size(); i += 2) {
    const Vertex a = seq[i];
    const Vertex b = seq[(i + 1) % seq.size()];
    if (a != b && oracle.pair(a, b)) known.insert(a, b);
  }
  if (oracle.pair(seq.back(), seq.front())) known.insert(seq.back(), seq.front());
  if (!is_canonical_cycle(seq, known, VertexOrder(std::move(degrees)))) return std::nullopt;
  return seq;
}

std::optional<std::vector<Vertex>> sample_star(QueryOracle& oracle, std::size_t petals, Rng& rng) {
  if (petals == 0) throw Error(ErrorCode::kInvalidParams, "a star needs at least one petal");
  if (oracle.edge_count() == 0) return std::nullopt;
  std::vector<Vertex> seq;
  EdgeSet known;
  for (std::size_t t = 0; t < petals; ++t) {
    const auto e = directed_edge(oracle, rng);
    if (!e) return std::nullopt;
    if (t == 0) {
      seq.push_back(e->u);
    } else if (e->u != seq[0]) {
      return std::nullopt;
    }
    seq.push_back(e->v);
    known.insert(e->u, e->v);
  }
  std::unordered_map<Vertex, std::size_t> degrees;
  for (std::size_t i = 1; i < seq.size(); ++i) degrees.emplace(seq[i], oracle.degree(seq[i]));
  if (!is_canonical_star(seq, known, VertexOrder(std::move(degrees)))) return std::nullopt;
  return seq;
}

SampleOutcome sample_subgraph(QueryOracle& oracle, const Pattern& pattern, Rng& rng) {
  std::vector<std::vector<Vertex>> pieces;
  for (const Piece& piece : pattern.pieces()) {
    auto seq = piece.kind == PieceKind::kOddCycle ? sample_odd_cycle(oracle, piece.size(), rng)
                                                  : sample_star(oracle, piece.size(), rng);
    if (!seq) return {};
    pieces.push_back(std::move(*seq));
  }
  std::vector<Vertex> vertices;
  for (const auto& seq : pieces) vertices.insert(vertices.end(), seq.begin(), seq.end());
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  EdgeSet host;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (oracle.pair(vertices[i], vertices[j])) host.insert(vertices[i], vertices[j]);
    }
  }
  return finish(pattern, pieces, host, rng);
}

std::optional<Copy> sample_subgraph_uniformly(QueryOracle& oracle, const Pattern& pattern,
                                              double copies_lower_bound, Rng& rng) {
  if (!(copies_lower_bound > 0)) throw Error(ErrorCode::kInvalidParams, "lower bound must be positive");
  const double scale = std::pow(2.0 * static_cast<double>(oracle.edge_count()), to_double(pattern.rho()));
  const auto attempts = static_cast<std::uint64_t>(std::ceil(10.0 * scale / copies_lower_bound));
  for (std::uint64_t i = 0; i < attempts; ++i) {
    SampleOutcome outcome = sample_subgraph(oracle, pattern, rng);
    if (outcome.copy) return std::move(outcome.copy);
  }
  return std::nullopt;
}

namespace {

struct PieceLayout {
  bool cycle = false;
  std::size_t size = 0;    // cycle length or petals
  std::size_t offset = 0;  // first random edge of this piece within an attempt
  std::size_t edges = 0;   // random edges drawn for this piece
  std::size_t wedge = 0;   // index among cycle pieces
};

struct Layout {
  std::vector<PieceLayout> pieces;
  std::size_t edges_per_attempt = 0;
  std::size_t cycles = 0;
};

Layout layout_of(const Pattern& pattern) {
  Layout layout;
  for (const Piece& piece : pattern.pieces()) {
    PieceLayout p;
    p.cycle = piece.kind == PieceKind::kOddCycle;
    p.size = piece.size();
    p.offset = layout.edges_per_attempt;
    // A cycle uses k path edges plus one degree-proportional endpoint.
    p.edges = p.cycle ? cycle_half(p.size) + 1 : p.size;
    p.wedge = p.cycle ? layout.cycles++ : 0;
    layout.edges_per_attempt += p.edges;
    layout.pieces.push_back(p);
  }
  return layout;
}

struct Attempt {
  bool alive = true;
  Rng rng;
  std::vector<Edge> edges;  // oriented, edges_per_attempt of them
  std::vector<std::optional<Vertex>> wedge;
  std::vector<Vertex> vertices;  // sorted distinct vertices known after round 2
};

SampleOutcome evaluate(const Pattern& pattern, const Layout& layout, StreamMode mode,
                       std::uint64_t two_m, Attempt& a,
                       const std::unordered_map<Vertex, std::size_t>& degrees, const EdgeSet& host) {
  const double root = root_of(two_m);
  const std::uint64_t grid = isqrt(two_m);
  const VertexOrder order(degrees);
  std::vector<std::vector<Vertex>> pieces;
  for (const PieceLayout& p : layout.pieces) {
    std::vector<Vertex> seq;
    if (p.cycle) {
      const std::size_t k = cycle_half(p.size);
      for (std::size_t t = 1; t <= k; ++t) {
        seq.push_back(a.edges[p.offset + t].u);
        seq.push_back(a.edges[p.offset + t].v);
      }
      const Vertex u1 = seq[0];
      const std::uint64_t d = degrees.at(u1);
      std::optional<Vertex> w;
      if (low_degree(d, two_m)) {
        w = a.wedge[p.wedge];
        if (!w) return {};
        if (mode == StreamMode::kTurnstile && a.rng.below(grid) >= d) return {};
        if (!a.rng.bernoulli(static_cast<double>(grid) / root)) return {};
      } else {
        w = a.edges[p.offset].v;
        const double accept = root / static_cast<double>(degrees.at(*w));
        if (accept < 1.0 && !a.rng.bernoulli(accept)) return {};
      }
      seq.push_back(*w);
      if (!is_canonical_cycle(seq, host, order)) return {};
    } else {
      seq.push_back(a.edges[p.offset].u);
      for (std::size_t t = 0; t < p.size; ++t) {
        const Edge& e = a.edges[p.offset + t];
        if (e.u != seq[0]) return {};
        seq.push_back(e.v);
      }
      if (!is_canonical_star(seq, host, order)) return {};
    }
    pieces.push_back(std::move(seq));
  }
  return finish(pattern, pieces, host, a.rng);
}

}  // namespace

Task<SubgRun> stream_subg_program(const Pattern& pattern, StreamMode mode, std::size_t attempts,
                                  std::uint64_t seed,
                                  std::function<std::size_t(std::uint64_t)> keep) {
  const Layout layout = layout_of(pattern);
  const std::size_t per = layout.edges_per_attempt;

  // Round 1: every random edge of every attempt.
  Reply first = co_await ask(std::vector<Query>(attempts * per, Query::random_edge()));
  SubgRun run;
  run.edge_count = first.edge_count;
  const std::uint64_t two_m = 2 * first.edge_count;
  const std::size_t kept = keep ? std::min(attempts, keep(first.edge_count)) : attempts;
  run.outcomes.resize(kept);

  std::vector<Attempt> state(kept);
  for (std::size_t i = 0; i < kept; ++i) {
    Attempt& a = state[i];
    a.rng = Rng(derive_seed(seed, i));
    a.edges.reserve(per);
    for (std::size_t j = 0; j < per; ++j) {
      const Answer& ans = first.answers[i * per + j];
      if (!ans.ok()) {
        a.alive = false;
        break;
      }
      a.edges.push_back(orient(ans.edge, a.rng));
    }
  }
  first = Reply{};

  // Round 2: one wedge neighbor of u1 per cycle piece.
  std::vector<Query> second_plan;
  for (Attempt& a : state) {
    if (!a.alive || layout.cycles == 0) continue;
    for (const PieceLayout& p : layout.pieces) {
      if (!p.cycle) continue;
      const Vertex u1 = a.edges[p.offset + 1].u;
      if (mode == StreamMode::kInsertionOnly) {
        second_plan.push_back(Query::neighbor(u1, 1 + a.rng.below(isqrt(two_m))));
      } else {
        second_plan.push_back(Query::random_neighbor(u1));
      }
    }
  }
  const Reply second = co_await ask(std::move(second_plan));
  std::size_t cursor = 0;
  for (Attempt& a : state) {
    if (!a.alive) continue;
    a.wedge.assign(layout.cycles, std::nullopt);
    for (std::size_t c = 0; c < layout.cycles; ++c) {
      const Answer& ans = second.answers[cursor++];
      if (ans.ok()) a.wedge[c] = ans.vertex();
    }
    for (const Edge& e : a.edges) {
      a.vertices.push_back(e.u);
      a.vertices.push_back(e.v);
    }
    for (const auto& w : a.wedge) {
      if (w) a.vertices.push_back(*w);
    }
    std::sort(a.vertices.begin(), a.vertices.end());
    a.vertices.erase(std::unique(a.vertices.begin(), a.vertices.end()), a.vertices.end());
  }

  // Round 3: degrees and adjacency among each attempt's vertices.
  std::vector<Query> third_plan;
  for (const Attempt& a : state) {
    if (!a.alive) continue;
    for (Vertex v : a.vertices) third_plan.push_back(Query::degree(v));
    for (std::size_t x = 0; x < a.vertices.size(); ++x) {
      for (std::size_t y = x + 1; y < a.vertices.size(); ++y) {
        third_plan.push_back(Query::pair(a.vertices[x], a.vertices[y]));
      }
    }
  }
  const Reply third = co_await ask(std::move(third_plan));
  cursor = 0;
  for (std::size_t i = 0; i < kept; ++i) {
    Attempt& a = state[i];
    if (!a.alive) continue;
    std::unordered_map<Vertex, std::size_t> degrees;
    for (Vertex v : a.vertices) degrees.emplace(v, third.answers[cursor++].value);
    EdgeSet host;
    for (std::size_t x = 0; x < a.vertices.size(); ++x) {
      for (std::size_t y = x + 1; y < a.vertices.size(); ++y) {
        if (third.answers[cursor++].value != 0) host.insert(a.vertices[x], a.vertices[y]);
      }
    }
    run.outcomes[i] = evaluate(pattern, layout, mode, two_m, a, degrees, host);
  }
  co_return run;
}

double turnstile_failure_exponent(const Pattern& pattern, std::size_t n, std::uint64_t m,
                                  double epsilon) {
  const double h = static_cast<double>(pattern.vertex_count());
  const double log_n = std::log(std::max<double>(static_cast<double>(n), 2.0));
  const double rho = to_double(pattern.rho());
  const double needed = (h * std::log(2.0) + log_n +
                         rho * std::log(std::max(2.0 * static_cast<double>(m), 1.0)) -
                         std::log(epsilon)) / log_n;
  return std::max(5.0 * h, std::ceil(needed));
}

SubgRun stream_subg(const Pattern& pattern, const EdgeStream& stream, StreamMode mode,
                    std::size_t attempts, std::uint64_t seed, RunStats* stats, double epsilon) {
  const std::size_t n = stream.vertex_count();
  const std::uint64_t m_bound = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  PassOptions options{mode, turnstile_failure_exponent(pattern, n, m_bound, epsilon)};
  TaskDriver<SubgRun> driver(stream_subg_program(pattern, mode, attempts, derive_seed(seed, 1)),
                             kStreamSubgRounds);
  RunStats local = run_rounds(driver, stream, options, derive_seed(seed, 2));
  if (stats) *stats = std::move(local);
  return driver.result();
}

std::uint64_t counting_repetitions(const Pattern& pattern, std::uint64_t m, std::size_t n,
                                   double epsilon, double lower_bound) {
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::kInvalidParams, "epsilon must lie in (0, 1)");
  if (!(lower_bound > 0)) throw Error(ErrorCode::kInvalidParams, "lower bound must be positive");
  const double scale = std::pow(2.0 * static_cast<double>(m), to_double(pattern.rho()));
  const double log_n = std::log(std::max<double>(static_cast<double>(n), 2.0));
  const double k = std::ceil(30.0 * scale * log_n / (epsilon * epsilon * lower_bound));
  if (k >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

Estimate count_subgraph(const Pattern& pattern, const EdgeStream& stream,
                        const CountingConfig& config, std::uint64_t seed) {
  const std::size_t n = stream.vertex_count();
  const std::uint64_t m_bound = config.edge_bound.value_or(
      static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2);

  std::uint64_t attempts = 0;
  std::function<std::size_t(std::uint64_t)> keep;
  if (config.repetitions) {
    attempts = *config.repetitions;
  } else {
    attempts = counting_repetitions(pattern, m_bound, n, config.epsilon, config.lower_bound);
    keep = [&pattern, n, config](std::uint64_t m) {
      return static_cast<std::size_t>(
          counting_repetitions(pattern, m, n, config.epsilon, config.lower_bound));
    };
  }
  Estimate estimate;
  if (attempts > config.repetition_cap) {
    estimate.aborted = true;
    estimate.repetitions = attempts;
    return estimate;
  }

  // The sampler's own accuracy parameter is a third of the counting one.
  PassOptions options{config.mode,
                      turnstile_failure_exponent(pattern, n, m_bound, config.epsilon / 3)};
  TaskDriver<SubgRun> driver(
      stream_subg_program(pattern, config.mode, attempts, derive_seed(seed, 1), keep),
      kStreamSubgRounds);
  const RunStats stats = run_rounds(driver, stream, options, derive_seed(seed, 2));
  const SubgRun run = driver.result();

  estimate.passes = stats.pass_count();
  estimate.queries = stats.total_queries();
  estimate.bits_tracked = stats.max_bits();
  estimate.per_pass = stats.passes;
  estimate.edge_count = run.edge_count;
  estimate.repetitions = run.outcomes.size();
  for (const SampleOutcome& o : run.outcomes) estimate.successes += o.copy ? 1 : 0;
  if (estimate.repetitions > 0) {
    const double scale =
        std::pow(2.0 * static_cast<double>(run.edge_count), to_double(pattern.rho()));
    estimate.value = scale * static_cast<double>(estimate.successes) /
                     static_cast<double>(estimate.repetitions);
  }
  return estimate;
}

Estimate count_subgraph_search(const Pattern& pattern, const EdgeStream& stream,
                               const CountingConfig& config, std::uint64_t seed) {
  const std::size_t n = stream.vertex_count();
  const std::uint64_t m_bound = config.edge_bound.value_or(
      static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  // Copies are disjoint events of probability (2m)^-rho each.
  double guess = std::max(1.0, std::pow(2.0 * static_cast<double>(m_bound), to_double(pattern.rho())));
  Estimate total;
  for (std::uint64_t probe = 0;; ++probe) {
    CountingConfig step = config;
    step.lower_bound = guess;
    step.repetitions.reset();
    Estimate e = count_subgraph(pattern, stream, step, derive_seed(seed, probe));
    for (std::size_t k = 0; k < kQueryKinds; ++k) e.queries[k] += total.queries[k];
    e.passes += total.passes;
    e.bits_tracked = std::max(e.bits_tracked, total.bits_tracked);
    e.per_pass.insert(e.per_pass.begin(), total.per_pass.begin(), total.per_pass.end());
    total = e;
    if (e.aborted || e.value >= guess || guess <= 1.0) return total;
    guess = std::max(1.0, guess / 2);
  }
}

}  // namespace streamcount
