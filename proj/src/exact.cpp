#include "streamcount/exact.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "streamcount/error.hpp"
#include "streamcount/subgraph_sampler.hpp"

namespace streamcount {

CopySet enumerate_copies(const Graph& host, const Graph& pattern) {
  const std::size_t h = pattern.vertex_count();
  const std::size_t n = host.vertex_count();
  if (h > kExactMaxPatternVertices || n > kExactMaxHostVertices) {
    throw Error(ErrorCode::kSizeLimitExceeded, "exact enumeration is limited to 6 pattern and 30 host vertices");
  }
  CopySet set;
  if (h == 0 || h > n) return set;

  // Visit pattern vertices so that each one after the first has an earlier
  // neighbor whenever possible.
  std::vector<Vertex> order;
  std::vector<bool> placed(h, false);
  while (order.size() < h) {
    Vertex best = 0;
    int best_score = -1;
    for (Vertex x = 0; x < h; ++x) {
      if (placed[x]) continue;
      int score = 0;
      for (Vertex y : pattern.neighbors(x)) score += placed[y] ? 100 : 1;
      if (score > best_score) {
        best = x;
        best_score = score;
      }
    }
    placed[best] = true;
    order.push_back(best);
  }

  std::vector<Vertex> image(h);
  std::vector<bool> mapped(h, false);
  std::vector<bool> used(n, false);
  std::map<Copy, std::vector<Vertex>> found;

  std::function<void(std::size_t)> extend = [&](std::size_t depth) {
    if (depth == h) {
      ++set.ordered_count;
      std::vector<Edge> edges;
      for (const Edge& e : pattern.edges()) edges.push_back(make_edge(image[e.u], image[e.v]));
      Copy copy = make_copy(std::move(edges));
      found.try_emplace(std::move(copy), image);
      return;
    }
    const Vertex x = order[depth];
    for (Vertex t = 0; t < n; ++t) {
      if (used[t]) continue;
      bool fits = true;
      for (Vertex y : pattern.neighbors(x)) {
        if (mapped[y] && !host.has_edge(t, image[y])) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      used[t] = true;
      mapped[x] = true;
      image[x] = t;
      extend(depth + 1);
      used[t] = false;
      mapped[x] = false;
    }
  };
  extend(0);

  for (auto& [copy, map] : found) {
    set.copies.push_back(copy);
    set.maps.push_back(std::move(map));
  }
  return set;
}

const Copy& uniform_copy(const CopySet& set, Rng& rng) {
  if (set.copies.empty()) throw Error(ErrorCode::kEmptySampleSet, "no copies to sample from");
  return set.copies[rng.below(set.copies.size())];
}

namespace {

using Distribution = std::map<std::vector<Vertex>, Surd>;

struct HostView {
  const Graph& graph;
  std::uint64_t two_m;
  EdgeSet edges;
  VertexOrder order;
  std::vector<Edge> directed;

  explicit HostView(const Graph& g) : graph(g), two_m(2 * g.edge_count()), order(g) {
    for (const Edge& e : g.edges()) {
      edges.insert(e.u, e.v);
      directed.push_back({e.u, e.v});
      directed.push_back({e.v, e.u});
    }
  }

  Surd zero() const { return Surd(two_m); }
};

// Every k-tuple of directed edges, each tuple with mass (2m)^-k.
void for_each_tuple(const HostView& host, std::size_t k,
                    const std::function<void(const std::vector<Edge>&)>& visit) {
  std::vector<Edge> tuple(k);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      visit(tuple);
      return;
    }
    for (const Edge& e : host.directed) {
      tuple[i] = e;
      rec(i + 1);
    }
  };
  rec(0);
}

// Distribution of the vertex w returned by the wedge step from u.
std::map<Vertex, Surd> wedge_distribution(const HostView& host, Vertex u) {
  std::map<Vertex, Surd> out;
  const std::uint64_t d = host.graph.degree(u);
  if (d * d <= host.two_m) {
    const std::uint64_t grid = isqrt(host.two_m);
    // slot j with probability 1/grid, then the coin grid/sqrt(2m)
    const Surd coin = Surd::root(host.two_m) * Rational(grid, host.two_m);
    const auto nbrs = host.graph.neighbors(u);
    for (std::uint64_t j = 1; j <= grid; ++j) {
      if (j > d) continue;
      auto [it, fresh] = out.try_emplace(nbrs[j - 1], host.zero());
      it->second += coin * Rational(1, grid);
    }
  } else {
    for (const Edge& e : host.directed) {
      const std::uint64_t dw = host.graph.degree(e.v);
      // min(1, sqrt(2m)/d(w))
      const Surd accept = dw * dw <= host.two_m ? Surd(host.two_m, 1)
                                                : Surd::root(host.two_m) * Rational(1, dw);
      auto [it, fresh] = out.try_emplace(e.v, host.zero());
      it->second += accept * Rational(1, host.two_m);
    }
  }
  return out;
}

Distribution cycle_distribution(const HostView& host, std::size_t length) {
  const std::size_t k = (length - 1) / 2;
  Distribution out;
  Rational tuple_mass = 1;
  for (std::size_t i = 0; i < k; ++i) tuple_mass /= host.two_m;
  for_each_tuple(host, k, [&](const std::vector<Edge>& tuple) {
    std::vector<Vertex> seq;
    for (const Edge& e : tuple) {
      seq.push_back(e.u);
      seq.push_back(e.v);
    }
    for (const auto& [w, mass] : wedge_distribution(host, seq[0])) {
      seq.push_back(w);
      if (is_canonical_cycle(seq, host.edges, host.order)) {
        auto [it, fresh] = out.try_emplace(seq, host.zero());
        it->second += mass * tuple_mass;
      }
      seq.pop_back();
    }
  });
  return out;
}

Distribution star_distribution(const HostView& host, std::size_t petals) {
  Distribution out;
  Rational tuple_mass = 1;
  for (std::size_t i = 0; i < petals; ++i) tuple_mass /= host.two_m;
  for_each_tuple(host, petals, [&](const std::vector<Edge>& tuple) {
    std::vector<Vertex> seq{tuple[0].u};
    for (const Edge& e : tuple) {
      if (e.u != seq[0]) return;
      seq.push_back(e.v);
    }
    if (is_canonical_star(seq, host.edges, host.order)) {
      auto [it, fresh] = out.try_emplace(seq, host.zero());
      it->second += Surd(host.two_m, tuple_mass);
    }
  });
  return out;
}

}  // namespace

std::map<Copy, Surd> exact_copy_distribution(const Graph& host_graph, const Pattern& pattern) {
  if (pattern.vertex_count() > kExactMaxPatternVertices ||
      host_graph.vertex_count() > kExactMaxHostVertices) {
    throw Error(ErrorCode::kSizeLimitExceeded, "exact probabilities are limited to 6 pattern and 30 host vertices");
  }
  std::map<Copy, Surd> result;
  if (host_graph.edge_count() == 0) return result;
  const HostView host(host_graph);

  std::vector<Distribution> pieces;
  for (const Piece& piece : pattern.pieces()) {
    pieces.push_back(piece.kind == PieceKind::kOddCycle ? cycle_distribution(host, piece.size())
                                                        : star_distribution(host, piece.size()));
  }

  const Rational slot = Rational(1, pattern.decomposition_count());
  std::vector<const std::vector<Vertex>*> chosen(pieces.size());
  std::function<void(std::size_t, const Surd&)> combine = [&](std::size_t i, const Surd& mass) {
    if (i == pieces.size()) {
      std::vector<Vertex> vertices;
      std::vector<Edge> required;
      for (std::size_t p = 0; p < chosen.size(); ++p) {
        const auto& seq = *chosen[p];
        vertices.insert(vertices.end(), seq.begin(), seq.end());
        if (pattern.pieces()[p].kind == PieceKind::kOddCycle) {
          for (std::size_t j = 0; j < seq.size(); ++j) required.push_back(make_edge(seq[j], seq[(j + 1) % seq.size()]));
        } else {
          for (std::size_t j = 1; j < seq.size(); ++j) required.push_back(make_edge(seq[0], seq[j]));
        }
      }
      std::sort(vertices.begin(), vertices.end());
      if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) return;
      for (Copy& copy : copies_spanning(pattern.graph(), vertices, host.edges, required)) {
        auto [it, fresh] = result.try_emplace(std::move(copy), host.zero());
        it->second += mass * slot;
      }
      return;
    }
    for (const auto& [seq, m] : pieces[i]) {
      chosen[i] = &seq;
      combine(i + 1, mass * m);
    }
  };
  combine(0, Surd(host.two_m, 1));
  return result;
}

Surd exact_copy_probability(const Graph& host, const Pattern& pattern, const Copy& copy) {
  const auto dist = exact_copy_distribution(host, pattern);
  const auto it = dist.find(copy);
  return it == dist.end() ? Surd(std::max<std::uint64_t>(1, 2 * host.edge_count())) : it->second;
}

}  // namespace streamcount
