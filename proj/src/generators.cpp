#include "streamcount/generators.hpp"

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "streamcount/error.hpp"
#include "streamcount/random.hpp"

namespace streamcount {

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::kInvalidParams, "cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.push_back(make_edge(u, static_cast<Vertex>((u + 1) % n)));
  return Graph(n, edges);
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return Graph(n, edges);
}

Graph star_graph(std::size_t petals) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= petals; ++v) edges.push_back({0, v});
  return Graph(petals + 1, edges);
}

Graph petersen_graph() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.push_back(make_edge(i, (i + 1) % 5));           // outer cycle
    edges.push_back(make_edge(i, i + 5));                 // spokes
    edges.push_back(make_edge(i + 5, (i + 2) % 5 + 5));   // inner pentagram
  }
  return Graph(10, edges);
}

Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  if (m > pairs) throw Error(ErrorCode::kInvalidParams, "too many edges for gnm");
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  std::vector<Edge> edges;
  // Floyd's sampling of m distinct pair indices.
  for (std::uint64_t j = pairs - m; j < pairs; ++j) {
    std::uint64_t t = rng.below(j + 1);
    if (chosen.count(t) != 0) t = j;
    chosen.insert(t);
  }
  std::vector<std::uint64_t> indices(chosen.begin(), chosen.end());
  std::sort(indices.begin(), indices.end());
  for (std::uint64_t idx : indices) {
    // Decode idx into the pair (u, v), u < v, in row-major order.
    Vertex u = 0;
    std::uint64_t row = n - 1;
    while (idx >= row) {
      idx -= row;
      ++u;
      --row;
    }
    edges.push_back({u, static_cast<Vertex>(u + 1 + idx)});
  }
  return Graph(n, edges);
}

Graph planar_grid(std::size_t rows, std::size_t cols) {
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * cols + c); };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
      if (r + 1 < rows && c + 1 < cols) edges.push_back({id(r, c), id(r + 1, c + 1)});
    }
  }
  return Graph(rows * cols, edges);
}

Graph barabasi_albert(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || n <= k) throw Error(ErrorCode::kInvalidParams, "need 0 < k < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Endpoint multiset: a uniform pick is degree-proportional.
  std::vector<Vertex> endpoints;
  // Seed clique on the first k + 1 vertices.
  for (Vertex u = 0; u <= k; ++u) {
    for (Vertex v = u + 1; v <= k; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  for (Vertex v = static_cast<Vertex>(k + 1); v < n; ++v) {
    std::vector<Vertex> targets;
    while (targets.size() < k) {
      const Vertex t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Vertex t : targets) {
      edges.push_back(make_edge(t, v));
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, edges);
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<std::int64_t> label(g.vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) label[keep[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (label[e.u] >= 0 && label[e.v] >= 0) {
      edges.push_back(make_edge(static_cast<Vertex>(label[e.u]), static_cast<Vertex>(label[e.v])));
    }
  }
  return Graph(keep.size(), edges);
}

}  // namespace streamcount
