#include "streamcount/graph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "streamcount/error.hpp"

namespace streamcount {

Graph::Graph(std::size_t vertex_count, std::span<const Edge> edges) : n_(vertex_count) {
  if (vertex_count > std::numeric_limits<Vertex>::max()) {
    throw Error(ErrorCode::kInvalidGraph, "too many vertices");
  }
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u == e.v) throw Error(ErrorCode::kInvalidGraph, "self-loop at " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_) {
      throw Error(ErrorCode::kInvalidGraph, "edge endpoint out of range");
    }
    edges_.push_back(make_edge(e.u, e.v));
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error(ErrorCode::kInvalidGraph, "duplicate edge");
  }

  std::vector<std::size_t> degree(n_, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  if (degree(a) > degree(b)) std::swap(a, b);
  const auto list = neighbors(a);
  return std::binary_search(list.begin(), list.end(), b);
}

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_number;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_number) + ": " + what);
  };

  if (!next_line(line)) fail("missing header");
  std::istringstream header(line);
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) fail("expected \"n m\"");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line)) fail("expected " + std::to_string(m) + " edges");
    std::istringstream fields(line);
    long long u = -1;
    long long v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0) fail("expected \"u v\"");
    if (u >= n || v >= n) fail("vertex out of range");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return Graph(static_cast<std::size_t>(n), edges);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  return read_graph(in);
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  write_graph(out, g);
}

VertexOrder::VertexOrder(const Graph& g) {
  degrees_.reserve(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) degrees_.emplace(v, g.degree(v));
}

VertexOrder::VertexOrder(std::unordered_map<Vertex, std::size_t> degrees)
    : degrees_(std::move(degrees)) {}

std::size_t VertexOrder::degree(Vertex v) const {
  const auto it = degrees_.find(v);
  if (it == degrees_.end()) {
    throw Error(ErrorCode::kVertexOutOfRange, "no degree recorded for " + std::to_string(v));
  }
  return it->second;
}

std::size_t degeneracy(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> degree(n);
  std::size_t max_degree = 0;
  for (Vertex v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    max_degree = std::max(max_degree, degree[v]);
  }
  // Bucket queue keyed by current degree.
  std::vector<std::vector<Vertex>> buckets(max_degree + 1);
  for (Vertex v = 0; v < n; ++v) buckets[degree[v]].push_back(v);
  std::vector<bool> removed(n, false);
  std::size_t result = 0;
  std::size_t low = 0;
  for (std::size_t done = 0; done < n;) {
    while (low > 0 && !buckets[low - 1].empty()) --low;
    while (buckets[low].empty()) ++low;
    const Vertex v = buckets[low].back();
    buckets[low].pop_back();
    if (removed[v] || degree[v] != low) continue;
    removed[v] = true;
    ++done;
    result = std::max(result, low);
    for (Vertex w : g.neighbors(v)) {
      if (removed[w]) continue;
      --degree[w];
      buckets[degree[w]].push_back(w);
    }
  }
  return result;
}

}  // namespace streamcount
