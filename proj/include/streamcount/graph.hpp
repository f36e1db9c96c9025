#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace streamcount {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Endpoints ordered so that u < v.
inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Order-independent key for an unordered pair.
inline std::uint64_t edge_key(Vertex a, Vertex b) {
  const Edge e = make_edge(a, b);
  return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

class EdgeSet {
 public:
  void insert(Vertex a, Vertex b) { keys_.insert(edge_key(a, b)); }
  bool contains(Vertex a, Vertex b) const { return keys_.count(edge_key(a, b)) != 0; }
  std::size_t size() const { return keys_.size(); }

 private:
  std::unordered_set<std::uint64_t> keys_;
};

// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  // Throws Error(kInvalidGraph) on self-loops, duplicates or out-of-range ids.
  Graph(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], degree(v)};
  }
  bool has_edge(Vertex a, Vertex b) const;
  // Normalized (u < v) and sorted.
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;
};

// Text format: a header line "n m", then m lines "u v".
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

// The total order used for canonical forms: by degree, then by id.
class VertexOrder {
 public:
  explicit VertexOrder(const Graph& g);
  explicit VertexOrder(std::unordered_map<Vertex, std::size_t> degrees);

  std::size_t degree(Vertex v) const;
  bool precedes(Vertex a, Vertex b) const {
    const std::size_t da = degree(a);
    const std::size_t db = degree(b);
    return da != db ? da < db : a < b;
  }

 private:
  std::unordered_map<Vertex, std::size_t> degrees_;
};

// Standard degeneracy: max over the min-degree peeling order of the degree at removal.
std::size_t degeneracy(const Graph& g);

}  // namespace streamcount
