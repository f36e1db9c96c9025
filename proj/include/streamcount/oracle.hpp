#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "streamcount/graph.hpp"
#include "streamcount/random.hpp"

namespace streamcount {

// kExact answers every query exactly. kRelaxed answers random-edge and
// random-neighbor queries through a fresh l0 sketch, so they can fail.
enum class OracleModel { kExact, kRelaxed };

struct OracleStats {
  std::uint64_t random_edge = 0;
  std::uint64_t degree = 0;
  std::uint64_t neighbor = 0;
  std::uint64_t pair = 0;

  std::uint64_t total() const { return random_edge + degree + neighbor + pair; }
};

// Augmented general graph model over an in-memory graph.
class QueryOracle {
 public:
  QueryOracle(const Graph& g, std::uint64_t seed, OracleModel model = OracleModel::kExact,
              double failure_exponent = 2.0);

  const Graph& graph() const { return *graph_; }
  OracleModel model() const { return model_; }
  std::size_t vertex_count() const { return graph_->vertex_count(); }
  std::size_t edge_count() const { return graph_->edge_count(); }

  // Uniform edge; throws kEmptyGraph. nullopt only on sketch failure.
  std::optional<Edge> random_edge();
  std::size_t degree(Vertex v);
  // i-th neighbor (1-based) in the id-sorted adjacency list.
  Vertex neighbor(Vertex v, std::size_t i);
  // Uniform neighbor; nullopt if v is isolated or the sketch fails.
  std::optional<Vertex> random_neighbor(Vertex v);
  bool pair(Vertex u, Vertex v);

  const OracleStats& stats() const { return stats_; }

 private:
  void check_vertex(Vertex v) const;

  const Graph* graph_;
  OracleModel model_;
  double failure_exponent_;
  Rng rng_;
  OracleStats stats_;
};

}  // namespace streamcount
