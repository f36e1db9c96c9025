#include "streamcount/oracle.hpp"

#include "streamcount/error.hpp"
#include "streamcount/l0_sampler.hpp"

namespace streamcount {

QueryOracle::QueryOracle(const Graph& g, std::uint64_t seed, OracleModel model,
                         double failure_exponent)
    : graph_(&g), model_(model), failure_exponent_(failure_exponent), rng_(seed) {}

void QueryOracle::check_vertex(Vertex v) const {
  if (v >= graph_->vertex_count()) {
    throw Error(ErrorCode::kVertexOutOfRange, "vertex " + std::to_string(v));
  }
}

std::optional<Edge> QueryOracle::random_edge() {
  ++stats_.random_edge;
  const auto& edges = graph_->edges();
  if (edges.empty()) throw Error(ErrorCode::kEmptyGraph, "random edge of an empty graph");
  if (model_ == OracleModel::kExact) return edges[rng_.below(edges.size())];

  const std::uint64_t n = graph_->vertex_count();
  L0Sampler sketch(n * n, rng_(), failure_exponent_, n);
  for (const Edge& e : edges) sketch.update(e.u * n + e.v, 1);
  const auto index = sketch.sample();
  if (!index) return std::nullopt;
  return Edge{static_cast<Vertex>(*index / n), static_cast<Vertex>(*index % n)};
}

std::size_t QueryOracle::degree(Vertex v) {
  ++stats_.degree;
  check_vertex(v);
  return graph_->degree(v);
}

Vertex QueryOracle::neighbor(Vertex v, std::size_t i) {
  ++stats_.neighbor;
  check_vertex(v);
  if (i == 0 || i > graph_->degree(v)) {
    throw Error(ErrorCode::kNeighborIndexOutOfRange,
                "vertex " + std::to_string(v) + " index " + std::to_string(i));
  }
  return graph_->neighbors(v)[i - 1];
}

std::optional<Vertex> QueryOracle::random_neighbor(Vertex v) {
  ++stats_.neighbor;
  check_vertex(v);
  const auto list = graph_->neighbors(v);
  if (list.empty()) return std::nullopt;
  if (model_ == OracleModel::kExact) return list[rng_.below(list.size())];

  const std::uint64_t n = graph_->vertex_count();
  L0Sampler sketch(n, rng_(), failure_exponent_, n);
  for (Vertex w : list) sketch.update(w, 1);
  const auto index = sketch.sample();
  if (!index) return std::nullopt;
  return static_cast<Vertex>(*index);
}

bool QueryOracle::pair(Vertex u, Vertex v) {
  ++stats_.pair;
  check_vertex(u);
  check_vertex(v);
  return graph_->has_edge(u, v);
}

}  // namespace streamcount
