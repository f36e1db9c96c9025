#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "streamcount/graph.hpp"

namespace streamcount {

enum class QueryKind : std::uint8_t {
  kRandomEdge,      // f1
  kDegree,          // f2
  kNeighbor,        // f3, i-th neighbor
  kRandomNeighbor,  // f3, uniform neighbor
  kPair,            // f4
};
inline constexpr std::size_t kQueryKinds = 5;

const char* query_kind_name(QueryKind kind);

struct Query {
  QueryKind kind = QueryKind::kRandomEdge;
  Vertex u = 0;
  Vertex v = 0;
  std::uint64_t index = 0;  // 1-based, kNeighbor only

  static Query random_edge() { return {QueryKind::kRandomEdge, 0, 0, 0}; }
  static Query degree(Vertex v) { return {QueryKind::kDegree, v, 0, 0}; }
  static Query neighbor(Vertex v, std::uint64_t i) { return {QueryKind::kNeighbor, v, 0, i}; }
  static Query random_neighbor(Vertex v) { return {QueryKind::kRandomNeighbor, v, 0, 0}; }
  static Query pair(Vertex u, Vertex v) { return {QueryKind::kPair, u, v, 0}; }
};

enum class AnswerStatus : std::uint8_t {
  kOk,
  kFail,        // sketch failure, or no edge / neighbor exists
  kOutOfRange,  // neighbor index beyond the degree
};

struct Answer {
  AnswerStatus status = AnswerStatus::kOk;
  Edge edge;               // kRandomEdge
  std::uint64_t value = 0;  // degree, neighbor id, or pair bit

  bool ok() const { return status == AnswerStatus::kOk; }
  Vertex vertex() const { return static_cast<Vertex>(value); }
};

using QueryCounts = std::array<std::uint64_t, kQueryKinds>;

// Answers to one plan, in plan order, plus the edge count of the final graph.
struct Reply {
  std::vector<Answer> answers;
  std::uint64_t edge_count = 0;
};

}  // namespace streamcount
