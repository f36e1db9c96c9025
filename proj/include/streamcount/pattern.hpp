#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "streamcount/graph.hpp"
#include "streamcount/rational.hpp"

namespace streamcount {

inline constexpr std::size_t kMaxPatternVertices = 10;

enum class PieceKind { kOddCycle, kStar };

// A concrete piece of a decomposition. For a star, vertices[0] is the center.
// For a cycle, the vertices are listed in cyclic order.
struct Piece {
  PieceKind kind = PieceKind::kStar;
  std::vector<Vertex> vertices;

  // Cycle length, or number of petals.
  std::size_t size() const {
    return kind == PieceKind::kOddCycle ? vertices.size() : vertices.size() - 1;
  }
};

// Exact optimum of min sum(psi_e) s.t. every vertex is covered with weight >= 1.
// Solved through the dual packing LP with an exact rational simplex.
Rational fractional_edge_cover(const Graph& h);

// A pattern graph H together with an optimal decomposition of V(H) into
// vertex-disjoint odd cycles and stars.
class Pattern {
 public:
  // Throws Error(kIsolatedVertex) or Error(kSizeLimitExceeded).
  explicit Pattern(Graph h);

  const Graph& graph() const { return graph_; }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  // Cycle lengths ascending, then star petal counts ascending.
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::vector<std::size_t> cycle_lengths() const;
  std::vector<std::size_t> star_petals() const;
  // Sum of c/2 over cycles plus petals over stars.
  const Rational& rho() const { return rho_; }
  // Number of ordered tuples of vertex-disjoint piece copies in H matching the
  // piece types, with each single-edge star counted once per choice of center.
  std::uint64_t decomposition_count() const { return decomposition_count_; }

 private:
  Graph graph_;
  std::vector<Piece> pieces_;
  Rational rho_;
  std::uint64_t decomposition_count_ = 0;
};

// Canonical cycle (u1, ..., uk): consecutive vertices (and uk, u1) adjacent,
// all distinct, u1 precedes every other vertex, and uk precedes u2.
bool is_canonical_cycle(std::span<const Vertex> seq, const EdgeSet& edges,
                        const VertexOrder& order);
// Canonical star (u0; u1, ..., uk): u0 adjacent to every ui, petals strictly increasing.
bool is_canonical_star(std::span<const Vertex> seq, const EdgeSet& edges,
                       const VertexOrder& order);

}  // namespace streamcount
