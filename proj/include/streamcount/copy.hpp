#pragma once

#include <compare>
#include <span>
#include <vector>

#include "streamcount/graph.hpp"

namespace streamcount {

// A copy of a pattern in a host graph: a subgraph, identified by its edge set.
struct Copy {
  std::vector<Edge> edges;       // normalized, sorted
  std::vector<Vertex> vertices;  // sorted

  friend auto operator<=>(const Copy& a, const Copy& b) { return a.edges <=> b.edges; }
  friend bool operator==(const Copy& a, const Copy& b) { return a.edges == b.edges; }
};

// Builds a Copy from arbitrary edges; vertices are their endpoints.
Copy make_copy(std::vector<Edge> edges);

}  // namespace streamcount
