#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "streamcount/graph.hpp"

namespace streamcount {

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
// Center 0 with petals 1..k.
Graph star_graph(std::size_t petals);
Graph petersen_graph();
// Uniform over graphs with exactly m edges. Throws kInvalidParams if m > n(n-1)/2.
Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed);
// rows x cols grid with one diagonal per cell: planar, degeneracy at most 3.
Graph planar_grid(std::size_t rows, std::size_t cols);
// Preferential attachment, each new vertex attaching to k distinct earlier vertices.
Graph barabasi_albert(std::size_t n, std::size_t k, std::uint64_t seed);
// Subgraph induced by keep, relabelled 0..|keep|-1 in the given order.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep);

}  // namespace streamcount
