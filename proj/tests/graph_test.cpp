#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "streamcount/error.hpp"
#include "streamcount/generators.hpp"
#include "streamcount/graph.hpp"

namespace streamcount {
namespace {

TEST(GraphTest, AdjacencyIsSortedAndSymmetric) {
  const std::vector<Edge> edges{{3, 1}, {0, 2}, {1, 0}, {2, 3}};
  const Graph g(4, edges);
  EXPECT_EQ(g.edge_count(), 4U);
  EXPECT_EQ(g.degree(0), 2U);
  const auto n1 = g.neighbors(1);
  ASSERT_EQ(n1.size(), 2U);
  EXPECT_EQ(n1[0], 0U);
  EXPECT_EQ(n1[1], 3U);
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_TRUE(g.has_edge(1, 3));
  EXPECT_FALSE(g.has_edge(0, 3));
  EXPECT_FALSE(g.has_edge(2, 2));
  EXPECT_EQ(g.edges().front(), (Edge{0, 1}));
}

TEST(GraphTest, RejectsInvalidEdges) {
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph(3, loop), Error);
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  EXPECT_THROW(Graph(3, dup), Error);
  const std::vector<Edge> range{{0, 3}};
  EXPECT_THROW(Graph(3, range), Error);
}

TEST(GraphTest, TextRoundTrip) {
  const Graph g = planar_grid(3, 4);
  std::stringstream buffer;
  write_graph(buffer, g);
  const Graph back = read_graph(buffer);
  EXPECT_EQ(back.vertex_count(), g.vertex_count());
  EXPECT_EQ(back.edges(), g.edges());
}

TEST(GraphTest, ParseErrors) {
  std::stringstream short_input("3 2\n0 1\n");
  EXPECT_THROW(read_graph(short_input), Error);
  std::stringstream bad_vertex("3 1\n0 5\n");
  EXPECT_THROW(read_graph(bad_vertex), Error);
}

TEST(VertexOrderTest, DegreeThenId) {
  // Path 0-1-2 plus pendant 3 on 1: degrees 1, 3, 1, 1.
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {1, 3}};
  const Graph g(4, edges);
  const VertexOrder order(g);
  EXPECT_TRUE(order.precedes(0, 2));
  EXPECT_TRUE(order.precedes(3, 1));
  EXPECT_FALSE(order.precedes(1, 0));
  EXPECT_FALSE(order.precedes(2, 2));
  // Total and strict on all pairs.
  for (Vertex a = 0; a < 4; ++a) {
    for (Vertex b = 0; b < 4; ++b) {
      if (a != b) EXPECT_NE(order.precedes(a, b), order.precedes(b, a));
    }
  }
}

TEST(DegeneracyTest, KnownValues) {
  EXPECT_EQ(degeneracy(complete_graph(5)), 4U);
  EXPECT_EQ(degeneracy(cycle_graph(7)), 2U);
  EXPECT_EQ(degeneracy(star_graph(6)), 1U);
  EXPECT_EQ(degeneracy(petersen_graph()), 3U);
  EXPECT_LE(degeneracy(planar_grid(6, 6)), 3U);
  EXPECT_EQ(degeneracy(Graph(4, std::vector<Edge>{})), 0U);
}

// Independent check: the smallest k such that repeatedly deleting vertices of
// degree <= k empties the graph.
std::size_t brute_degeneracy(const Graph& g) {
  for (std::size_t k = 0;; ++k) {
    std::vector<bool> alive(g.vertex_count(), true);
    bool changed = true;
    while (changed) {
      changed = false;
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (!alive[v]) continue;
        std::size_t d = 0;
        for (Vertex w : g.neighbors(v)) d += alive[w] ? 1 : 0;
        if (d <= k) {
          alive[v] = false;
          changed = true;
        }
      }
    }
    if (std::find(alive.begin(), alive.end(), true) == alive.end()) return k;
  }
}

TEST(DegeneracyTest, MatchesBruteForceOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = random_gnm(12, 5 + seed, seed);
    EXPECT_EQ(degeneracy(g), brute_degeneracy(g)) << "seed " << seed;
  }
}

TEST(GeneratorTest, Shapes) {
  EXPECT_EQ(complete_graph(6).edge_count(), 15U);
  EXPECT_EQ(cycle_graph(5).edge_count(), 5U);
  EXPECT_EQ(star_graph(4).degree(0), 4U);
  EXPECT_EQ(petersen_graph().edge_count(), 15U);
  const Graph gnm = random_gnm(20, 40, 7);
  EXPECT_EQ(gnm.edge_count(), 40U);
  EXPECT_EQ(random_gnm(20, 40, 7).edges(), gnm.edges());
  const Graph ba = barabasi_albert(30, 2, 3);
  EXPECT_EQ(ba.edge_count(), 3U + 2U * 27U);
  EXPECT_THROW(random_gnm(4, 7, 1), Error);
}

TEST(GeneratorTest, InducedSubgraph) {
  const std::vector<Vertex> keep{2, 3, 4, 5, 6, 7, 8, 9};
  const Graph sub = induced_subgraph(petersen_graph(), keep);
  EXPECT_EQ(sub.vertex_count(), 8U);
  // Removing the adjacent vertices 0 and 1 drops 5 edges.
  EXPECT_EQ(sub.edge_count(), 10U);
}

}  // namespace
}  // namespace streamcount
