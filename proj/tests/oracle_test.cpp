#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "streamcount/error.hpp"
#include "streamcount/generators.hpp"
#include "streamcount/oracle.hpp"

namespace streamcount {
namespace {

TEST(QueryOracleTest, ExactAnswers) {
  const Graph g = star_graph(3);
  QueryOracle oracle(g, 1);
  EXPECT_EQ(oracle.degree(0), 3U);
  EXPECT_EQ(oracle.neighbor(0, 1), 1U);
  EXPECT_EQ(oracle.neighbor(0, 3), 3U);
  EXPECT_TRUE(oracle.pair(2, 0));
  EXPECT_FALSE(oracle.pair(1, 2));
  EXPECT_EQ(oracle.stats().total(), 5U);
}

TEST(QueryOracleTest, Errors) {
  const Graph g = star_graph(2);
  QueryOracle oracle(g, 1);
  EXPECT_THROW(oracle.neighbor(1, 2), Error);
  EXPECT_THROW(oracle.neighbor(0, 0), Error);
  EXPECT_THROW(oracle.degree(3), Error);
  EXPECT_THROW(oracle.pair(0, 9), Error);
  const Graph empty(3, std::vector<Edge>{});
  QueryOracle none(empty, 1);
  EXPECT_THROW(none.random_edge(), Error);
  QueryOracle relaxed_none(empty, 1, OracleModel::kRelaxed);
  EXPECT_THROW(relaxed_none.random_edge(), Error);
}

TEST(QueryOracleTest, RandomEdgeOnPathIsFair) {
  const Graph path = path_graph(3);
  for (OracleModel model : {OracleModel::kExact, OracleModel::kRelaxed}) {
    QueryOracle oracle(path, 17, model);
    std::map<Edge, int> counts;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) {
      const auto e = oracle.random_edge();
      if (e) ++counts[*e];
    }
    double tvd = 0;
    for (const Edge& e : path.edges()) tvd += std::abs(counts[e] / double(draws) - 0.5);
    EXPECT_LE(tvd / 2, 0.02);
    EXPECT_EQ(counts.size(), 2U);
  }
}

TEST(QueryOracleTest, RandomNeighborUniform) {
  const Graph g = star_graph(5);
  for (OracleModel model : {OracleModel::kExact, OracleModel::kRelaxed}) {
    QueryOracle oracle(g, 3, model);
    std::map<Vertex, int> counts;
    const int draws = 50000;
    for (int t = 0; t < draws; ++t) {
      if (auto w = oracle.random_neighbor(0)) ++counts[*w];
    }
    for (Vertex v = 1; v <= 5; ++v) EXPECT_NEAR(counts[v] / double(draws), 0.2, 0.01);
    EXPECT_EQ(oracle.random_neighbor(1), std::optional<Vertex>(0));
  }
}

}  // namespace
}  // namespace streamcount
