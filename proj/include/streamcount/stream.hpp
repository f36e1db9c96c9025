#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "streamcount/graph.hpp"

namespace streamcount {

enum class StreamMode { kInsertionOnly, kTurnstile };

const char* stream_mode_name(StreamMode mode);
StreamMode parse_stream_mode(const std::string& name);

struct StreamUpdate {
  Vertex u = 0;
  Vertex v = 0;
  int delta = 1;  // +1 insert, -1 delete
};

// A sequence of edge updates over vertices 0..n-1. Every edge's running
// multiplicity stays in {0, 1}.
class EdgeStream {
 public:
  // Throws Error(kMalformedStream) if an update breaks the multiplicity invariant.
  EdgeStream(std::size_t vertex_count, std::vector<StreamUpdate> updates);

  std::size_t vertex_count() const { return n_; }
  const std::vector<StreamUpdate>& updates() const { return updates_; }
  bool has_deletions() const { return has_deletions_; }
  std::size_t final_edge_count() const { return final_edges_; }
  Graph final_graph() const;

 private:
  std::size_t n_;
  std::vector<StreamUpdate> updates_;
  bool has_deletions_ = false;
  std::size_t final_edges_ = 0;
};

// Text format: lines "+ u v" or "- u v". An optional comment "# vertices N"
// fixes n; otherwise n is one more than the largest id seen.
EdgeStream read_stream(std::istream& in);
void write_stream(std::ostream& out, const EdgeStream& stream);
EdgeStream load_stream(const std::string& path);
void save_stream(const std::string& path, const EdgeStream& stream);

// Each edge inserted once, in uniformly random order.
EdgeStream insertion_stream(const Graph& g, std::uint64_t seed);
// Like insertion_stream, but floor(churn * m) random edges are inserted,
// deleted and reinserted, adding 2 * floor(churn * m) updates overall.
// Throws Error(kInvalidChurn) unless 0 <= churn <= 1.
EdgeStream churn_stream(const Graph& g, double churn, std::uint64_t seed);
// Inserts every edge of g and deletes those in removed, each deletion after
// its insertion, in random order. The final graph is g minus removed.
EdgeStream deletion_stream(const Graph& g, std::span<const Edge> removed, std::uint64_t seed);

}  // namespace streamcount
