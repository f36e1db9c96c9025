#include "streamcount/stream.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "streamcount/error.hpp"
#include "streamcount/random.hpp"

namespace streamcount {

const char* stream_mode_name(StreamMode mode) {
  return mode == StreamMode::kInsertionOnly ? "io" : "ts";
}

StreamMode parse_stream_mode(const std::string& name) {
  if (name == "io" || name == "insertion-only") return StreamMode::kInsertionOnly;
  if (name == "ts" || name == "turnstile") return StreamMode::kTurnstile;
  throw Error(ErrorCode::kInvalidParams, "unknown stream mode '" + name + "'");
}

EdgeStream::EdgeStream(std::size_t vertex_count, std::vector<StreamUpdate> updates)
    : n_(vertex_count), updates_(std::move(updates)) {
  std::unordered_set<std::uint64_t> present;
  for (std::size_t i = 0; i < updates_.size(); ++i) {
    const StreamUpdate& up = updates_[i];
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kMalformedStream, "update " + std::to_string(i + 1) + ": " + what);
    };
    if (up.u >= n_ || up.v >= n_) fail("vertex out of range");
    if (up.u == up.v) fail("self-loop");
    const std::uint64_t key = edge_key(up.u, up.v);
    if (up.delta == 1) {
      if (!present.insert(key).second) fail("edge inserted twice");
    } else if (up.delta == -1) {
      if (present.erase(key) == 0) fail("deletion of an absent edge");
      has_deletions_ = true;
    } else {
      fail("delta must be +1 or -1");
    }
  }
  final_edges_ = present.size();
}

Graph EdgeStream::final_graph() const {
  std::unordered_set<std::uint64_t> present;
  for (const StreamUpdate& up : updates_) {
    if (up.delta == 1) {
      present.insert(edge_key(up.u, up.v));
    } else {
      present.erase(edge_key(up.u, up.v));
    }
  }
  std::vector<Edge> edges;
  edges.reserve(present.size());
  for (std::uint64_t key : present) {
    edges.push_back({static_cast<Vertex>(key >> 32), static_cast<Vertex>(key & 0xffffffffU)});
  }
  return Graph(n_, edges);
}

EdgeStream read_stream(std::istream& in) {
  std::vector<StreamUpdate> updates;
  long long declared = -1;
  std::size_t max_id_plus_one = 0;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string op;
    if (!(fields >> op)) continue;
    if (op[0] == '#') {
      std::string word;
      long long n = -1;
      if (fields >> word >> n && word == "vertices" && n >= 0) declared = n;
      continue;
    }
    long long u = -1;
    long long v = -1;
    if ((op != "+" && op != "-") || !(fields >> u >> v) || u < 0 || v < 0 ||
        u > std::numeric_limits<Vertex>::max() || v > std::numeric_limits<Vertex>::max()) {
      throw Error(ErrorCode::kMalformedStream,
                  "line " + std::to_string(line_number) + ": expected \"+ u v\" or \"- u v\"");
    }
    updates.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), op == "+" ? 1 : -1});
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  const std::size_t n = declared >= 0 ? static_cast<std::size_t>(declared) : max_id_plus_one;
  return EdgeStream(n, std::move(updates));
}

void write_stream(std::ostream& out, const EdgeStream& stream) {
  out << "# vertices " << stream.vertex_count() << '\n';
  for (const StreamUpdate& up : stream.updates()) {
    out << (up.delta > 0 ? '+' : '-') << ' ' << up.u << ' ' << up.v << '\n';
  }
}

EdgeStream load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  return read_stream(in);
}

void save_stream(const std::string& path, const EdgeStream& stream) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  write_stream(out, stream);
}

namespace {

// Interleaves per-edge event sequences uniformly at random while keeping each
// edge's own events in order.
EdgeStream interleave(std::size_t n, const std::vector<Edge>& edges,
                      const std::vector<std::vector<int>>& events, Rng& rng) {
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < edges.size(); ++i) slots.insert(slots.end(), events[i].size(), i);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<std::size_t> cursor(edges.size(), 0);
  std::vector<StreamUpdate> updates;
  updates.reserve(slots.size());
  for (std::size_t i : slots) {
    updates.push_back({edges[i].u, edges[i].v, events[i][cursor[i]++]});
  }
  return EdgeStream(n, std::move(updates));
}

}  // namespace

EdgeStream insertion_stream(const Graph& g, std::uint64_t seed) { return churn_stream(g, 0.0, seed); }

EdgeStream churn_stream(const Graph& g, double churn, std::uint64_t seed) {
  if (!(churn >= 0.0 && churn <= 1.0)) {
    throw Error(ErrorCode::kInvalidChurn, "churn must lie in [0, 1]");
  }
  Rng rng(seed);
  const std::vector<Edge>& edges = g.edges();
  const auto churned = static_cast<std::size_t>(churn * static_cast<double>(edges.size()));
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int>> events(edges.size(), std::vector<int>{1});
  for (std::size_t j = 0; j < churned; ++j) events[order[j]] = {1, -1, 1};
  return interleave(g.vertex_count(), edges, events, rng);
}

EdgeStream deletion_stream(const Graph& g, std::span<const Edge> removed, std::uint64_t seed) {
  Rng rng(seed);
  std::unordered_set<std::uint64_t> drop;
  for (const Edge& e : removed) {
    if (!g.has_edge(e.u, e.v)) throw Error(ErrorCode::kInvalidParams, "removed edge not in graph");
    drop.insert(edge_key(e.u, e.v));
  }
  std::vector<std::vector<int>> events;
  for (const Edge& e : g.edges()) {
    events.push_back(drop.count(edge_key(e.u, e.v)) ? std::vector<int>{1, -1} : std::vector<int>{1});
  }
  return interleave(g.vertex_count(), g.edges(), events, rng);
}

}  // namespace streamcount
