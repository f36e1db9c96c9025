#include "streamcount/pass_executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

#include "streamcount/error.hpp"
#include "streamcount/l0_sampler.hpp"
#include "streamcount/random.hpp"

namespace streamcount {
namespace {

// Words held per query by the insertion-only emulator.
constexpr std::uint64_t kReservoirWords = 4;  // edge, count, next replacement
constexpr std::uint64_t kCounterWords = 2;    // vertex, count
constexpr std::uint64_t kNeighborWords = 4;   // vertex, index, count, answer
constexpr std::uint64_t kPairWords = 3;       // endpoints, flag

Answer fail_answer() { return Answer{AnswerStatus::kFail, {}, 0}; }

class PassState {
 public:
  PassState(const EdgeStream& stream, std::span<const Query> plan, const PassOptions& options,
            std::uint64_t seed)
      : stream_(stream), plan_(plan), options_(options), rng_(seed), n_(stream.vertex_count()) {
    transcript_.reply.answers.assign(plan.size(), Answer{});
    for (std::size_t q = 0; q < plan.size(); ++q) {
      const Query& query = plan[q];
      ++transcript_.queries[static_cast<std::size_t>(query.kind)];
      if (query.kind != QueryKind::kRandomEdge && query.u >= n_) out_of_range(query.u);
      if (query.kind == QueryKind::kPair && query.v >= n_) out_of_range(query.v);
    }
  }

  PassTranscript run() {
    if (options_.mode == StreamMode::kInsertionOnly) {
      if (stream_.has_deletions()) {
        throw Error(ErrorCode::kMalformedStream, "insertion-only pass over a stream with deletions");
      }
      run_insertion_only();
    } else {
      run_turnstile();
    }
    transcript_.bits_tracked = words_ * 64;
    return std::move(transcript_);
  }

 private:
  [[noreturn]] void out_of_range(Vertex v) const {
    throw Error(ErrorCode::kVertexOutOfRange, "query vertex " + std::to_string(v));
  }

  std::vector<Answer>& answers() { return transcript_.reply.answers; }

  void run_insertion_only() {
    // Random edges: single-item reservoirs advanced by skipping straight to
    // the next replacement position.
    using Slot = std::pair<std::uint64_t, std::size_t>;  // next position, query
    std::priority_queue<Slot, std::vector<Slot>, std::greater<>> reservoirs;
    std::unordered_map<Vertex, std::uint64_t> degree;
    struct NeighborRequests {
      std::vector<std::pair<std::uint64_t, std::size_t>> wanted;  // (index, query), sorted
      std::size_t cursor = 0;
      std::uint64_t seen = 0;
    };
    std::unordered_map<Vertex, NeighborRequests> neighbor;
    struct RandomNeighbor {
      std::vector<std::size_t> queries;
      std::uint64_t seen = 0;
    };
    std::unordered_map<Vertex, RandomNeighbor> random_neighbor;
    std::unordered_map<std::uint64_t, bool> pair;

    for (std::size_t q = 0; q < plan_.size(); ++q) {
      const Query& query = plan_[q];
      switch (query.kind) {
        case QueryKind::kRandomEdge:
          reservoirs.push({1, q});
          answers()[q] = fail_answer();
          words_ += kReservoirWords;
          break;
        case QueryKind::kDegree:
          degree.emplace(query.u, 0);
          words_ += kCounterWords;
          break;
        case QueryKind::kNeighbor:
          neighbor[query.u].wanted.push_back({query.index, q});
          answers()[q] = Answer{AnswerStatus::kOutOfRange, {}, 0};
          words_ += kNeighborWords;
          break;
        case QueryKind::kRandomNeighbor:
          random_neighbor[query.u].queries.push_back(q);
          answers()[q] = fail_answer();
          words_ += kNeighborWords;
          break;
        case QueryKind::kPair:
          pair.emplace(edge_key(query.u, query.v), false);
          words_ += kPairWords;
          break;
      }
    }
    for (auto& [v, req] : neighbor) std::sort(req.wanted.begin(), req.wanted.end());

    std::uint64_t position = 0;
    auto see_endpoint = [&](Vertex x, Vertex other) {
      if (auto it = degree.find(x); it != degree.end()) ++it->second;
      if (auto it = neighbor.find(x); it != neighbor.end()) {
        NeighborRequests& req = it->second;
        ++req.seen;
        while (req.cursor < req.wanted.size() && req.wanted[req.cursor].first == req.seen) {
          answers()[req.wanted[req.cursor].second] = Answer{AnswerStatus::kOk, {}, other};
          ++req.cursor;
        }
        while (req.cursor < req.wanted.size() && req.wanted[req.cursor].first < req.seen) {
          ++req.cursor;  // index 0 never matches
        }
      }
      if (auto it = random_neighbor.find(x); it != random_neighbor.end()) {
        RandomNeighbor& rn = it->second;
        ++rn.seen;
        for (std::size_t q : rn.queries) {
          if (rng_.below(rn.seen) == 0) answers()[q] = Answer{AnswerStatus::kOk, {}, other};
        }
      }
    };

    for (const StreamUpdate& up : stream_.updates()) {
      ++position;
      while (!reservoirs.empty() && reservoirs.top().first == position) {
        const std::size_t q = reservoirs.top().second;
        reservoirs.pop();
        answers()[q] = Answer{AnswerStatus::kOk, {up.u, up.v}, 0};
        // P(no replacement through t) = position / t.
        const double u = 1.0 - rng_.unit();
        const double next = std::floor(static_cast<double>(position) / u) + 1.0;
        const std::uint64_t skip = next >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                                  : static_cast<std::uint64_t>(next);
        reservoirs.push({std::max(skip, position + 1), q});
      }
      see_endpoint(up.u, up.v);
      see_endpoint(up.v, up.u);
      if (auto it = pair.find(edge_key(up.u, up.v)); it != pair.end()) it->second = true;
    }

    for (std::size_t q = 0; q < plan_.size(); ++q) {
      const Query& query = plan_[q];
      if (query.kind == QueryKind::kDegree) answers()[q].value = degree[query.u];
      if (query.kind == QueryKind::kPair) answers()[q].value = pair[edge_key(query.u, query.v)] ? 1 : 0;
    }
    transcript_.reply.edge_count = position;
  }

  void run_turnstile() {
    const std::uint64_t n = n_;
    std::vector<std::pair<std::size_t, L0Sampler>> edge_sketches;
    std::unordered_map<Vertex, std::vector<std::pair<std::size_t, L0Sampler>>> neighbor_sketches;
    std::unordered_map<Vertex, std::int64_t> degree;
    std::unordered_map<std::uint64_t, bool> pair;

    for (std::size_t q = 0; q < plan_.size(); ++q) {
      const Query& query = plan_[q];
      switch (query.kind) {
        case QueryKind::kRandomEdge: {
          L0Sampler sketch(std::max<std::uint64_t>(n * n, 1), rng_(), options_.failure_exponent,
                           n);
          words_ += sketch.word_count();
          edge_sketches.emplace_back(q, std::move(sketch));
          break;
        }
        case QueryKind::kDegree:
          degree.emplace(query.u, 0);
          words_ += kCounterWords;
          break;
        case QueryKind::kNeighbor:
          throw Error(ErrorCode::kInvalidParams, "i-th neighbor queries need an insertion-only pass");
        case QueryKind::kRandomNeighbor: {
          L0Sampler sketch(std::max<std::uint64_t>(n, 1), rng_(), options_.failure_exponent, n);
          words_ += sketch.word_count() + 1;
          neighbor_sketches[query.u].emplace_back(q, std::move(sketch));
          break;
        }
        case QueryKind::kPair:
          pair.emplace(edge_key(query.u, query.v), false);
          words_ += kPairWords;
          break;
      }
    }

    std::int64_t net = 0;
    auto see_endpoint = [&](Vertex x, Vertex other, int delta) {
      if (auto it = degree.find(x); it != degree.end()) it->second += delta;
      if (auto it = neighbor_sketches.find(x); it != neighbor_sketches.end()) {
        for (auto& [q, sketch] : it->second) sketch.update(other, delta);
      }
    };
    for (const StreamUpdate& up : stream_.updates()) {
      net += up.delta;
      const Edge e = make_edge(up.u, up.v);
      const std::uint64_t index = static_cast<std::uint64_t>(e.u) * n + e.v;
      for (auto& [q, sketch] : edge_sketches) sketch.update(index, up.delta);
      see_endpoint(up.u, up.v, up.delta);
      see_endpoint(up.v, up.u, up.delta);
      if (auto it = pair.find(edge_key(up.u, up.v)); it != pair.end()) it->second = up.delta > 0;
    }

    for (auto& [q, sketch] : edge_sketches) {
      const auto index = sketch.sample();
      answers()[q] = index ? Answer{AnswerStatus::kOk,
                                    {static_cast<Vertex>(*index / n), static_cast<Vertex>(*index % n)},
                                    0}
                           : fail_answer();
    }
    for (auto& [v, list] : neighbor_sketches) {
      for (auto& [q, sketch] : list) {
        const auto index = sketch.sample();
        answers()[q] = index ? Answer{AnswerStatus::kOk, {}, *index} : fail_answer();
      }
    }
    for (std::size_t q = 0; q < plan_.size(); ++q) {
      const Query& query = plan_[q];
      if (query.kind == QueryKind::kDegree) {
        answers()[q].value = static_cast<std::uint64_t>(degree[query.u]);
      }
      if (query.kind == QueryKind::kPair) answers()[q].value = pair[edge_key(query.u, query.v)] ? 1 : 0;
    }
    transcript_.reply.edge_count = static_cast<std::uint64_t>(net);
  }

  const EdgeStream& stream_;
  std::span<const Query> plan_;
  PassOptions options_;
  Rng rng_;
  std::size_t n_;
  std::uint64_t words_ = 0;
  PassTranscript transcript_;
};

}  // namespace

PassTranscript execute_pass(const EdgeStream& stream, std::span<const Query> plan,
                            const PassOptions& options, std::uint64_t seed) {
  return PassState(stream, plan, options, seed).run();
}

}  // namespace streamcount
