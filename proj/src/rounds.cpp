#include "streamcount/rounds.hpp"

#include <algorithm>

#include "streamcount/error.hpp"
#include "streamcount/random.hpp"

namespace streamcount {

const char* query_kind_name(QueryKind kind) {
  switch (kind) {
    case QueryKind::kRandomEdge: return "f1";
    case QueryKind::kDegree: return "f2";
    case QueryKind::kNeighbor: return "f3";
    case QueryKind::kRandomNeighbor: return "f3r";
    case QueryKind::kPair: return "f4";
  }
  return "?";
}

std::uint64_t RunStats::max_bits() const {
  std::uint64_t best = 0;
  for (const PassStats& p : passes) best = std::max(best, p.bits_tracked);
  return best;
}

QueryCounts RunStats::total_queries() const {
  QueryCounts total{};
  for (const PassStats& p : passes) {
    for (std::size_t k = 0; k < kQueryKinds; ++k) total[k] += p.queries[k];
  }
  return total;
}

namespace {

void check_budget(const RoundDriver& driver, std::size_t passes) {
  if (passes > driver.declared_rounds()) {
    throw Error(ErrorCode::kPassBudgetExceeded,
                "driver declared " + std::to_string(driver.declared_rounds()) + " rounds");
  }
}

}  // namespace

RunStats run_rounds(RoundDriver& driver, const EdgeStream& stream, const PassOptions& options,
                    std::uint64_t seed) {
  RunStats stats;
  while (auto plan = driver.next_plan()) {
    check_budget(driver, stats.passes.size() + 1);
    PassTranscript transcript =
        execute_pass(stream, *plan, options, derive_seed(seed, stats.passes.size()));
    stats.passes.push_back({transcript.queries, transcript.bits_tracked});
    driver.deliver(std::move(transcript.reply));
  }
  return stats;
}

RunStats run_on_oracle(RoundDriver& driver, QueryOracle& oracle) {
  RunStats stats;
  const Graph& g = oracle.graph();
  while (auto plan = driver.next_plan()) {
    check_budget(driver, stats.passes.size() + 1);
    PassStats pass;
    Reply reply;
    reply.edge_count = oracle.edge_count();
    reply.answers.reserve(plan->size());
    for (const Query& q : *plan) {
      ++pass.queries[static_cast<std::size_t>(q.kind)];
      Answer a;
      switch (q.kind) {
        case QueryKind::kRandomEdge:
          if (g.edge_count() == 0) {
            a.status = AnswerStatus::kFail;
          } else if (auto e = oracle.random_edge()) {
            a.edge = *e;
          } else {
            a.status = AnswerStatus::kFail;
          }
          break;
        case QueryKind::kDegree:
          a.value = oracle.degree(q.u);
          break;
        case QueryKind::kNeighbor:
          if (q.u < g.vertex_count() && q.index >= 1 && q.index <= g.degree(q.u)) {
            a.value = oracle.neighbor(q.u, q.index);
          } else {
            a.status = AnswerStatus::kOutOfRange;
          }
          break;
        case QueryKind::kRandomNeighbor:
          if (auto w = oracle.random_neighbor(q.u)) {
            a.value = *w;
          } else {
            a.status = AnswerStatus::kFail;
          }
          break;
        case QueryKind::kPair:
          a.value = oracle.pair(q.u, q.v) ? 1 : 0;
          break;
      }
      reply.answers.push_back(a);
    }
    stats.passes.push_back(pass);
    driver.deliver(std::move(reply));
  }
  return stats;
}

}  // namespace streamcount
