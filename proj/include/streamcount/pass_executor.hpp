#pragma once

#include <cstdint>
#include <span>

#include "streamcount/query.hpp"
#include "streamcount/stream.hpp"

namespace streamcount {

struct PassOptions {
  StreamMode mode = StreamMode::kInsertionOnly;
  // Per-sketch failure exponent c in turnstile mode: failure below n^-c.
  double failure_exponent = 2.0;
};

struct PassTranscript {
  Reply reply;
  QueryCounts queries{};
  // Upper bound on the emulator state: 64 bits per word held.
  std::uint64_t bits_tracked = 0;
};

// Answers a batch of queries in one sequential pass over the stream.
//
// Insertion-only: reservoir sampling for random edges, counters for degrees,
// per-vertex incidence counters for i-th neighbors, flags for pairs.
// Turnstile: an l0 sketch per random edge and per random neighbor, signed
// counters for degrees, last-update flags for pairs. i-th neighbor queries
// are rejected in turnstile mode.
//
// Throws Error(kMalformedStream) for an insertion-only pass over a stream with
// deletions, and Error(kInvalidParams) for unsupported queries.
PassTranscript execute_pass(const EdgeStream& stream, std::span<const Query> plan,
                            const PassOptions& options, std::uint64_t seed);

}  // namespace streamcount
