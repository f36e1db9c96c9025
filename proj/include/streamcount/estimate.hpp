#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "streamcount/query.hpp"

namespace streamcount {

struct PassStats {
  QueryCounts queries{};
  std::uint64_t bits_tracked = 0;
};

struct Estimate {
  double value = 0;
  bool aborted = false;
  std::size_t passes = 0;
  QueryCounts queries{};
  std::uint64_t bits_tracked = 0;  // max over passes
  std::uint64_t edge_count = 0;
  std::uint64_t repetitions = 0;
  std::uint64_t successes = 0;
  std::vector<PassStats> per_pass;
};

}  // namespace streamcount
