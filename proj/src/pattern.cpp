#include "streamcount/pattern.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "streamcount/error.hpp"

namespace streamcount {
namespace {

using Mask = std::uint32_t;

void require_no_isolated(const Graph& h) {
  for (Vertex v = 0; v < h.vertex_count(); ++v) {
    if (h.degree(v) == 0) {
      throw Error(ErrorCode::kIsolatedVertex, "vertex " + std::to_string(v) + " has no edges");
    }
  }
}

// Dense tableau simplex for max c.y s.t. A y <= b, y >= 0 with b >= 0, so the
// slack basis is feasible. Bland's rule guarantees termination.
Rational maximize_packing(std::size_t vars, const std::vector<std::vector<Rational>>& a,
                          const std::vector<Rational>& b, const std::vector<Rational>& c) {
  const std::size_t rows = a.size();
  const std::size_t cols = vars + rows;
  std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(cols + 1));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < vars; ++j) t[i][j] = a[i][j];
    t[i][vars + i] = 1;
    t[i][cols] = b[i];
    basis[i] = vars + i;
  }
  // Reduced costs c_j - z_j, and the objective value.
  std::vector<Rational> reduced(cols, 0);
  for (std::size_t j = 0; j < vars; ++j) reduced[j] = c[j];
  Rational value = 0;

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (reduced[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) return value;

    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rational ratio = t[i][cols] / t[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows) throw Error(ErrorCode::kInvalidParams, "unbounded packing LP");

    const Rational pivot = t[leave][enter];
    for (auto& x : t[leave]) x /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational factor = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= factor * t[leave][j];
    }
    const Rational factor = reduced[enter];
    for (std::size_t j = 0; j < cols; ++j) reduced[j] -= factor * t[leave][j];
    value += factor * t[leave][cols];
    basis[leave] = enter;
  }
}

struct SubsetTables {
  std::size_t n = 0;
  std::vector<Mask> adjacency;          // neighbor mask per vertex
  std::vector<std::uint64_t> cycles;    // Hamiltonian cycles of H[S], |S| >= 3
  std::vector<std::uint64_t> centers;   // star centers spanning S, |S| >= 2
};

SubsetTables build_tables(const Graph& h) {
  SubsetTables tables;
  const std::size_t n = h.vertex_count();
  tables.n = n;
  tables.adjacency.assign(n, 0);
  for (const Edge& e : h.edges()) {
    tables.adjacency[e.u] |= Mask{1} << e.v;
    tables.adjacency[e.v] |= Mask{1} << e.u;
  }
  const Mask full = (Mask{1} << n) - 1;

  // paths[mask][end]: simple paths from the lowest vertex of mask covering mask.
  std::vector<std::vector<std::uint64_t>> paths(full + 1, std::vector<std::uint64_t>(n, 0));
  for (std::size_t s = 0; s < n; ++s) paths[Mask{1} << s][s] = 1;
  for (Mask mask = 1; mask <= full; ++mask) {
    const auto start = static_cast<std::size_t>(std::countr_zero(mask));
    for (std::size_t end = 0; end < n; ++end) {
      const std::uint64_t count = paths[mask][end];
      if (count == 0) continue;
      Mask next = tables.adjacency[end] & ~mask & ~((Mask{1} << (start + 1)) - 1);
      while (next != 0) {
        const auto w = static_cast<std::size_t>(std::countr_zero(next));
        next &= next - 1;
        paths[mask | (Mask{1} << w)][w] += count;
      }
    }
  }

  tables.cycles.assign(full + 1, 0);
  tables.centers.assign(full + 1, 0);
  for (Mask mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    const auto start = static_cast<std::size_t>(std::countr_zero(mask));
    if (size >= 3) {
      std::uint64_t closed = 0;
      for (std::size_t end = 0; end < n; ++end) {
        if (end != start && (tables.adjacency[end] >> start & 1U)) closed += paths[mask][end];
      }
      tables.cycles[mask] = closed / 2;
    }
    if (size >= 2) {
      std::uint64_t count = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (!(mask >> c & 1U)) continue;
        const Mask others = mask & ~(Mask{1} << c);
        if ((tables.adjacency[c] & others) == others) ++count;
      }
      tables.centers[mask] = count;
    }
  }
  return tables;
}

// A piece type: (is_star, size) with size = cycle length or petal count.
using PieceType = std::pair<bool, std::size_t>;
using TypeList = std::vector<PieceType>;  // sorted: cycles first, ascending

bool admits(const SubsetTables& tables, Mask subset, const PieceType& type) {
  const auto size = static_cast<std::size_t>(std::popcount(subset));
  if (!type.first) return size == type.second && tables.cycles[subset] > 0;
  return size == type.second + 1 && tables.centers[subset] > 0;
}

std::uint64_t ways(const SubsetTables& tables, Mask subset, const PieceType& type) {
  const auto size = static_cast<std::size_t>(std::popcount(subset));
  if (!type.first) return size == type.second && size >= 3 ? tables.cycles[subset] : 0;
  return size == type.second + 1 ? tables.centers[subset] : 0;
}

// Every multiset of piece types that partitions mask.
const std::set<TypeList>& achievable(const SubsetTables& tables, Mask mask,
                                     std::map<Mask, std::set<TypeList>>& memo) {
  if (auto it = memo.find(mask); it != memo.end()) return it->second;
  std::set<TypeList> result;
  if (mask == 0) {
    result.insert(TypeList{});
  } else {
    const Mask low = mask & (0 - mask);
    const Mask rest = mask & ~low;
    // Submasks of rest, each joined with the lowest vertex.
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
      const Mask subset = sub | low;
      const auto size = static_cast<std::size_t>(std::popcount(subset));
      std::vector<PieceType> options;
      if (size >= 3 && size % 2 == 1 && tables.cycles[subset] > 0) options.push_back({false, size});
      if (size >= 2 && tables.centers[subset] > 0) options.push_back({true, size - 1});
      if (!options.empty()) {
        const auto& tails = achievable(tables, mask & ~subset, memo);
        for (const PieceType& option : options) {
          for (const TypeList& tail : tails) {
            TypeList types = tail;
            types.insert(std::lower_bound(types.begin(), types.end(), option), option);
            result.insert(std::move(types));
          }
        }
      }
      if (sub == 0) break;
    }
  }
  return memo.emplace(mask, std::move(result)).first->second;
}

Rational type_cost(const TypeList& types) {
  Rational cost = 0;
  for (const auto& [is_star, size] : types) {
    cost += is_star ? Rational(size) : Rational(size, 2);
  }
  return cost;
}

std::size_t cycle_count(const TypeList& types) {
  return static_cast<std::size_t>(
      std::count_if(types.begin(), types.end(), [](const PieceType& t) { return !t.first; }));
}

// Ordered set sequences matching types[index..], with multiplicities.
std::uint64_t count_arrangements(const SubsetTables& tables, const TypeList& types,
                                 std::size_t index, Mask available) {
  if (index == types.size()) return available == 0 ? 1 : 0;
  std::uint64_t total = 0;
  for (Mask sub = available;; sub = (sub - 1) & available) {
    if (sub != 0) {
      const std::uint64_t here = ways(tables, sub, types[index]);
      if (here != 0) total += here * count_arrangements(tables, types, index + 1, available & ~sub);
    }
    if (sub == 0) break;
  }
  return total;
}

std::vector<Vertex> mask_vertices(Mask mask) {
  std::vector<Vertex> out;
  while (mask != 0) {
    out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Some cyclic ordering of subset that is a cycle in H.
std::vector<Vertex> hamiltonian_cycle(const SubsetTables& tables, Mask subset) {
  std::vector<Vertex> order{static_cast<Vertex>(std::countr_zero(subset))};
  std::vector<Vertex> best;
  auto extend = [&](auto&& self, Mask used) -> bool {
    if (used == subset) {
      return (tables.adjacency[order.back()] >> order.front() & 1U) != 0;
    }
    Mask next = tables.adjacency[order.back()] & subset & ~used;
    while (next != 0) {
      const auto w = static_cast<Vertex>(std::countr_zero(next));
      next &= next - 1;
      order.push_back(w);
      if (self(self, used | (Mask{1} << w))) return true;
      order.pop_back();
    }
    return false;
  };
  extend(extend, Mask{1} << order.front());
  return order;
}

// Concrete pieces realizing the given types on mask (types in canonical order).
bool realize(const SubsetTables& tables, const TypeList& types, std::size_t index, Mask available,
             std::vector<Piece>& out) {
  if (index == types.size()) return available == 0;
  for (Mask sub = available;; sub = (sub - 1) & available) {
    if (sub != 0 && admits(tables, sub, types[index])) {
      Piece piece;
      if (!types[index].first) {
        piece.kind = PieceKind::kOddCycle;
        piece.vertices = hamiltonian_cycle(tables, sub);
      } else {
        piece.kind = PieceKind::kStar;
        for (Vertex c : mask_vertices(sub)) {
          const Mask others = sub & ~(Mask{1} << c);
          if ((tables.adjacency[c] & others) == others) {
            piece.vertices.push_back(c);
            for (Vertex p : mask_vertices(others)) piece.vertices.push_back(p);
            break;
          }
        }
      }
      out.push_back(std::move(piece));
      if (realize(tables, types, index + 1, available & ~sub, out)) return true;
      out.pop_back();
    }
    if (sub == 0) break;
  }
  return false;
}

}  // namespace

Rational fractional_edge_cover(const Graph& h) {
  require_no_isolated(h);
  const std::size_t n = h.vertex_count();
  std::vector<std::vector<Rational>> a;
  a.reserve(h.edge_count());
  for (const Edge& e : h.edges()) {
    std::vector<Rational> row(n, 0);
    row[e.u] = 1;
    row[e.v] = 1;
    a.push_back(std::move(row));
  }
  const std::vector<Rational> b(h.edge_count(), 1);
  const std::vector<Rational> c(n, 1);
  return maximize_packing(n, a, b, c);
}

Pattern::Pattern(Graph h) : graph_(std::move(h)) {
  const std::size_t n = graph_.vertex_count();
  if (n > kMaxPatternVertices) {
    throw Error(ErrorCode::kSizeLimitExceeded,
                "patterns are limited to " + std::to_string(kMaxPatternVertices) + " vertices");
  }
  if (n == 0) throw Error(ErrorCode::kInvalidParams, "empty pattern");
  require_no_isolated(graph_);

  const SubsetTables tables = build_tables(graph_);
  const Mask full = (Mask{1} << n) - 1;
  std::map<Mask, std::set<TypeList>> memo;
  const auto& candidates = achievable(tables, full, memo);

  const TypeList* best = nullptr;
  Rational best_cost;
  for (const TypeList& types : candidates) {
    const Rational cost = type_cost(types);
    if (best == nullptr) {
      best = &types;
      best_cost = cost;
      continue;
    }
    if (cost != best_cost) {
      if (cost < best_cost) {
        best = &types;
        best_cost = cost;
      }
      continue;
    }
    const std::size_t cycles = cycle_count(types);
    const std::size_t best_cycles = cycle_count(*best);
    if (cycles != best_cycles) {
      if (cycles < best_cycles) best = &types;
      continue;
    }
    // Size vector: cycle lengths then petal counts, as already sorted.
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> best_sizes;
    for (const auto& t : types) sizes.push_back(t.second);
    for (const auto& t : *best) best_sizes.push_back(t.second);
    if (sizes < best_sizes) best = &types;
  }

  rho_ = best_cost;
  decomposition_count_ = count_arrangements(tables, *best, 0, full);
  realize(tables, *best, 0, full, pieces_);
}

std::vector<std::size_t> Pattern::cycle_lengths() const {
  std::vector<std::size_t> out;
  for (const Piece& p : pieces_) {
    if (p.kind == PieceKind::kOddCycle) out.push_back(p.size());
  }
  return out;
}

std::vector<std::size_t> Pattern::star_petals() const {
  std::vector<std::size_t> out;
  for (const Piece& p : pieces_) {
    if (p.kind == PieceKind::kStar) out.push_back(p.size());
  }
  return out;
}

bool is_canonical_cycle(std::span<const Vertex> seq, const EdgeSet& edges,
                        const VertexOrder& order) {
  const std::size_t k = seq.size();
  if (k < 3) return false;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (seq[i] == seq[j]) return false;
    }
    if (!edges.contains(seq[i], seq[(i + 1) % k])) return false;
  }
  for (std::size_t i = 1; i < k; ++i) {
    if (!order.precedes(seq[0], seq[i])) return false;
  }
  return order.precedes(seq[k - 1], seq[1]);
}

bool is_canonical_star(std::span<const Vertex> seq, const EdgeSet& edges,
                       const VertexOrder& order) {
  if (seq.size() < 2) return false;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (!edges.contains(seq[0], seq[i])) return false;
    if (i >= 2 && !order.precedes(seq[i - 1], seq[i])) return false;
  }
  return true;
}

}  // namespace streamcount
