// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "streamcount/clique.hpp"
#include "streamcount/exact.hpp"
#include "streamcount/generators.hpp"
#include "streamcount/l0_sampler.hpp"
#include "streamcount/subgraph_sampler.hpp"

namespace sc = streamcount;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

sc::Graph petersen_part(std::size_t size) {
  std::vector<sc::Vertex> keep(size);
  std::iota(keep.begin(), keep.end(), 0);
  return sc::induced_subgraph(sc::petersen_graph(), keep);
}

// -------------------------------------------------------------------------
// 1. Per-copy sampling probability.

Outcome per_copy_probability() {
  const std::vector<std::pair<std::string, sc::Graph>> hosts = {
      {"K3", sc::complete_graph(3)}, {"K4", sc::complete_graph(4)}, {"K5", sc::complete_graph(5)},
      {"C5", sc::cycle_graph(5)},    {"P6", petersen_part(6)},      {"P7", petersen_part(7)},
      {"P8", petersen_part(8)}};
  const std::vector<std::pair<std::string, sc::Graph>> patterns = {
      {"K2", sc::complete_graph(2)}, {"K3", sc::complete_graph(3)}, {"C5", sc::cycle_graph(5)},
      {"S2", sc::star_graph(2)},     {"K4", sc::complete_graph(4)}};
  const int trials = 1'000'000;
  std::size_t pairs = 0, copies = 0, outside_sigma = 0, closed_form_mismatch = 0, foreign = 0;
  double worst = 0;
  std::string worst_case;
  std::uint64_t seed = 1;
  for (const auto& [gname, host] : hosts) {
    for (const auto& [hname, h] : patterns) {
      const sc::Pattern pattern(h);
      const auto dist = sc::exact_copy_distribution(host, pattern);
      const sc::CopySet set = sc::enumerate_copies(host, h);
      const sc::Surd closed = sc::Surd::inverse_power(2 * host.edge_count(), pattern.rho());
      for (const sc::Copy& c : set.copies) {
        if (!dist.count(c) || !(dist.at(c) == closed)) ++closed_form_mismatch;
      }
      if (dist.size() != set.count()) ++closed_form_mismatch;

      sc::QueryOracle oracle(host, seed++);
      sc::Rng rng(seed++);
      std::map<sc::Copy, int> hits;
      for (int i = 0; i < trials; ++i) {
        const sc::SampleOutcome out = sc::sample_subgraph(oracle, pattern, rng);
        if (out.copy) hits[*out.copy]++;
      }
      for (const auto& [c, count] : hits) foreign += dist.count(c) ? 0 : 1;
      for (const auto& [c, prob] : dist) {
        const double p = prob.to_double();
        const double sigma = std::sqrt(trials * p * (1 - p));
        const double z = std::abs(hits[c] - trials * p) / sigma;
        if (z > worst) {
          worst = z;
          worst_case = gname + "/" + hname;
        }
        outside_sigma += z > 3 ? 1 : 0;
        ++copies;
      }
      ++pairs;
    }
  }
  std::ostringstream d;
  d << pairs << " pairs, " << copies << " copies, 1e6 trials each; outside 3 sigma=" << outside_sigma
    << " (worst z=" << fmt("%.2f", worst) << " at " << worst_case << "), foreign samples=" << foreign
    << ", closed-form mismatches=" << closed_form_mismatch;
  return {outside_sigma == 0 && foreign == 0 && closed_form_mismatch == 0, d.str()};
}

// -------------------------------------------------------------------------
// 2. Three-pass counting accuracy; 3. turnstile deletions.

struct CountTally {
  int within = 0;
  int exact_passes = 0;
  int zero = 0;
  double worst = 0;
};

CountTally count_trials(const std::function<sc::EdgeStream(std::uint64_t)>& make_stream, sc::StreamMode mode,
                        double truth) {
  const sc::Pattern k3(sc::complete_graph(3));
  CountTally t;
  for (std::uint64_t trial = 1; trial <= 20; ++trial) {
    sc::CountingConfig config;
    config.epsilon = 0.1;
    config.lower_bound = 10;
    config.mode = mode;
    const sc::Estimate e = sc::count_subgraph(k3, make_stream(trial), config, 1000 + trial);
    const double err = truth == 0 ? std::abs(e.value) : std::abs(e.value - truth) / truth;
    t.within += !e.aborted && err <= 0.1 ? 1 : 0;
    t.exact_passes += e.passes == 3 ? 1 : 0;
    t.zero += e.value == 0 && !e.aborted ? 1 : 0;
    t.worst = std::max(t.worst, err);
  }
  return t;
}

Outcome counting_accuracy() {
  const sc::Graph k5 = sc::complete_graph(5);
  const CountTally io = count_trials([&](std::uint64_t s) { return sc::insertion_stream(k5, s); },
                                     sc::StreamMode::kInsertionOnly, 10);
  const CountTally ts = count_trials([&](std::uint64_t s) { return sc::churn_stream(k5, 0.5, s); },
                                     sc::StreamMode::kTurnstile, 10);
  std::ostringstream d;
  d << "io within 10%=" << io.within << "/20 (worst " << fmt("%.3f", io.worst) << "), ts within 10%=" << ts.within
    << "/20 (worst " << fmt("%.3f", ts.worst) << "), 3 passes in " << io.exact_passes + ts.exact_passes << "/40";
  return {io.within >= 18 && ts.within >= 18 && io.exact_passes == 20 && ts.exact_passes == 20, d.str()};
}

Outcome turnstile_deletions() {
  const sc::Graph k5 = sc::complete_graph(5);
  // Removing a Hamiltonian cycle of K5 leaves the (triangle-free) pentagram.
  const std::vector<sc::Edge> cycle = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}};
  auto deleted = [&](std::uint64_t s) { return sc::deletion_stream(k5, cycle, s); };
  auto restored = [&](std::uint64_t s) {
    const sc::EdgeStream base = deleted(s);
    std::vector<sc::StreamUpdate> updates = base.updates();
    std::vector<sc::Edge> back = cycle;
    sc::Rng rng(s);
    for (std::size_t i = back.size(); i > 1; --i) std::swap(back[i - 1], back[rng.below(i)]);
    for (const sc::Edge& e : back) updates.push_back({e.u, e.v, +1});
    return sc::EdgeStream(5, std::move(updates));
  };
  const bool free_ok = sc::enumerate_copies(deleted(1).final_graph(), sc::complete_graph(3)).count() == 0;
  const CountTally gone = count_trials(deleted, sc::StreamMode::kTurnstile, 0);
  const CountTally back = count_trials(restored, sc::StreamMode::kTurnstile, 10);
  std::ostringstream d;
  d << "final graph triangle-free=" << (free_ok ? "yes" : "no") << ", estimate 0 in " << gone.zero
    << "/20; after reinsertion within 10%=" << back.within << "/20 (worst " << fmt("%.3f", back.worst)
    << "), 3 passes in " << gone.exact_passes + back.exact_passes << "/40";
  return {free_ok && gone.zero == 20 && back.within >= 18 && gone.exact_passes == 20 && back.exact_passes == 20,
          d.str()};
}

// -------------------------------------------------------------------------
// 4. Query sampler vs streaming sampler.

using Histogram = std::map<std::optional<sc::Copy>, std::uint64_t>;

double tvd(const Histogram& a, const Histogram& b, double na, double nb) {
  std::set<std::optional<sc::Copy>> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  double sum = 0;
  for (const auto& k : keys) {
    const double pa = a.count(k) ? static_cast<double>(a.at(k)) / na : 0;
    const double pb = b.count(k) ? static_cast<double>(b.at(k)) / nb : 0;
    sum += std::abs(pa - pb);
  }
  return sum / 2;
}

Outcome transformation_differential() {
  const std::vector<std::tuple<std::string, sc::Graph, sc::Graph>> corpus = {
      {"K4/K3", sc::complete_graph(4), sc::complete_graph(3)},
      {"K5/K3", sc::complete_graph(5), sc::complete_graph(3)},
      {"C5/C5", sc::cycle_graph(5), sc::cycle_graph(5)},
      {"P8/S2", petersen_part(8), sc::star_graph(2)},
      {"G(9,18)/C4", sc::random_gnm(9, 18, 4), sc::cycle_graph(4)}};
  const std::size_t runs = 100'000;
  const std::size_t batch = 10'000;
  double worst = 0;
  std::string detail;
  for (const auto& [name, host, h] : corpus) {
    const sc::Pattern pattern(h);
    for (sc::StreamMode mode : {sc::StreamMode::kInsertionOnly, sc::StreamMode::kTurnstile}) {
      const bool ts = mode == sc::StreamMode::kTurnstile;
      Histogram query, stream;
      sc::QueryOracle oracle(host, 3, ts ? sc::OracleModel::kRelaxed : sc::OracleModel::kExact);
      sc::Rng rng(4);
      for (std::size_t i = 0; i < runs; ++i) query[sc::sample_subgraph(oracle, pattern, rng).copy]++;
      for (std::size_t b = 0; b < runs / batch; ++b) {
        const sc::EdgeStream s = ts ? sc::churn_stream(host, 0.5, 100 + b) : sc::insertion_stream(host, 100 + b);
        const sc::SubgRun run = sc::stream_subg(pattern, s, mode, batch, 200 + b);
        for (const sc::SampleOutcome& o : run.outcomes) stream[o.copy]++;
      }
      const double d = tvd(query, stream, runs, runs);
      worst = std::max(worst, d);
      detail += (detail.empty() ? "" : ", ") + name + (ts ? " ts=" : " io=") + fmt("%.4f", d);
    }
  }
  return {worst <= 0.05, "TVD " + detail + "; max " + fmt("%.4f", worst)};
}

// -------------------------------------------------------------------------
// 5. l0-sampler contract.

Outcome l0_contract() {
  const std::uint64_t u = 64;
  std::size_t wrong = 0, checks = 0;
  // Every singleton left after inserting everything and deleting the rest.
  for (std::uint64_t i = 0; i < u; ++i) {
    sc::L0Sampler s(u, 11 + i);
    for (std::uint64_t j = 0; j < u; ++j) s.update(j, 1);
    for (std::uint64_t j = 0; j < u; ++j) {
      if (j != i) s.update(j, -1);
    }
    wrong += s.sample() != std::optional<std::uint64_t>(i);
    ++checks;
  }
  // Every ordered pair {i, j} with j deleted again.
  for (std::uint64_t i = 0; i < u; ++i) {
    for (std::uint64_t j = 0; j < u; ++j) {
      if (i == j) continue;
      sc::L0Sampler s(u, 1000 + i * u + j);
      s.update(i, 1);
      s.update(j, 3);
      s.update(j, -3);
      wrong += s.sample() != std::optional<std::uint64_t>(i);
      ++checks;
    }
  }
  // Everything deleted.
  {
    sc::L0Sampler s(u, 5);
    for (std::uint64_t j = 0; j < u; ++j) s.update(j, 2);
    for (std::uint64_t j = 0; j < u; ++j) s.update(j, -2);
    wrong += s.sample().has_value();
    ++checks;
  }

  // Uniformity over supports of size 2..32, fresh sketch seed per draw.
  const int draws = 100'000;
  double worst = 0;
  std::size_t failures = 0;
  for (std::uint64_t k = 2; k <= 32; ++k) {
    sc::Rng pick(k);
    std::vector<std::uint64_t> all(u);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[pick.below(i)]);
    const std::vector<std::uint64_t> support(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::map<std::uint64_t, int> hits;
    int ok = 0;
    for (int d = 0; d < draws; ++d) {
      sc::L0Sampler s(u, sc::derive_seed(k, static_cast<std::uint64_t>(d)));
      for (std::uint64_t x : support) s.update(x, 1);
      if (const auto got = s.sample()) {
        hits[*got]++;
        ++ok;
      } else {
        ++failures;
      }
    }
    double sum = 0;
    for (std::uint64_t x : support) sum += std::abs(static_cast<double>(hits[x]) / ok - 1.0 / static_cast<double>(k));
    for (const auto& [x, c] : hits) {
      if (std::find(support.begin(), support.end(), x) == support.end()) {
        sum += static_cast<double>(c) / ok;
        ++wrong;
      }
    }
    worst = std::max(worst, sum / 2);
  }

  // Linearity: permuted updates give byte-identical state.
  std::size_t differ = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    sc::Rng rng(trial);
    std::vector<std::pair<std::uint64_t, std::int64_t>> updates;
    for (int i = 0; i < 200; ++i) {
      updates.emplace_back(rng.below(u), static_cast<std::int64_t>(rng.below(7)) - 3);
    }
    sc::L0Sampler a(u, 99), b(u, 99);
    for (const auto& [x, d] : updates) a.update(x, d);
    for (std::size_t i = updates.size(); i > 1; --i) std::swap(updates[i - 1], updates[rng.below(i)]);
    for (const auto& [x, d] : updates) b.update(x, d);
    differ += a == b ? 0 : 1;
  }
  std::ostringstream d;
  d << "deletion checks wrong=" << wrong << "/" << checks << ", uniformity max TVD=" << fmt("%.4f", worst)
    << " (failed draws " << failures << "), permuted states differing=" << differ << "/50";
  return {wrong == 0 && worst <= 0.05 && differ == 0, d.str()};
}

// -------------------------------------------------------------------------
// 6. Saturated clique counting is exact.

sc::Graph graph_from_mask(std::size_t n, std::uint32_t mask) {
  std::vector<sc::Edge> edges;
  std::size_t bit = 0;
  for (sc::Vertex a = 0; a < n; ++a) {
    for (sc::Vertex b = a + 1; b < n; ++b, ++bit) {
      if (mask >> bit & 1U) edges.push_back({a, b});
    }
  }
  return sc::Graph(n, edges);
}

Outcome saturated_exactness() {
  std::size_t graphs = 0, wrong = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::uint32_t masks = 1U << (n * (n - 1) / 2);
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      const sc::Graph g = graph_from_mask(n, mask);
      ++graphs;
      for (std::size_t r : {3, 4}) {
        sc::CliqueConfig config;
        config.params.r = r;
        config.params.lambda = std::max<std::size_t>(1, sc::degeneracy(g));
        config.params.scaling.saturate = true;
        config.lower_bound = 1;
        const double expected =
            r > n ? 0.0 : static_cast<double>(sc::enumerate_copies(g, sc::complete_graph(r)).count());
        const sc::CliqueEstimate e = sc::stream_count_clique(sc::insertion_stream(g, mask), config, mask);
        wrong += e.estimate.value == expected && !e.estimate.aborted ? 0 : 1;
      }
    }
  }
  return {wrong == 0, std::to_string(graphs) + " labeled graphs on 1..6 vertices, r in {3,4}: mismatches=" +
                          std::to_string(wrong)};
}

// -------------------------------------------------------------------------
// 7. Statistical clique counting; 8. query-model variant.

struct CliqueCase {
  std::string name;
  sc::Graph graph;
  std::size_t r;
  std::size_t lambda;
  double truth;
  double tau_next;  // tau_2
  double tau_vertex;  // tau_1 at L = truth
  double sample;
  double activity_sample;
};

std::vector<CliqueCase> clique_cases() {
  return {{"K5 r=3", sc::complete_graph(5), 3, 4, 10, 16, 64, 5.8e-4, 1e-5},
          {"K4 r=4", sc::complete_graph(4), 4, 3, 1, 18, 48, 5e-4, 1e-7}};
}

sc::CliqueParams tuned(const CliqueCase& c) {
  sc::CliqueParams p;
  p.r = c.r;
  p.lambda = c.lambda;
  p.epsilon = 0.1;
  p.scaling.tau = c.tau_next / p.tau(2);
  p.scaling.tau_one = 1.0;
  p.scaling.tau_one = c.tau_vertex / p.tau_one(c.truth);
  p.scaling.sample = c.sample;
  p.scaling.activity_sample = c.activity_sample;
  p.scaling.trials = 0.05;
  return p;
}

constexpr std::size_t kMedianInstances = 21;

Outcome clique_statistical() {
  bool pass = true;
  std::string detail;
  for (const CliqueCase& c : clique_cases()) {
    sc::CliqueConfig config;
    config.params = tuned(c);
    config.lower_bound = c.truth;
    config.instances = kMedianInstances;
    int within = 0;
    std::size_t max_passes = 0;
    for (std::uint64_t trial = 1; trial <= 20; ++trial) {
      const sc::CliqueEstimate e =
          sc::stream_count_clique(sc::insertion_stream(c.graph, trial), config, 3000 + trial);
      within += !e.estimate.aborted && std::abs(e.estimate.value - c.truth) <= 0.1 * c.truth ? 1 : 0;
      max_passes = std::max(max_passes, e.estimate.passes);
    }
    const double two_m = 2.0 * static_cast<double>(c.graph.edge_count());
    const double s2 = sc::next_sample_size(two_m, config.params.tau(2), (1 - 0.05) * c.truth,
                                           sc::approx_beta(c.r), sc::approx_gamma(0.1, c.r), c.sample);
    pass = pass && within >= 18 && max_passes <= 5 * c.r;
    detail += (detail.empty() ? "" : "; ") + c.name + ": within 10%=" + std::to_string(within) +
              "/20, max passes=" + std::to_string(max_passes) + " (<= " + std::to_string(5 * c.r) +
              "), s_2=" + fmt("%.0f", s2) + ", instances=" + std::to_string(kMedianInstances);
  }
  return {pass, detail};
}

Outcome query_model_contract() {
  bool pass = true;
  std::string detail;
  for (const CliqueCase& c : clique_cases()) {
    const sc::CliqueParams p = tuned(c);
    const double big = 8 * c.truth;
    int below = 0;
    double largest = 0;
    for (std::uint64_t trial = 1; trial <= 20; ++trial) {
      sc::QueryOracle oracle(c.graph, trial);
      const sc::CliqueEstimate e =
          sc::query_model_count_clique(oracle, p, big, c.graph.edge_count(), 5000 + trial, kMedianInstances);
      below += !e.estimate.aborted && e.estimate.value < big ? 1 : 0;
      largest = std::max(largest, e.estimate.value);
    }
    pass = pass && below >= 18;
    detail += (detail.empty() ? "" : "; ") + c.name + ": value < " + fmt("%g", big) + " in " +
              std::to_string(below) + "/20 (largest " + fmt("%.3f", largest) + ")";
  }
  return {pass, detail};
}

// -------------------------------------------------------------------------
// 9. Resource shape.

Outcome resource_shape() {
  const sc::Graph g = sc::random_gnm(20, 40, 7);
  const sc::Pattern k3(sc::complete_graph(3));
  const std::vector<std::uint64_t> ks = {500, 1000, 2000, 4000};
  std::map<sc::StreamMode, std::vector<std::vector<sc::PassStats>>> runs;
  for (sc::StreamMode mode : {sc::StreamMode::kInsertionOnly, sc::StreamMode::kTurnstile}) {
    const sc::EdgeStream s =
        mode == sc::StreamMode::kTurnstile ? sc::churn_stream(g, 0.5, 3) : sc::insertion_stream(g, 3);
    for (std::uint64_t k : ks) {
      sc::CountingConfig config;
      config.mode = mode;
      config.repetitions = k;
      runs[mode].push_back(sc::count_subgraph(k3, s, config, 9).per_pass);
    }
  }
  auto queries = [](const sc::PassStats& p) { return std::accumulate(p.queries.begin(), p.queries.end(), 0.0); };
  bool linear = true;
  double worst_growth = 0;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double io_bits = 0, ts_bits = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      for (sc::StreamMode mode : {sc::StreamMode::kInsertionOnly, sc::StreamMode::kTurnstile}) {
        const auto& cur = runs[mode][i];
        if (cur.size() != 3) return {false, "expected 3 passes"};
        if (i > 0) {
          const auto& prev = runs[mode][i - 1];
          const double bits_growth = static_cast<double>(cur[p].bits_tracked) / static_cast<double>(prev[p].bits_tracked);
          const double query_growth = queries(cur[p]) / queries(prev[p]);
          worst_growth = std::max(worst_growth, bits_growth / query_growth);
          linear = linear && bits_growth <= query_growth * 1.05;
        }
      }
      io_bits += static_cast<double>(runs[sc::StreamMode::kInsertionOnly][i][p].bits_tracked);
      ts_bits += static_cast<double>(runs[sc::StreamMode::kTurnstile][i][p].bits_tracked);
    }
    ratios.push_back(ts_bits / io_bits);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const bool bounded = *hi / *lo <= 1.25;
  std::string r;
  for (double x : ratios) r += (r.empty() ? "" : ",") + fmt("%.1f", x);
  return {linear && bounded, "k=500..4000 doubling: worst bits growth / query growth=" + fmt("%.3f", worst_growth) +
                                 " (<= 1.05); ts/io bits ratio=" + r + " (spread " + fmt("%.3f", *hi / *lo) +
                                 " <= 1.25)"};
}

struct Criterion {
  int id;
  double limit_seconds;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, 300, per_copy_probability}, {2, 600, counting_accuracy}, {3, 300, turnstile_deletions},
      {4, 900, transformation_differential}, {5, 300, l0_contract}, {6, 120, saturated_exactness},
      {7, 600, clique_statistical}, {8, 300, query_model_contract}, {9, 300, resource_shape}};
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = seconds <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %d: %s  %s  [%.1fs, limit %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds, c.limit_seconds, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
