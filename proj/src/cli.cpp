#include "streamcount/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "streamcount/clique.hpp"
#include "streamcount/error.hpp"
#include "streamcount/exact.hpp"
#include "streamcount/generators.hpp"
#include "streamcount/graph.hpp"
#include "streamcount/stream.hpp"
#include "streamcount/subgraph_sampler.hpp"

namespace streamcount {

void RunRecord::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : fields_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  fields_.emplace_back(key, value);
}

void RunRecord::set(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  set(key, std::string(buf));
}

void RunRecord::set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

std::optional<std::string> RunRecord::get(const std::string& key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string RunRecord::to_line() const {
  std::string line;
  for (const auto& [k, v] : fields_) {
    if (!line.empty()) line += ' ';
    line += k + '=' + v;
  }
  return line;
}

RunRecord RunRecord::parse(const std::string& line) {
  RunRecord record;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::kParseError, "bad token '" + token + "'");
    record.set(token.substr(0, eq), token.substr(eq + 1));
  }
  return record;
}

namespace {

struct Seed {
  std::optional<std::uint64_t> flag;

  std::uint64_t resolve() const {
    if (flag) return *flag;
    if (const char* env = std::getenv("STREAMCOUNT_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') throw Error(ErrorCode::kInvalidParams, "STREAMCOUNT_SEED is not a number");
      return v;
    }
    return 1;
  }
};

void add_queries(RunRecord& record, const QueryCounts& counts) {
  for (std::size_t k = 0; k < kQueryKinds; ++k) {
    record.set(std::string("queries.") + query_kind_name(static_cast<QueryKind>(k)), counts[k]);
  }
}

void add_exact(RunRecord& record, double estimate, std::optional<std::uint64_t> exact) {
  if (!exact) return;
  record.set("exact", *exact);
  const double truth = static_cast<double>(*exact);
  const double err = truth == 0 ? (estimate == 0 ? 0.0 : INFINITY) : std::abs(estimate - truth) / truth;
  record.set("relative_error", err);
}

void write_passes(std::ostream& out, const std::string& command, const Estimate& e) {
  for (std::size_t p = 0; p < e.per_pass.size(); ++p) {
    RunRecord line;
    line.set("record", command + ".pass");
    line.set("pass", static_cast<std::uint64_t>(p + 1));
    add_queries(line, e.per_pass[p].queries);
    line.set("bits", e.per_pass[p].bits_tracked);
    out << line.to_line() << '\n';
  }
}

// Emits the graph to a file or to out.
void emit_graph(const Graph& g, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_graph(out, g);
  } else {
    save_graph(path, g);
  }
}

void emit_stream(const EdgeStream& s, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_stream(out, s);
  } else {
    save_stream(path, s);
  }
}

std::size_t to_size(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw Error(ErrorCode::kInvalidParams, key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

// Positional parameter names per generator kind.
const std::map<std::string, std::vector<std::string>>& generator_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"complete", {"n"}},        {"cycle", {"n"}},
      {"path", {"n"}},            {"star", {"k"}},
      {"petersen", {}},           {"random-gnm", {"n", "m"}},
      {"planar-grid", {"rows", "cols"}}, {"barabasi-albert", {"n", "k"}},
  };
  return keys;
}

std::string canonical_kind(const std::string& kind) {
  if (kind == "gnm") return "random-gnm";
  if (kind == "grid") return "planar-grid";
  if (kind == "ba") return "barabasi-albert";
  return kind;
}

Graph generate(const std::string& raw_kind, const std::vector<std::string>& args, Seed seed) {
  const std::string kind = canonical_kind(raw_kind);
  const auto it = generator_keys().find(kind);
  if (it == generator_keys().end()) throw Error(ErrorCode::kInvalidParams, "unknown graph kind '" + raw_kind + "'");
  const std::vector<std::string>& names = it->second;
  std::map<std::string, std::size_t> values;
  std::size_t next = 0;
  for (const std::string& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) {
      if (next >= names.size()) throw Error(ErrorCode::kInvalidParams, "too many parameters for " + kind);
      values[names[next]] = to_size(names[next], a);
      ++next;
      continue;
    }
    const std::string key = a.substr(0, eq);
    const std::string value = a.substr(eq + 1);
    if (key == "seed") {
      seed.flag = to_size(key, value);
    } else if (std::find(names.begin(), names.end(), key) != names.end()) {
      values[key] = to_size(key, value);
    } else {
      throw Error(ErrorCode::kInvalidParams, "unknown parameter '" + key + "' for " + kind);
    }
  }
  for (const std::string& name : names) {
    if (!values.count(name)) throw Error(ErrorCode::kInvalidParams, "missing parameter " + name + " for " + kind);
  }
  if (kind == "complete") return complete_graph(values["n"]);
  if (kind == "cycle") return cycle_graph(values["n"]);
  if (kind == "path") return path_graph(values["n"]);
  if (kind == "star") return star_graph(values["k"]);
  if (kind == "petersen") return petersen_graph();
  if (kind == "random-gnm") return random_gnm(values["n"], values["m"], seed.resolve());
  if (kind == "planar-grid") return planar_grid(values["rows"], values["cols"]);
  return barabasi_albert(values["n"], values["k"], seed.resolve());
}

struct ReportRow {
  RunRecord record;
  std::optional<double> error;
  std::uint64_t passes = 0;
  std::uint64_t bits = 0;
};

double as_double(const std::optional<std::string>& v) { return v ? std::strtod(v->c_str(), nullptr) : 0.0; }

void report(const std::vector<std::string>& files, std::istream& stdin_stream, std::ostream& out) {
  std::vector<ReportRow> rows;
  auto consume = [&](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("command=", 0) != 0) continue;
      ReportRow row;
      row.record = RunRecord::parse(line);
      if (const auto e = row.record.get("relative_error")) row.error = std::strtod(e->c_str(), nullptr);
      row.passes = static_cast<std::uint64_t>(as_double(row.record.get("passes")));
      row.bits = static_cast<std::uint64_t>(as_double(row.record.get("bits")));
      rows.push_back(std::move(row));
    }
  };
  if (files.empty()) {
    consume(stdin_stream);
  } else {
    for (const std::string& path : files) {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
      consume(in);
    }
  }
  if (rows.empty()) throw Error(ErrorCode::kInvalidParams, "no run records");

  std::vector<double> errors;
  std::uint64_t max_passes = 0;
  std::uint64_t max_bits = 0;
  for (const ReportRow& row : rows) {
    out << row.record.to_line() << '\n';
    if (row.error) errors.push_back(*row.error);
    max_passes = std::max(max_passes, row.passes);
    max_bits = std::max(max_bits, row.bits);
  }

  RunRecord summary;
  summary.set("summary", std::string("report"));
  summary.set("records", static_cast<std::uint64_t>(rows.size()));
  summary.set("with_exact", static_cast<std::uint64_t>(errors.size()));
  if (!errors.empty()) {
    double mean = 0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(errors.size());
    double var = 0;
    for (double e : errors) var += (e - mean) * (e - mean);
    const double stddev = errors.size() > 1 ? std::sqrt(var / static_cast<double>(errors.size() - 1)) : 0.0;
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    const double median = sorted.size() % 2 ? sorted[h] : (sorted[h - 1] + sorted[h]) / 2;
    summary.set("relative_error.mean", mean);
    summary.set("relative_error.median", median);
    summary.set("relative_error.stddev", stddev);
  }
  summary.set("max_passes", max_passes);
  summary.set("max_bits", max_bits);
  out << summary.to_line() << '\n';

  out << "# " << std::left << std::setw(14) << "command" << std::setw(8) << "seed" << std::setw(14)
      << "estimate" << std::setw(10) << "exact" << std::setw(12) << "rel_error" << std::setw(8) << "passes"
      << "bits\n";
  for (const ReportRow& row : rows) {
    out << "# " << std::setw(14) << row.record.get("command").value_or("-") << std::setw(8)
        << row.record.get("seed").value_or("-") << std::setw(14) << row.record.get("estimate").value_or("-")
        << std::setw(10) << row.record.get("exact").value_or("-") << std::setw(12)
        << row.record.get("relative_error").value_or("-") << std::setw(8) << row.passes << row.bits << '\n';
  }
}

std::optional<std::uint64_t> exact_count(const Graph& g, const Graph& pattern) {
  return enumerate_copies(g, pattern).count();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subgraph and clique counting over graph streams", "streamcount"};
  app.require_subcommand(1);
  Seed seed;
  std::string out_path;

  // gen
  std::string gen_kind;
  std::vector<std::string> gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Write a generated graph");
  gen->add_option("kind", gen_kind, "complete|cycle|path|star|petersen|random-gnm|planar-grid|barabasi-albert")
      ->required();
  gen->add_option("params", gen_args, "Positional values or key=value pairs");
  gen->add_option("--seed", seed.flag, "Seed");
  gen->add_option("--out", out_path, "Output file (default stdout)");

  // shuffle-stream
  std::string graph_path;
  std::string mode_name = "io";
  double churn = 0;
  bool delete_all = false;
  CLI::App* shuffle = app.add_subcommand("shuffle-stream", "Turn a graph into an edge stream");
  shuffle->add_option("--graph", graph_path, "Graph file")->required();
  shuffle->add_option("--mode", mode_name, "io|ts");
  shuffle->add_option("--churn", churn, "Fraction of edges inserted, deleted and reinserted (ts only)");
  shuffle->add_flag("--delete-all", delete_all, "Delete every edge after inserting it (ts only)");
  shuffle->add_option("--seed", seed.flag, "Seed");
  shuffle->add_option("--out", out_path, "Output file (default stdout)");

  // exact
  std::string pattern_path;
  CLI::App* exact = app.add_subcommand("exact", "Count copies of a pattern by enumeration");
  exact->add_option("--graph", graph_path, "Host graph file")->required();
  exact->add_option("--pattern", pattern_path, "Pattern graph file")->required();

  // count
  std::string stream_path;
  double epsilon = 0.1;
  std::optional<double> lower_bound;
  std::optional<std::uint64_t> repetitions;
  bool with_exact = false;
  CLI::App* count = app.add_subcommand("count", "Three-pass estimate of the number of copies of a pattern");
  count->add_option("--pattern", pattern_path, "Pattern graph file")->required();
  count->add_option("--stream", stream_path, "Stream file")->required();
  count->add_option("--mode", mode_name, "io|ts");
  count->add_option("--epsilon", epsilon, "Accuracy");
  count->add_option("--lower-bound", lower_bound, "Lower bound on the count; searched when absent");
  count->add_option("--repetitions", repetitions, "Override the number of sampler attempts");
  count->add_option("--seed", seed.flag, "Seed");
  count->add_flag("--exact", with_exact, "Also report the exact count of the final graph");

  // count-cliques
  std::size_t r = 3;
  std::optional<std::size_t> lambda;
  double scale = 1;
  std::optional<double> tau_scale, sample_scale, activity_scale, trials_scale, instances_scale;
  std::optional<std::size_t> instances;
  bool saturate = false;
  std::string model = "stream";
  CLI::App* cliques = app.add_subcommand("count-cliques", "Multi-pass r-clique estimate for low-degeneracy graphs");
  cliques->add_option("--r", r, "Clique size")->required();
  cliques->add_option("--lambda", lambda, "Degeneracy bound (default: degeneracy of the final graph)");
  cliques->add_option("--epsilon", epsilon, "Accuracy");
  cliques->add_option("--stream", stream_path, "Insertion-only stream file")->required();
  cliques->add_option("--scale", scale, "Uniform factor on all constants");
  cliques->add_option("--tau-scale", tau_scale, "Factor on the thresholds (overrides --scale)");
  cliques->add_option("--sample-scale", sample_scale, "Factor on the sample sizes (overrides --scale)");
  cliques->add_option("--activity-scale", activity_scale, "Factor on activity sample sizes (overrides --scale)");
  cliques->add_option("--trials-scale", trials_scale, "Factor on activity trials (overrides --scale)");
  cliques->add_option("--instances-scale", instances_scale, "Factor on median instances (overrides --scale)");
  cliques->add_option("--instances", instances, "Exact number of median instances");
  cliques->add_flag("--saturate", saturate, "Enumerate instead of sampling");
  cliques->add_option("--lower-bound", lower_bound, "Lower bound on the count; searched when absent");
  cliques->add_option("--model", model, "stream|query")->check(CLI::IsMember({"stream", "query"}));
  cliques->add_option("--seed", seed.flag, "Seed");
  cliques->add_flag("--exact", with_exact, "Also report the exact count of the final graph");

  // report
  std::vector<std::string> report_files;
  CLI::App* rep = app.add_subcommand("report", "Summarize run records");
  rep->add_option("files", report_files, "Record files (default stdin)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int status = kExitOk;
  try {
    if (*gen) {
      emit_graph(generate(gen_kind, gen_args, seed), out_path, out);
    } else if (*shuffle) {
      const StreamMode mode = parse_stream_mode(mode_name);
      if (!(churn >= 0 && churn < 1)) throw Error(ErrorCode::kInvalidChurn, "churn must lie in [0, 1)");
      if ((churn > 0 || delete_all) && mode != StreamMode::kTurnstile) {
        throw Error(ErrorCode::kInvalidChurn, "churn and deletions need --mode ts");
      }
      const Graph g = load_graph(graph_path);
      const std::uint64_t s = seed.resolve();
      if (delete_all) {
        emit_stream(deletion_stream(g, g.edges(), s), out_path, out);
      } else {
        emit_stream(churn > 0 ? churn_stream(g, churn, s) : insertion_stream(g, s), out_path, out);
      }
    } else if (*exact) {
      const Graph g = load_graph(graph_path);
      const Graph h = load_graph(pattern_path);
      const CopySet set = enumerate_copies(g, h);
      RunRecord record;
      record.set("command", std::string("exact"));
      record.set("count", set.count());
      record.set("ordered", set.ordered_count);
      record.set("vertices", static_cast<std::uint64_t>(g.vertex_count()));
      record.set("edges", static_cast<std::uint64_t>(g.edge_count()));
      out << record.to_line() << '\n';
    } else if (*count) {
      const Pattern pattern(load_graph(pattern_path));
      const EdgeStream stream = load_stream(stream_path);
      const std::uint64_t s = seed.resolve();
      CountingConfig config;
      config.mode = parse_stream_mode(mode_name);
      config.epsilon = epsilon;
      config.repetitions = repetitions;
      Estimate e;
      if (lower_bound) {
        config.lower_bound = *lower_bound;
        e = count_subgraph(pattern, stream, config, s);
      } else {
        e = count_subgraph_search(pattern, stream, config, s);
      }
      RunRecord record;
      record.set("command", std::string("count"));
      record.set("seed", s);
      record.set("mode", std::string(stream_mode_name(config.mode)));
      record.set("epsilon", epsilon);
      record.set("rho", to_string(pattern.rho()));
      if (lower_bound) record.set("lower_bound", *lower_bound);
      record.set("estimate", e.value);
      if (with_exact) add_exact(record, e.value, exact_count(stream.final_graph(), pattern.graph()));
      record.set("aborted", static_cast<std::uint64_t>(e.aborted));
      record.set("passes", static_cast<std::uint64_t>(e.passes));
      record.set("repetitions", e.repetitions);
      record.set("successes", e.successes);
      record.set("edges", e.edge_count);
      add_queries(record, e.queries);
      record.set("bits", e.bits_tracked);
      out << record.to_line() << '\n';
      write_passes(out, "count", e);
      if (e.aborted) status = kExitAborted;
    } else if (*cliques) {
      const EdgeStream stream = load_stream(stream_path);
      const std::uint64_t s = seed.resolve();
      const Graph final_graph = stream.final_graph();
      CliqueConfig config;
      CliqueParams& p = config.params;
      p.r = r;
      p.lambda = lambda.value_or(std::max<std::size_t>(1, degeneracy(final_graph)));
      p.epsilon = epsilon;
      p.scaling = CliqueScaling::uniform(scale);
      p.scaling.tau = tau_scale.value_or(scale);
      p.scaling.sample = sample_scale.value_or(scale);
      p.scaling.activity_sample = activity_scale.value_or(scale);
      p.scaling.trials = trials_scale.value_or(scale);
      p.scaling.instances = instances_scale.value_or(scale);
      p.scaling.saturate = saturate;
      p.validate();
      config.lower_bound = lower_bound;
      config.instances = instances;
      CliqueEstimate e;
      if (model == "query") {
        if (!lower_bound) throw Error(ErrorCode::kInvalidParams, "--model query needs --lower-bound");
        QueryOracle oracle(final_graph, s);
        e = query_model_count_clique(oracle, p, *lower_bound, final_graph.edge_count(), s, instances);
      } else {
        e = stream_count_clique(stream, config, s);
      }
      RunRecord record;
      record.set("command", std::string("count-cliques"));
      record.set("seed", s);
      record.set("model", model);
      record.set("r", static_cast<std::uint64_t>(r));
      record.set("lambda", static_cast<std::uint64_t>(p.lambda));
      record.set("epsilon", epsilon);
      record.set("lower_bound", e.lower_bound);
      record.set("estimate", e.estimate.value);
      if (with_exact) add_exact(record, e.estimate.value, exact_count(final_graph, complete_graph(r)));
      record.set("aborted", static_cast<std::uint64_t>(e.estimate.aborted));
      record.set("aborted_instances", static_cast<std::uint64_t>(e.aborted_instances));
      record.set("passes", static_cast<std::uint64_t>(e.estimate.passes));
      record.set("edges", e.estimate.edge_count);
      add_queries(record, e.estimate.queries);
      record.set("bits", e.estimate.bits_tracked);
      out << record.to_line() << '\n';
      write_passes(out, "count-cliques", e.estimate);
      if (e.estimate.aborted) status = kExitAborted;
    } else if (*rep) {
      report(report_files, std::cin, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool usage = e.code() == ErrorCode::kInvalidParams || e.code() == ErrorCode::kInvalidChurn;
    return usage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "wall_seconds=" << std::fixed << std::setprecision(3) << seconds << '\n';
  return status;
}

}  // namespace streamcount
