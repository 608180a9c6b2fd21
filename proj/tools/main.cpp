// ftcl command-line harness: build labels, answer queries, benchmark against
// the brute-force oracle, and run the invariant verification suites.
//
// Exit codes: 0 ok, 1 usage error, 2 I/O error, 3 internal invariant failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftcl/auxgraph.hpp"
#include "ftcl/coarsen.hpp"
#include "ftcl/decomp.hpp"
#include "ftcl/errors.hpp"
#include "ftcl/graph.hpp"
#include "ftcl/hierarchy.hpp"
#include "ftcl/labeling.hpp"
#include "ftcl/partition.hpp"
#include "ftcl/query.hpp"
#include "ftcl/rng.hpp"
#include "ftcl/sketch.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Graph source: either a path to an edge-list file or "gen:model(args)"
/// with models gnp(n,p), star(k), grid(w,h), cycle(k).
ftcl::Graph load_graph(const std::string& src, std::uint64_t seed) {
  if (src.rfind("gen:", 0) == 0) {
    std::string spec = src.substr(4);
    auto open = spec.find('(');
    auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw ftcl::InvalidQuery("bad generator spec (expected model(args)): " + src);
    std::string model = spec.substr(0, open);
    std::vector<std::string> args;
    std::stringstream ss(spec.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(tok);
    try {
      if (model == "gnp" && args.size() == 2)
        return ftcl::generate_gnp(std::stoi(args[0]), std::stod(args[1]), seed);
      if (model == "star" && args.size() == 1)
        return ftcl::generate_star(std::stoi(args[0]));
      if (model == "grid" && args.size() == 2)
        return ftcl::generate_grid(std::stoi(args[0]), std::stoi(args[1]));
      if (model == "cycle" && args.size() == 1)
        return ftcl::generate_cycle(std::stoi(args[0]));
    } catch (const std::invalid_argument&) {
      throw ftcl::InvalidQuery("bad generator argument in: " + src);
    }
    throw ftcl::InvalidQuery("unknown generator model: " + src);
  }
  std::ifstream in(src);
  if (!in) throw ftcl::ParseError("cannot open graph file: " + src);
  std::stringstream buf;
  buf << in.rdbuf();
  return ftcl::load_edge_list(buf.str());
}

void emit_report(const json& rep, const std::string& path) {
  std::string text = rep.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ftcl::ParseError("cannot open report file: " + path);
  out << text;
}

json stats_json(const ftcl::LabelStats& st) {
  return json{{"count", st.count},
              {"mean_bits", st.mean_bits},
              {"max_bits", st.max_bits},
              {"total_bits", st.total_bits},
              {"breakdown",
               {{"header_bits", st.breakdown.header_bits},
                {"component_label_bits", st.breakdown.comp_bits},
                {"subtree_sketch_bits", st.breakdown.subtree_bits},
                {"out_edge_bits", st.breakdown.out_bits}}}};
}

std::vector<ftcl::Vertex> parse_fail_list(const std::string& s) {
  std::vector<ftcl::Vertex> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ftcl::InvalidQuery("bad vertex id in --fail list: " + tok);
    }
  }
  return out;
}

/// Uniform valid query: s != t, F uniform among subsets of size <= f
/// avoiding {s, t}.  Documented so error rates are comparable across runs.
struct SampledQuery {
  ftcl::Vertex s, t;
  std::vector<ftcl::Vertex> faults;
};

SampledQuery sample_query(int n, int f, ftcl::Rng& rng) {
  SampledQuery q;
  q.s = static_cast<ftcl::Vertex>(rng.below(static_cast<std::uint64_t>(n)));
  do {
    q.t = static_cast<ftcl::Vertex>(rng.below(static_cast<std::uint64_t>(n)));
  } while (q.t == q.s);
  int nf = static_cast<int>(rng.below(static_cast<std::uint64_t>(f) + 1));
  while (static_cast<int>(q.faults.size()) < nf) {
    auto x = static_cast<ftcl::Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    if (x == q.s || x == q.t) continue;
    if (std::find(q.faults.begin(), q.faults.end(), x) == q.faults.end())
      q.faults.push_back(x);
  }
  return q;
}

int cmd_build(const std::string& graph_src, int f, std::uint64_t seed, int c,
              int c_sparse, const std::string& out, const std::string& report_path) {
  auto t0 = std::chrono::steady_clock::now();
  ftcl::Graph g = load_graph(graph_src, seed);
  double t_load = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  ftcl::LabelBuild lb =
      ftcl::build_labels(g, {.f = f, .seed = seed, .c = c, .c_sparse = c_sparse});
  double t_build = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  ftcl::write_label_file(out, lb.labels);
  ftcl::LabelStats st = ftcl::label_stats(lb.labels);
  double t_write = seconds_since(t0);

  json rep{{"command", "build"},
           {"config",
            {{"graph", graph_src},
             {"n", g.n()},
             {"m", g.m()},
             {"f", f},
             {"seed", seed},
             {"c", c},
             {"c_sparse", c_sparse},
             {"out", out}}},
           {"labels", stats_json(st)},
           {"hierarchy",
            {{"levels_max", lb.stats.levels_max},
             {"t_union_degree_max", lb.stats.max_tunion_deg},
             {"non_s_tree_degree_max", lb.stats.max_tree_deg_non_s},
             {"boundary_set_max", lb.stats.max_boundary},
             {"out_degree_max", lb.stats.max_outdeg}}},
           {"wall_seconds",
            {{"load", t_load}, {"build", t_build}, {"write_and_stats", t_write}}}};
  emit_report(rep, report_path);
  return 0;
}

int cmd_query(const std::string& labels_path, int s, int t, const std::string& fail) {
  auto labels = ftcl::read_label_file(labels_path);
  auto faults = parse_fail_list(fail);
  int n = static_cast<int>(labels.size());
  auto in_range = [&](int v) { return v >= 0 && v < n; };
  if (!in_range(s) || !in_range(t))
    throw ftcl::InvalidQuery("query: vertex id out of range");
  std::vector<ftcl::FinalLabel> lf;
  for (ftcl::Vertex x : faults) {
    if (!in_range(x)) throw ftcl::InvalidQuery("query: fault id out of range");
    lf.push_back(labels[static_cast<std::size_t>(x)]);
  }
  bool conn = ftcl::labels_connected(labels[static_cast<std::size_t>(s)],
                                     labels[static_cast<std::size_t>(t)], lf);
  std::cout << (conn ? "connected" : "disconnected") << "\n";
  return 0;
}

int cmd_bench(const std::string& labels_path, const std::string& graph_src,
              long queries, std::uint64_t seed, const std::string& report_path,
              const std::string& csv_path) {
  auto t0 = std::chrono::steady_clock::now();
  auto labels = ftcl::read_label_file(labels_path);
  ftcl::Graph g = load_graph(graph_src, seed);
  if (static_cast<int>(labels.size()) != g.n())
    throw ftcl::InvalidQuery("bench: labels and graph disagree on n");
  double t_load = seconds_since(t0);
  if (labels.empty()) throw ftcl::InvalidQuery("bench: empty label file");
  const int f = labels[0].hiers[0].seeds.f;

  ftcl::Rng rng(ftcl::mix64(seed ^ 0xbe9c4ULL));
  long agree = 0, false_conn = 0, false_disc = 0;
  t0 = std::chrono::steady_clock::now();
  for (long i = 0; i < queries; ++i) {
    SampledQuery q = sample_query(g.n(), f, rng);
    std::vector<ftcl::FinalLabel> lf;
    for (ftcl::Vertex x : q.faults) lf.push_back(labels[static_cast<std::size_t>(x)]);
    bool got = ftcl::labels_connected(labels[static_cast<std::size_t>(q.s)],
                                      labels[static_cast<std::size_t>(q.t)], lf);
    bool want = ftcl::oracle_connected(g, q.s, q.t, ftcl::VertexSet(q.faults));
    if (got == want)
      ++agree;
    else if (got)
      ++false_conn;
    else
      ++false_disc;
  }
  double t_queries = seconds_since(t0);
  ftcl::LabelStats st = ftcl::label_stats(labels);

  json rep{{"command", "bench"},
           {"config",
            {{"labels", labels_path},
             {"graph", graph_src},
             {"queries", queries},
             {"seed", seed},
             {"f", f},
             {"n", g.n()}}},
           {"results",
            {{"agree", agree},
             {"false_connected", false_conn},
             {"false_disconnected", false_disc},
             {"agreement_rate", queries ? static_cast<double>(agree) / queries : 1.0}}},
           {"labels", stats_json(st)},
           {"wall_seconds", {{"load", t_load}, {"queries", t_queries}}}};
  emit_report(rep, report_path);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw ftcl::ParseError("cannot open csv file: " + csv_path);
    csv << "n,f,queries,agree,false_connected,false_disconnected,mean_bits,max_bits\n"
        << g.n() << ',' << f << ',' << queries << ',' << agree << ',' << false_conn
        << ',' << false_disc << ',' << st.mean_bits << ',' << st.max_bits << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& graph_src, int f, std::uint64_t seed,
               const std::string& report_path) {
  ftcl::Graph g = load_graph(graph_src, seed);
  json suites = json::array();
  bool all_ok = true;
  auto run = [&](const std::string& name, auto&& fn) {
    json entry{{"suite", name}, {"status", "pass"}};
    try {
      fn();
    } catch (const std::exception& e) {
      entry["status"] = "fail";
      entry["detail"] = e.what();
      all_ok = false;
    }
    suites.push_back(entry);
  };

  auto cc = ftcl::connected_components(g);
  std::vector<std::vector<ftcl::Vertex>> regions;
  {
    std::map<int, int> idx;
    for (ftcl::Vertex v = 0; v < g.n(); ++v) {
      auto [it, fresh] = idx.try_emplace(cc[static_cast<std::size_t>(v)],
                                         static_cast<int>(regions.size()));
      if (fresh) regions.emplace_back();
      regions[static_cast<std::size_t>(it->second)].push_back(v);
    }
  }
  std::vector<ftcl::BaseHierarchy> hs;
  run("base-hierarchy-bounds", [&] {
    for (std::size_t i = 0; i < regions.size(); ++i) {
      hs.push_back(ftcl::build_base_hierarchy(g, regions[i], 4, ftcl::mix64(seed) + i));
      ftcl::check_base_hierarchy(g, hs.back());
    }
  });
  ftcl::ColorPartition part;
  run("derandomized-partition-hitting", [&] {
    part = ftcl::derandomized_partition(hs, g.n(), f);
    for (const auto& h : hs)
      if (!ftcl::partition_hits_all(h, part, g.n()))
        throw ftcl::ConstructionError("hitting guarantee violated");
  });
  run("coarse-hierarchy-contract", [&] {
    for (int color = 1; color <= f + 1; ++color)
      for (const auto& h : hs)
        ftcl::check_coarse_hierarchy(g, ftcl::coarsen(g, h, part, color), f, true);
  });
  run("aux-graph-neighbor-identity", [&] {
    for (int color = 1; color <= f + 1; ++color)
      for (const auto& h : hs) {
        ftcl::CoarseHierarchy ch = ftcl::coarsen(g, h, part, color);
        ftcl::build_aux_graph(g, ch);  // throws if N-hat != N
      }
  });
  run("label-query-oracle-sample", [&] {
    ftcl::LabelBuild lb = ftcl::build_labels(g, {.f = f, .seed = seed});
    ftcl::Rng rng(ftcl::mix64(seed ^ 0x7e57ULL));
    int n = g.n();
    int rounds = std::min(200, n * (n - 1) / 2 + 1);
    for (int it = 0; it < rounds; ++it) {
      SampledQuery q = sample_query(n, f, rng);
      std::vector<ftcl::FinalLabel> lf;
      for (ftcl::Vertex x : q.faults) lf.push_back(lb.labels[static_cast<std::size_t>(x)]);
      bool got = ftcl::labels_connected(lb.labels[static_cast<std::size_t>(q.s)],
                                        lb.labels[static_cast<std::size_t>(q.t)], lf);
      bool want = ftcl::oracle_connected(g, q.s, q.t, ftcl::VertexSet(q.faults));
      if (got && !want) throw ftcl::ConstructionError("false connected answer");
      if (!got && want) throw ftcl::ConstructionError("false disconnected answer");
    }
  });

  json rep{{"command", "verify"},
           {"config", {{"graph", graph_src}, {"f", f}, {"seed", seed}, {"n", g.n()}}},
           {"decomp_invocations", ftcl::decomp_invocations().load()},
           {"suites", suites},
           {"ok", all_ok}};
  emit_report(rep, report_path);
  return all_ok ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fault-tolerant connectivity labels"};
  app.require_subcommand(1);

  std::string graph_src, labels_path, out_path = "labels.bin";
  std::string report_path, csv_path, fail_list;
  int f = 1, c = 8, c_sparse = 4, s = 0, t = 0;
  long queries = 1000;
  std::uint64_t seed = 0;

  CLI::App* b = app.add_subcommand("build", "build labels for a graph");
  b->add_option("--graph", graph_src, "edge-list file or gen:model(args)")->required();
  b->add_option("--f", f, "fault budget (>= 1)")->required();
  b->add_option("--seed", seed, "build seed");
  b->add_option("--c", c, "sketch rounds constant");
  b->add_option("--c-sparse", c_sparse, "sparsification rounds constant");
  b->add_option("--out", out_path, "label file path");
  b->add_option("--report", report_path, "write JSON report here (default stdout)");

  CLI::App* q = app.add_subcommand("query", "answer one connectivity query");
  q->add_option("--labels", labels_path, "label file")->required();
  q->add_option("--s", s, "source vertex")->required();
  q->add_option("--t", t, "target vertex")->required();
  q->add_option("--fail", fail_list, "comma-separated fault ids");

  CLI::App* be = app.add_subcommand("bench", "compare label answers to the oracle");
  be->add_option("--labels", labels_path, "label file")->required();
  be->add_option("--graph", graph_src, "edge-list file or gen:model(args)")->required();
  be->add_option("--queries", queries, "number of sampled queries");
  be->add_option("--seed", seed, "sampling seed");
  be->add_option("--report", report_path, "write JSON report here (default stdout)");
  be->add_option("--csv", csv_path, "also write a one-line CSV summary");

  CLI::App* ve = app.add_subcommand("verify", "run the invariant suites");
  ve->add_option("--graph", graph_src, "edge-list file or gen:model(args)")->required();
  ve->add_option("--f", f, "fault budget (>= 1)")->required();
  ve->add_option("--seed", seed, "build seed");
  ve->add_option("--report", report_path, "write JSON report here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (b->parsed()) {
      if (f < 1) throw ftcl::InvalidQuery("build: f must be >= 1");
      return cmd_build(graph_src, f, seed, c, c_sparse, out_path, report_path);
    }
    if (q->parsed()) return cmd_query(labels_path, s, t, fail_list);
    if (be->parsed()) {
      if (queries < 0) throw ftcl::InvalidQuery("bench: queries must be >= 0");
      return cmd_bench(labels_path, graph_src, queries, seed, report_path, csv_path);
    }
    if (ve->parsed()) {
      if (f < 1) throw ftcl::InvalidQuery("verify: f must be >= 1");
      return cmd_verify(graph_src, f, seed, report_path);
    }
  } catch (const ftcl::InvalidQuery& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ftcl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
