#include <charconv>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "verso/bench.hpp"
#include "verso/service.hpp"
#include "verso/synth.hpp"

using namespace verso;

namespace {

DocumentGraph open_graph(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return ingest_collection(path);
  return load_graph(path);
}

void store_graph(const DocumentGraph& g, const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
    write_collection(g, path);
  } else {
    save_graph(g, path);
  }
}

/// A collection key, a numeric vertex id, or free text.
VertexId pick_center(const DocumentGraph& g, const std::string& q) {
  VertexId v = 0;
  if (g.find_key(q, v)) return v;
  unsigned long long id = 0;
  const auto [ptr, ec] = std::from_chars(q.data(), q.data() + q.size(), id);
  if (ec == std::errc() && ptr == q.data() + q.size()) {
    if (!g.valid(static_cast<VertexId>(id))) {
      throw Error(ErrorCode::kNotFound, "no vertex with id " + q);
    }
    return static_cast<VertexId>(id);
  }
  return resolve_query_center(g, q);
}

HttpService* running_service = nullptr;

void on_signal(int) {
  if (running_service) running_service->stop();
}

int run_oracle_check(const std::string& graph_path, std::size_t trials, std::size_t max_v,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::optional<DocumentGraph> fixed;
  if (!graph_path.empty()) fixed = open_graph(graph_path);
  const double grid[] = {0.2, 0.5, 0.8};
  std::uniform_int_distribution<int> pick3(0, 2);
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    DocumentGraph local;
    if (!fixed) {
      SmallGraphConfig cfg;
      cfg.min_v = 5;
      cfg.max_v = std::max<std::size_t>(max_v, 5);
      local = random_small_graph(cfg, rng);
    }
    const DocumentGraph& g = fixed ? *fixed : local;
    if (g.vertex_count() < 2) throw Error(ErrorCode::kInvalidArgument, "graph too small");
    std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(g.vertex_count() - 1));
    const VertexId q = vertex(rng);
    const std::size_t size = std::min<std::size_t>(
        std::uniform_int_distribution<std::size_t>(0, 3)(rng), g.vertex_count() - 2);
    std::vector<VertexId> members;
    while (members.size() < size) {
      const VertexId v = vertex(rng);
      if (v != q && std::find(members.begin(), members.end(), v) == members.end()) members.push_back(v);
    }
    RankParams p{grid[pick3(rng)], grid[pick3(rng)], grid[pick3(rng)],
                 rng() % 2 ? Variant::kMinMax : Variant::kMinAvg};
    const Addendum got = verso::verso(g, q, members, {}, p);
    const Addendum want = oracle_best_addendum(g, q, members, {}, p);
    if (got.vertex != want.vertex) {
      ++mismatches;
      std::cout << "mismatch trial " << t << " q=" << q << " verso=" << got.vertex << " ("
                << got.gain << ") oracle=" << want.vertex << " (" << want.gain << ")\n";
    }
  }
  std::cout << trials - mismatches << "/" << trials << " trials agree\n";
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversified top-k retrieval over directed document graphs"};
  app.require_subcommand(1);

  std::string input, output, graph_path;
  auto* ingest = app.add_subcommand("ingest", "Read a JSONL collection and write a graph file");
  ingest->add_option("--input", input, "Collection file (JSONL)")->required();
  ingest->add_option("--output", output, "Graph file (.bin, or .jsonl to re-export)")->required();

  auto* stats = app.add_subcommand("graph-stats", "Print vertex, edge and diameter figures");
  stats->add_option("--graph", graph_path)->required();

  SynthConfig synth;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic corpus");
  generate->add_option("--docs", synth.num_docs)->capture_default_str();
  generate->add_option("--links", synth.links_per_doc)->capture_default_str();
  generate->add_option("--lemmas", synth.lemmas_per_doc)->capture_default_str();
  generate->add_option("--skew", synth.zipf_skew)->capture_default_str();
  generate->add_option("--vocab", synth.vocab_size, "Vocabulary size (0: 10 x lemmas)");
  generate->add_option("--seed", synth.rng_seed)->capture_default_str();
  generate->add_option("--output", output)->required();

  std::string q_text, variant = "avg";
  PipelineConfig config;
  RankParams params;
  long long td_ms = 0, tc_ms = -1;
  bool as_json = false;
  std::optional<std::size_t> kc;
  auto* query = app.add_subcommand("query", "Diversify around one query center");
  query->add_option("--graph", graph_path)->required();
  query->add_option("--q", q_text, "Collection key, vertex id or free text")->required();
  query->add_option("--n", config.n)->capture_default_str();
  query->add_option("--kg", config.k_g)->capture_default_str();
  query->add_option("--kc", kc, "Defaults to --kg");
  query->add_option("--lambda", params.lambda)->capture_default_str();
  query->add_option("--alpha", params.alpha)->capture_default_str();
  query->add_option("--beta", params.beta)->capture_default_str();
  query->add_option("--variant", variant)->check(CLI::IsMember({"avg", "max"}))->capture_default_str();
  query->add_option("--td-ms", td_ms, "Per-emission time-out, 0 = none")->capture_default_str();
  query->add_option("--tc-ms", tc_ms, "Hill-climbing time-out, 0 = none");
  query->add_flag("--json", as_json, "Print the same JSON document the HTTP service returns");

  std::string grid_path;
  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Run the benchmark grid and write CSV");
  bench->add_option("--graph", graph_path)->required();
  bench->add_option("--grid", grid_path, "JSON grid file (defaults when omitted)");
  bench->add_option("--queries", bench_opts.queries)->capture_default_str();
  bench->add_option("--seed", bench_opts.seed)->capture_default_str();
  bench->add_option("--td-ms", td_ms)->capture_default_str();
  bench->add_option("--tc-ms", tc_ms);
  bench->add_option("--out", output, "CSV file (stdout when omitted)");

  std::string bind = "127.0.0.1:8080";
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--graph", graph_path)->required();
  serve->add_option("--bind", bind, "host:port")->capture_default_str();

  std::size_t trials = 100, max_v = 200;
  std::uint64_t seed = 1;
  auto* oracle = app.add_subcommand("oracle-check", "Compare verso against the linear-scan oracle");
  oracle->add_option("--graph", graph_path, "Fixed graph; random small graphs when omitted");
  oracle->add_option("--trials", trials)->capture_default_str();
  oracle->add_option("--max-v", max_v)->capture_default_str();
  oracle->add_option("--seed", seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      IngestReport report;
      const DocumentGraph g = ingest_collection(input, &report);
      store_graph(g, output);
      std::cout << "documents " << report.documents << "\nresolved_links " << report.resolved_links
                << "\ndropped_links " << report.dropped_links << "\nself_or_duplicate_links "
                << report.self_or_duplicate_links << "\nempty_vectors " << report.empty_vectors.size()
                << "\nmean_out_degree " << report.mean_out_degree << '\n';
    } else if (*stats) {
      const DocumentGraph g = open_graph(graph_path);
      const auto& d = g.diameter_info();
      std::cout << "vertices " << g.vertex_count() << "\nedges " << g.edge_count()
                << "\nmean_out_degree " << g.mean_out_degree() << "\ndiameter " << d.value
                << (d.exact ? " (exact)" : " (estimate)") << (d.degenerate ? " degenerate" : "")
                << "\nempty_vectors " << g.empty_vector_count() << "\nchecksum " << std::hex
                << g.checksum() << std::dec << '\n';
    } else if (*generate) {
      const DocumentGraph g = generate_synthetic(synth);
      store_graph(g, output);
      std::cout << "vertices " << g.vertex_count() << "\nedges " << g.edge_count() << '\n';
    } else if (*query) {
      const DocumentGraph g = open_graph(graph_path);
      params.variant = parse_variant(variant);
      config.k_c = kc.value_or(config.k_g);
      config.t_d = std::chrono::milliseconds(td_ms);
      if (tc_ms >= 0) config.t_c = std::chrono::milliseconds(tc_ms);
      const VertexId q = pick_center(g, q_text);
      const DiversifyResult r = diversify(g, q, RestrictionSet{}, config, params);
      const nlohmann::json doc = diversify_json(g, q, params, r);
      if (as_json) {
        std::cout << doc.dump(2) << '\n';
      } else {
        std::cout << "center " << q << "  " << g.doc(q).title << '\n';
        int rank = 1;
        for (const auto& item : doc["items"]) {
          std::cout << std::setw(3) << rank++ << "  " << std::setw(8) << item["id"].get<VertexId>()
                    << "  rel " << std::fixed << std::setprecision(4)
                    << item["rel_distance"].get<double>() << "  gain "
                    << item["marginal_gain"].get<double>() << "  " << item["title"].get<std::string>()
                    << '\n';
        }
        std::cout << "score " << std::setprecision(6) << r.best.score << "  greedy "
                  << r.greedy.elapsed_ms << " ms  hillclimb " << r.hillclimb.elapsed_ms << " ms\n";
      }
    } else if (*bench) {
      const DocumentGraph g = open_graph(graph_path);
      const BenchGrid grid = grid_path.empty() ? BenchGrid{} : load_grid(grid_path);
      bench_opts.t_d = std::chrono::milliseconds(td_ms);
      if (tc_ms >= 0) bench_opts.t_c = std::chrono::milliseconds(tc_ms);
      const auto rows = run_benchmark(g, grid, bench_opts);
      if (output.empty()) {
        write_csv(std::cout, rows);
      } else {
        std::ofstream out(output);
        if (!out) throw Error(ErrorCode::kIo, "cannot write " + output);
        write_csv(out, rows);
      }
    } else if (*serve) {
      const DocumentGraph g = open_graph(graph_path);
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "--bind needs host:port");
      HttpService service(g);
      const int port = service.bind(bind.substr(0, colon), std::stoi(bind.substr(colon + 1)));
      running_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << bind.substr(0, colon) << ':' << port << '\n';
      service.serve();
      running_service = nullptr;
    } else if (*oracle) {
      return run_oracle_check(graph_path, trials, max_v, seed);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
