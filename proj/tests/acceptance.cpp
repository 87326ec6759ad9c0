// Acceptance gate: one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "fixtures.hpp"
#include "verso/baseline.hpp"
#include "verso/bench.hpp"
#include "verso/pipeline.hpp"
#include "verso/synth.hpp"

using namespace verso;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

// Hill-climb dominance is checked wherever diversify runs in criteria 1-3.
struct Dominance {
  std::size_t runs = 0;
  std::size_t violations = 0;
  void check(const DiversifyResult& r) {
    ++runs;
    if (!(r.best.score <= r.seeds.front().score)) ++violations;
  }
} dominance;

// Per-source relaxation counts of every iterator in criterion 1.
struct Relaxations {
  std::size_t iterators = 0;
  std::size_t violations = 0;
  std::size_t worst_ratio_num = 0, worst_ratio_den = 1;
} relaxations;

std::size_t pipeline_n(std::mt19937_64& rng, const DocumentGraph& g) {
  return std::min<std::size_t>(1 + rng() % 5, g.vertex_count() - 1);
}

Outcome criterion1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(0xC1);
  SmallGraphConfig cfg;
  cfg.min_v = 5;
  cfg.max_v = 200;
  cfg.max_out = 6;
  cfg.vocab = 30;
  std::size_t agree = 0;
  const std::size_t trials = 100;
  std::vector<std::pair<DocumentGraph, VertexId>> corpus;
  for (std::size_t t = 0; t < trials; ++t) {
    DocumentGraph g = random_small_graph(cfg, rng);
    const VertexId q = static_cast<VertexId>(rng() % g.vertex_count());
    const std::size_t k = std::min<std::size_t>(rng() % 4, g.vertex_count() - 2);
    const auto s = verso::testing::random_members(rng, g, q, k);
    const RankParams p = verso::testing::random_grid_params(rng);

    auto ctx = std::make_shared<QueryContext>(g, q, p);
    DivIterator it(ctx, s);
    const auto got = it.next();
    const Addendum want = oracle_best_addendum(g, q, s, {}, p);
    if (got && got->vertex == want.vertex) ++agree;

    ++relaxations.iterators;
    for (std::size_t r : it.source_relaxations()) {
      if (r > g.edge_count()) ++relaxations.violations;
      if (r * relaxations.worst_ratio_den > relaxations.worst_ratio_num * std::max<std::size_t>(g.edge_count(), 1)) {
        relaxations.worst_ratio_num = r;
        relaxations.worst_ratio_den = std::max<std::size_t>(g.edge_count(), 1);
      }
    }
    corpus.emplace_back(std::move(g), q);
  }
  const double elapsed = seconds_since(start);

  // Dominance runs on the same graphs, outside the timed exactness suite.
  for (const auto& [g, q] : corpus) {
    PipelineConfig c;
    c.n = pipeline_n(rng, g);
    dominance.check(diversify(g, q, {}, c, verso::testing::random_grid_params(rng)));
  }

  std::ostringstream d;
  d << agree << "/" << trials << " verso picks equal the oracle, suite " << elapsed
    << " s (limit 60 s)";
  return {agree == trials && elapsed < 60.0, d.str()};
}

Outcome criterion2() {
  std::mt19937_64 rng(0xC2);
  SmallGraphConfig cfg;
  cfg.min_v = 6;
  cfg.max_v = 30;
  double worst = 0.0;
  std::map<MinMaxCase, std::size_t> branches;
  std::size_t instances = 0;
  for (Variant variant : {Variant::kMinAvg, Variant::kMinMax}) {
    for (int i = 0; i < 1000; ++i) {
      const DocumentGraph g = random_small_graph(cfg, rng);
      const VertexId q = static_cast<VertexId>(rng() % g.vertex_count());
      const std::size_t size = variant == Variant::kMinMax ? 2 + rng() % 3 : rng() % 5;
      auto s = verso::testing::random_members(rng, g, q, std::min(size, g.vertex_count() - 2) + 1);
      const VertexId u = s.back();
      s.pop_back();
      RankParams p = verso::testing::random_grid_params(rng);
      p.variant = variant;
      MinMaxCase branch = MinMaxCase::kNotApplicable;
      const double gain = marginal_gain(g, q, s, u, p, &branch);
      std::vector<VertexId> with = s;
      with.push_back(u);
      const double diff = score_of(g, q, with, p) - (s.empty() ? 0.0 : score_of(g, q, s, p));
      worst = std::max(worst, std::abs(gain - diff));
      ++branches[branch];
      ++instances;

      if (i % 10 == 0) {
        PipelineConfig c;
        c.n = pipeline_n(rng, g);
        dominance.check(diversify(g, q, {}, c, p));
      }
    }
  }
  bool covered = true;
  std::ostringstream d;
  d << instances << " instances, max |gain - diff| " << worst << "; min-max cases";
  const char* names[] = {"", "unchanged", "relevance", "spread", "both"};
  for (MinMaxCase c : {MinMaxCase::kUnchanged, MinMaxCase::kRelevanceWorse,
                       MinMaxCase::kSpreadShrinks, MinMaxCase::kBoth}) {
    d << ' ' << names[static_cast<int>(c)] << '=' << branches[c];
    covered &= branches[c] >= 50;
  }
  return {worst < 1e-9 && covered, d.str()};
}

Outcome criterion3() {
  const auto start = Clock::now();
  std::mt19937_64 rng(0xC3);
  SmallGraphConfig cfg;
  cfg.min_v = 10;
  cfg.max_v = 60;
  const std::size_t trials = 50;
  std::size_t within = 0, below = 0;
  double worst_gap = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const DocumentGraph g = random_small_graph(cfg, rng);
    const VertexId q = static_cast<VertexId>(rng() % g.vertex_count());
    const RankParams p = verso::testing::random_grid_params(rng);
    PipelineConfig c;
    c.n = 2 + rng() % 3;
    c.k_g = 4;
    c.k_c = 4;
    const DiversifyResult r = diversify(g, q, {}, c, p);
    dominance.check(r);
    const ScoredSet best = oracle_best_set(g, q, c.n, {}, p);
    const double gap = r.best.score - best.score;
    const bool ok = best.score == 0.0 ? std::abs(gap) <= 1e-9 : gap <= 0.05 * std::abs(best.score);
    within += ok;
    if (gap < -1e-12) ++below;
    worst_gap = std::max(worst_gap, best.score == 0.0 ? gap : gap / std::abs(best.score));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << within << "/" << trials << " within 5% of the exhaustive optimum (need 80%), " << below
    << " below it, worst relative gap " << worst_gap << ", " << elapsed << " s (limit 120 s)";
  return {within * 5 >= trials * 4 && below == 0 && elapsed < 120.0, d.str()};
}

Outcome criterion4() {
  std::ostringstream d;
  d << dominance.violations << " of " << dominance.runs
    << " diversify runs over criteria 1-3 corpora scored above their best seed";
  return {dominance.runs > 0 && dominance.violations == 0, d.str()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome criterion5() {
  const auto start = Clock::now();
  const DocumentGraph g = generate_synthetic(SynthConfig{});
  const std::vector<VertexId> centers = draw_query_centers(g, 20, 2024);
  const RankParams params;  // lambda .8, alpha 0, beta .8, min-avg
  PipelineConfig config;    // n 10, k_g = k_c = 2
  BaselineParams bp;
  bp.ell = 2;
  bp.params = params;
  double div_sum = 0, bc_sum = 0;
  std::vector<double> div_ms, bc_ms;
  for (VertexId q : centers) {
    const auto t0 = Clock::now();
    const DiversifyResult r = diversify(g, q, {}, config, params);
    div_ms.push_back(seconds_since(t0) * 1e3);
    const auto t1 = Clock::now();
    const ScoredSet b = best_coverage(g, q, config.n, {}, bp);
    bc_ms.push_back(seconds_since(t1) * 1e3);
    div_sum += r.best.score;
    bc_sum += b.score;
  }
  const double elapsed = seconds_since(start);
  const double div_mean = div_sum / centers.size(), bc_mean = bc_sum / centers.size();
  const double div_med = median(div_ms), bc_med = median(bc_ms);
  std::ostringstream d;
  d << "mean score diversify " << div_mean << " vs coverage " << bc_mean << ", median ms "
    << div_med << " vs " << bc_med << ", total " << elapsed << " s (limit 1800 s)";
  return {div_mean <= bc_mean && div_med <= bc_med && elapsed < 1800.0, d.str()};
}

Outcome criterion6() {
  std::mt19937_64 rng(0xC6);
  SmallGraphConfig cfg;
  cfg.min_v = 20;
  cfg.max_v = 200;
  std::size_t equal = 0;
  const std::size_t trials = 20;
  for (std::size_t t = 0; t < trials; ++t) {
    const DocumentGraph g = random_small_graph(cfg, rng);
    const VertexId q = static_cast<VertexId>(rng() % g.vertex_count());
    const RankParams p{1.0, 0.0, 0.8, Variant::kMinAvg};
    PipelineConfig c;
    c.n = std::min<std::size_t>(10, g.vertex_count() - 1);
    const DiversifyResult r = diversify(g, q, {}, c, p);
    std::vector<std::pair<double, VertexId>> ranked;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (v != q) ranked.emplace_back(g.text_distance(q, v), v);
    }
    std::sort(ranked.begin(), ranked.end());
    std::set<VertexId> want;
    for (std::size_t i = 0; i < c.n; ++i) want.insert(ranked[i].second);
    const std::set<VertexId> got(r.best.items.begin(), r.best.items.end());
    equal += got == want;
  }
  std::ostringstream d;
  d << equal << "/" << trials << " results equal the n text-nearest vertices";
  return {equal == trials, d.str()};
}

std::string strip_timing(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  std::string line;
  std::size_t column = std::string::npos;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (column == std::string::npos) {
      column = std::find(cells.begin(), cells.end(), "elapsed_ms") - cells.begin();
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != column) out << cells[i] << ',';
    }
    out << '\n';
  }
  return out.str();
}

Outcome criterion7() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("verso_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string cli = VERSO_CLI_PATH;
  const std::string graph = (dir / "synthetic.bin").string();
  const std::string grid = (dir / "grid.json").string();
  {
    std::ofstream out(grid);
    out << R"({"lambda":[0.5,0.8],"variant":["avg","max"],"n":[5]})";
  }
  auto run = [](const std::string& cmd) { return std::system((cmd + " > /dev/null").c_str()); };
  int rc = run(cli + " generate --docs 2000 --links 8 --lemmas 60 --seed 7 --output " + graph);
  std::string csv[2];
  for (int i = 0; i < 2 && rc == 0; ++i) {
    csv[i] = (dir / ("run" + std::to_string(i) + ".csv")).string();
    rc = run(cli + " bench --graph " + graph + " --grid " + grid +
             " --queries 4 --seed 11 --out " + csv[i]);
  }
  bool same = false;
  std::size_t rows = 0;
  if (rc == 0) {
    const std::string a = strip_timing(csv[0]);
    same = a == strip_timing(csv[1]);
    rows = static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n'));
  }
  std::filesystem::remove_all(dir);
  std::ostringstream d;
  d << "two bench runs " << (same ? "byte-equal" : "differ") << " without elapsed_ms (" << rows
    << " lines, exit " << rc << ")";
  return {rc == 0 && same && rows == 1 + 4 * 4 * 3, d.str()};
}

Outcome criterion8() {
  std::ostringstream d;
  d << relaxations.violations << " sources over |E| across " << relaxations.iterators
    << " iterators; highest relaxations/|E| "
    << static_cast<double>(relaxations.worst_ratio_num) / relaxations.worst_ratio_den;
  return {relaxations.iterators > 0 && relaxations.violations == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int c) { return selected.empty() || selected.count(c); };
  // Criteria 4 and 8 summarize evidence gathered while running 1-3.
  if (!selected.empty() && (selected.count(4) || selected.count(8))) selected.insert({1, 2, 3});

  const std::pair<int, std::pair<const char*, std::function<Outcome()>>> criteria[] = {
      {1, {"verso exactness", criterion1}},
      {2, {"marginal-gain consistency", criterion2}},
      {3, {"pipeline optimality at small scale", criterion3}},
      {4, {"hill-climb dominance", criterion4}},
      {5, {"baseline trend on the default synthetic corpus", criterion5}},
      {6, {"lambda=1 alpha=0 returns the text-nearest set", criterion6}},
      {7, {"bench reproducibility", criterion7}},
      {8, {"no re-traversal bound", criterion8}},
  };
  bool all = true;
  for (const auto& [id, entry] : criteria) {
    if (!wanted(id)) continue;
    Outcome o{false, ""};
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << entry.first
              << "): " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
