#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <queue>
#include <random>

#include "fixtures.hpp"
#include "verso/corpus.hpp"
#include "verso/synth.hpp"

using namespace verso;
using verso::testing::fixture6;
using verso::testing::make_graph;

namespace {

TermVector vec(std::vector<std::pair<TermId, double>> e) {
  std::vector<TermVector::Entry> entries;
  for (auto [t, w] : e) entries.push_back({t, w});
  return TermVector(std::move(entries));
}

// Hop distances by plain BFS, for unit-weight graphs.
std::vector<int> bfs(const DocumentGraph& g, VertexId s) {
  std::vector<int> d(g.vertex_count(), -1);
  std::queue<VertexId> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop();
    for (const Edge& e : g.out_edges(u)) {
      if (d[e.target] < 0) {
        d[e.target] = d[u] + 1;
        q.push(e.target);
      }
    }
  }
  return d;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("verso_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(TermVector, DropsNonPositiveAndMergesDuplicates) {
  TermVector v = vec({{3, 1.0}, {1, 0.0}, {3, 2.0}, {2, -1.0}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_DOUBLE_EQ(v.weight(3), 3.0);
  EXPECT_DOUBLE_EQ(v.norm(), 3.0);
}

TEST(TextDistance, Examples) {
  EXPECT_DOUBLE_EQ(text_distance(vec({{0, 1}}), vec({{0, 1}})), 0.0);
  EXPECT_DOUBLE_EQ(text_distance(vec({{0, 1}}), vec({{1, 1}})), 1.0);
  EXPECT_NEAR(text_distance(vec({{0, 1}}), vec({{0, 1}, {1, 1}})), 1.0 - 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(TextDistance, EmptyVectorIsDomainError) {
  try {
    text_distance(TermVector{}, vec({{0, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(TextDistance, SymmetricAndBounded) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.01, 3.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::pair<TermId, double>> a, b;
    for (TermId t = 0; t < 6; ++t) {
      if (rng() % 2) a.push_back({t, w(rng)});
      if (rng() % 2) b.push_back({t, w(rng)});
    }
    if (a.empty() || b.empty()) continue;
    const double ab = text_distance(vec(a), vec(b));
    EXPECT_EQ(ab, text_distance(vec(b), vec(a)));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(GraphDistance, Fixture6) {
  const DocumentGraph g = fixture6();
  EXPECT_DOUBLE_EQ(g.diameter(), 4.0);
  EXPECT_TRUE(g.diameter_info().exact);
  for (VertexId u = 0; u < 6; ++u) EXPECT_DOUBLE_EQ(graph_distance(g, u, u), 0.0);
  EXPECT_DOUBLE_EQ(graph_distance(g, 0, 1), 0.25);
  EXPECT_DOUBLE_EQ(graph_distance(g, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(graph_distance(g, 0, 5), 1.0);
  EXPECT_DOUBLE_EQ(graph_distance(g, 1, 5), 0.75);
}

TEST(GraphDistance, InvalidVertexIsNotFound) {
  const DocumentGraph g = fixture6();
  try {
    graph_distance(g, 0, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(GraphDistance, MatchesBfsAndTriangleInequality) {
  std::mt19937_64 rng(11);
  SmallGraphConfig cfg;
  cfg.min_v = 10;
  cfg.max_v = 40;
  cfg.max_out = 3;
  for (int trial = 0; trial < 20; ++trial) {
    const DocumentGraph g = random_small_graph(cfg, rng);
    const double diam = g.diameter();
    std::vector<std::vector<double>> d(g.vertex_count());
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      const auto hops = bfs(g, u);
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        d[u].push_back(graph_distance(g, u, v));
        const double expected = hops[v] < 0 ? 1.0 : std::min(1.0, hops[v] / diam);
        EXPECT_NEAR(d[u][v], expected, 1e-12);
      }
    }
    bool attained = false;
    for (VertexId a = 0; a < g.vertex_count(); ++a) {
      for (VertexId b = 0; b < g.vertex_count(); ++b) {
        attained |= d[a][b] == 1.0;
        for (VertexId c = 0; c < g.vertex_count(); ++c) {
          EXPECT_LE(d[a][c], d[a][b] + d[b][c] + 1e-12);
        }
      }
    }
    EXPECT_TRUE(attained);
  }
}

TEST(Diameter, DegenerateCases) {
  const DocumentGraph single = make_graph(1, {}, {{0}});
  EXPECT_DOUBLE_EQ(single.diameter(), 1.0);
  EXPECT_TRUE(single.diameter_info().degenerate);

  const DocumentGraph pair = make_graph(2, {{0, 1}}, {{0}, {1}});
  EXPECT_DOUBLE_EQ(pair.diameter(), 1.0);
  EXPECT_FALSE(pair.diameter_info().degenerate);
}

TEST(Diameter, SampledEstimateNeverBelowObservedDistance) {
  std::mt19937_64 rng(3);
  SmallGraphConfig cfg;
  cfg.min_v = 60;
  cfg.max_v = 80;
  cfg.max_out = 2;
  for (int trial = 0; trial < 5; ++trial) {
    const DocumentGraph g = random_small_graph(cfg, rng);
    DiameterOptions sampled;
    sampled.exact_threshold = 10;
    sampled.sample_sources = 4;
    const DiameterInfo est = compute_diameter(g, sampled);
    const DiameterInfo exact = compute_diameter(g);
    EXPECT_FALSE(est.exact);
    EXPECT_LE(est.value, exact.value);
    // The estimate covers at least the eccentricity of one sampled source.
    EXPECT_GT(est.value, 0.0);
  }
}

TEST(Tfidf, Examples) {
  const TfidfResult all = build_tfidf({{"a", "", {"x", "y"}}, {"b", "", {"x"}}});
  EXPECT_EQ(all.docs[1].vector.size(), 0u);  // x occurs everywhere
  ASSERT_EQ(all.empty_vectors.size(), 1u);
  EXPECT_EQ(all.empty_vectors[0], 1u);

  const TfidfResult one = build_tfidf({{"a", "", {"x", "y"}}});
  EXPECT_TRUE(one.docs[0].vector.empty());

  const TfidfResult two = build_tfidf({{"a", "", {"x", "x", "z"}}, {"b", "", {"z"}}});
  ASSERT_EQ(two.docs[0].vector.size(), 1u);
  EXPECT_NEAR(two.docs[0].vector.entries()[0].weight, 2.0 * std::log(2.0), 1e-12);

  EXPECT_THROW(build_tfidf({}), Error);
}

TEST(Ingest, CountsAndDropsUnresolvedLinks) {
  const std::string text =
      R"({"id":"A","title":"Alpha","tokens":["x","y"],"links":["B","missing","A","B"]})"
      "\n"
      R"({"id":"B","title":"Beta","tokens":["y","z"],"links":["A"]})"
      "\n"
      R"({"id":"C","title":"Gamma","tokens":["w"]})"
      "\n";
  IngestReport rep;
  const DocumentGraph g = ingest_collection_text(text, &rep);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(rep.dropped_links, 1u);
  EXPECT_EQ(rep.self_or_duplicate_links, 2u);
  EXPECT_NEAR(rep.mean_out_degree, 2.0 / 3.0, 1e-12);
  VertexId b = 0;
  ASSERT_TRUE(g.find_key("B", b));
  EXPECT_EQ(b, 1u);
}

TEST(Ingest, ErrorsCarryLineNumbers) {
  try {
    ingest_collection_text("{\"id\":\"a\",\"tokens\":[]}\n{broken\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    ingest_collection_text("{\"id\":\"a\",\"tokens\":[]}\n{\"id\":\"a\",\"tokens\":[]}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_THROW(ingest_collection_text("{\"id\":\"a\"}\n"), Error);
}

TEST(Ingest, WeightedLinksAndTfidfRecords) {
  const std::string text =
      R"({"id":"a","tfidf":{"x":0.5,"y":1.5},"links":[{"id":"b","weight":2.5}]})"
      "\n"
      R"({"id":"b","tfidf":{"y":1.0},"links":[]})"
      "\n";
  const DocumentGraph g = ingest_collection_text(text);
  ASSERT_EQ(g.out_edges(0).size(), 1u);
  EXPECT_DOUBLE_EQ(g.out_edges(0)[0].weight, 2.5);
  EXPECT_EQ(g.doc(0).vector.size(), 2u);
}

TEST(Ingest, ReingestingOwnOutputIsIdempotent) {
  std::mt19937_64 rng(5);
  SmallGraphConfig cfg;
  cfg.min_v = 30;
  cfg.max_v = 30;
  cfg.weighted = true;
  const DocumentGraph g = random_small_graph(cfg, rng);
  const auto path = temp_file("roundtrip.jsonl");
  write_collection(g, path);
  const DocumentGraph again = ingest_collection(path);
  EXPECT_EQ(again.vertex_count(), g.vertex_count());
  EXPECT_EQ(again.edge_count(), g.edge_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    ASSERT_EQ(again.out_edges(v).size(), g.out_edges(v).size());
    for (std::size_t i = 0; i < g.out_edges(v).size(); ++i) {
      EXPECT_EQ(again.out_edges(v)[i].target, g.out_edges(v)[i].target);
      EXPECT_DOUBLE_EQ(again.out_edges(v)[i].weight, g.out_edges(v)[i].weight);
    }
  }
  write_collection(again, path);
  const DocumentGraph third = ingest_collection(path);
  EXPECT_EQ(third.checksum(), again.checksum());
  std::filesystem::remove(path);
}

TEST(GraphFile, BinaryRoundTrip) {
  const DocumentGraph g = fixture6();
  const auto path = temp_file("graph.bin");
  save_graph(g, path);
  const DocumentGraph back = load_graph(path);
  EXPECT_EQ(back.checksum(), g.checksum());
  EXPECT_DOUBLE_EQ(back.diameter(), 4.0);
  {
    std::ofstream bad(path, std::ios::binary | std::ios::trunc);
    bad << "not a graph";
  }
  EXPECT_THROW(load_graph(path), Error);
  std::filesystem::remove(path);
}

TEST(Restriction, Modes) {
  EXPECT_TRUE(RestrictionSet::allow_all().admits(5));
  const auto white = RestrictionSet::whitelist({1, 2});
  EXPECT_TRUE(white.admits(1));
  EXPECT_FALSE(white.admits(3));
  const auto black = RestrictionSet::blacklist({1});
  EXPECT_FALSE(black.admits(1));
  EXPECT_TRUE(black.admits(3));
  EXPECT_FALSE(RestrictionSet::whitelist({}).admits(0));
}

TEST(Graph, SelfAndDuplicateLinksRemoved) {
  std::vector<Document> docs(3);
  std::vector<std::vector<Edge>> links{{{0, 1.0}, {1, 1.0}, {1, 1.0}}, {}, {}};
  const DocumentGraph g(std::move(docs), {}, std::move(links));
  EXPECT_EQ(g.edge_count(), 1u);
  std::vector<std::vector<Edge>> bad{{{7, 1.0}}};
  EXPECT_THROW(DocumentGraph(std::vector<Document>(1), {}, std::move(bad)), Error);
}

TEST(Tokenize, LowercasesAndSplits) {
  const auto t = tokenize("Apache HTTP-Server, v2!");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0], "apache");
  EXPECT_EQ(t[1], "http");
  EXPECT_EQ(t[2], "server");
  EXPECT_EQ(t[3], "v2");
}
