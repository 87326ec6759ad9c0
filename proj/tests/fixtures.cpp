#include "fixtures.hpp"

#include <algorithm>
#include <string>

namespace verso::testing {

DocumentGraph make_graph(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges,
                         const std::vector<std::vector<TermId>>& terms) {
  std::vector<Document> docs(n);
  TermId max_term = 0;
  for (std::size_t i = 0; i < n; ++i) {
    docs[i].key = std::to_string(i);
    docs[i].title = "doc " + std::to_string(i);
    std::vector<TermVector::Entry> entries;
    if (i < terms.size()) {
      for (TermId t : terms[i]) {
        entries.push_back({t, 1.0});
        max_term = std::max(max_term, t);
      }
    }
    docs[i].vector = TermVector(std::move(entries));
  }
  std::vector<std::string> vocab;
  for (TermId t = 0; t <= max_term; ++t) vocab.push_back(std::string(1, static_cast<char>('a' + t % 26)) + std::to_string(t / 26));
  std::vector<std::vector<Edge>> links(n);
  for (const auto& [u, v] : edges) links[u].push_back({v, 1.0});
  return DocumentGraph(std::move(docs), std::move(vocab), std::move(links));
}

DocumentGraph fixture6() {
  return make_graph(6, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}},
                    {{0}, {0}, {1}, {0, 1}, {2}, {1, 2}});
}

std::vector<VertexId> random_members(std::mt19937_64& rng, const DocumentGraph& g, VertexId q,
                                     std::size_t count) {
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
  std::vector<VertexId> out;
  while (out.size() < count) {
    const VertexId v = pick(rng);
    if (v != q && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

RankParams random_grid_params(std::mt19937_64& rng) {
  static constexpr double kGrid[] = {0.2, 0.5, 0.8};
  std::uniform_int_distribution<int> pick(0, 2);
  RankParams p;
  p.lambda = kGrid[pick(rng)];
  p.alpha = kGrid[pick(rng)];
  p.beta = kGrid[pick(rng)];
  p.variant = rng() % 2 ? Variant::kMinMax : Variant::kMinAvg;
  return p;
}

}  // namespace verso::testing
