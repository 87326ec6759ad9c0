#pragma once

#include <random>
#include <vector>

#include "verso/corpus.hpp"
#include "verso/ranking.hpp"

namespace verso::testing {

/// Six vertices, unit edges 0->1, 0->2, 1->3, 2->3, 3->4, 4->5 (diameter 4).
/// Vectors: 0,1 = {a}; 2 = {b}; 3 = {a,b}; 4 = {c}; 5 = {b,c}.
DocumentGraph fixture6();

/// Builds a graph from unit edges and per-vertex term lists.
DocumentGraph make_graph(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges,
                         const std::vector<std::vector<TermId>>& terms);

std::vector<VertexId> random_members(std::mt19937_64& rng, const DocumentGraph& g, VertexId q,
                                     std::size_t count);

/// lambda, alpha, beta from {0.2, 0.5, 0.8} and a random variant.
RankParams random_grid_params(std::mt19937_64& rng);

}  // namespace verso::testing
