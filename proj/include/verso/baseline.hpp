#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "verso/div_iterator.hpp"

namespace verso {

struct BaselineParams {
  std::size_t ell = 2;  // hop radius
  RankParams params;

  void validate() const;
};

/// Candidates examined in one greedy round: admissible vertices within `ell`
/// hops of the query center or any member, ranked by text distance to the
/// center (ties by id) and cut at ceil(n * delta^ell), delta being the mean
/// out-degree.
std::vector<VertexId> coverage_pool(const DocumentGraph& g, VertexId q,
                                    std::span<const VertexId> members, std::size_t n,
                                    std::size_t ell, const RestrictionSet& restriction);

struct BaselineStats {
  double elapsed_ms = 0.0;
  std::size_t logical_bytes_peak = 0;
  std::size_t rounds = 0;
  std::size_t evaluated = 0;
};

/// Hop-limited greedy baseline. Each round ranks its pool by the shared
/// marginal gain; graph legs are recomputed from scratch every round.
/// Throws kInsufficientCandidates when a round finds an empty pool.
ScoredSet best_coverage(const DocumentGraph& g, VertexId q, std::size_t n,
                        const RestrictionSet& restriction, const BaselineParams& bp,
                        BaselineStats* stats = nullptr);

/// Linear scan over every admissible vertex with independently computed
/// distances. Gains within 1e-9 of each other count as ties, resolved by the
/// lower id. Throws kGuardExceeded above 10,000 vertices and kEmptyResult
/// when nothing is admissible.
Addendum oracle_best_addendum(const DocumentGraph& g, VertexId q, std::span<const VertexId> members,
                              const RestrictionSet& restriction, const RankParams& params);

/// Exhaustive minimum-score ordered set of size n. Every ordering is scanned
/// for n <= 5; above that each combination is evaluated in greedy insertion
/// order only. Throws kGuardExceeded when C(admissible, n) > 2,000,000.
ScoredSet oracle_best_set(const DocumentGraph& g, VertexId q, std::size_t n,
                          const RestrictionSet& restriction, const RankParams& params);

}  // namespace verso
