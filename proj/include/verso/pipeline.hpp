#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "verso/div_iterator.hpp"

namespace verso {

struct PipelineConfig {
  std::size_t n = 10;
  std::size_t k_g = 2;
  std::size_t k_c = 2;
  /// Per-emission budget of every iterator; 0 disables it.
  std::chrono::milliseconds t_d{0};
  /// Budget of the hill-climbing stage; 0 disables it. When unset and t_d is
  /// positive it defaults to t_c_multiple * n * k_g * t_d.
  std::optional<std::chrono::milliseconds> t_c;
  std::size_t t_c_multiple = 3;
  /// Cap on hill-climbing subset iterations; 0 disables it.
  std::size_t max_iterations = 0;

  void validate() const;
  std::chrono::milliseconds effective_t_c() const;
};

struct PhaseStats {
  double elapsed_ms = 0.0;
  std::size_t logical_bytes_peak = 0;
  bool timed_out = false;
  std::size_t iterations = 0;
};

/// Greedy seeding: up to k_g complete sets of n items, best first. Branches
/// are grown level by level and at most k_g partial sets survive per level.
std::vector<ScoredSet> greeverso(const std::shared_ptr<QueryContext>& ctx, std::size_t n,
                                 std::size_t k_g, const PipelineConfig& config = {},
                                 PhaseStats* stats = nullptr);

/// Hill climbing over the seeds: drop one member, stream optimal
/// replacements, keep the k_c best full sets. Best first.
std::vector<ScoredSet> interverso(const std::shared_ptr<QueryContext>& ctx,
                                  const std::vector<ScoredSet>& seeds, std::size_t k_c,
                                  const PipelineConfig& config = {}, PhaseStats* stats = nullptr);

struct DiversifyResult {
  ScoredSet best;
  std::vector<ScoredSet> seeds;
  std::vector<ScoredSet> refined;
  PhaseStats greedy;
  PhaseStats hillclimb;
};

DiversifyResult diversify(const DocumentGraph& g, VertexId q, const RestrictionSet& restriction,
                          const PipelineConfig& config, const RankParams& params);
DiversifyResult diversify(const std::shared_ptr<QueryContext>& ctx, const PipelineConfig& config);

/// Number of vertices that may appear in a result for this context.
std::size_t admissible_count(const QueryContext& ctx);

}  // namespace verso
