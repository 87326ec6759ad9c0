#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <queue>
#include <unordered_map>
#include <vector>

#include "verso/corpus.hpp"
#include "verso/ranking.hpp"

namespace verso {

/// Counts of live structure entries, converted to logical bytes at a fixed
/// 8 units per id, score, weight or bitmask field.
struct StructureCensus {
  std::size_t ids = 0;
  std::size_t scores = 0;
  std::size_t weights = 0;
  std::size_t bitmasks = 0;

  StructureCensus& operator+=(const StructureCensus& o) {
    ids += o.ids;
    scores += o.scores;
    weights += o.weights;
    bitmasks += o.bitmasks;
    return *this;
  }
};

inline std::size_t logical_bytes(const StructureCensus& c) {
  return 8 * (c.ids + c.scores + c.weights + c.bitmasks);
}

/// Resumable single-source Dijkstra. Vertices are settled in order of
/// (distance, id); each out-edge of a settled vertex is relaxed exactly once.
class SourceSearch {
 public:
  struct Settled {
    VertexId vertex;
    double distance;
  };

  SourceSearch(const DocumentGraph& g, VertexId source);

  VertexId source() const { return source_; }
  std::size_t settled_count() const { return order_.size(); }
  const Settled& settled(std::size_t rank) const { return order_[rank]; }
  bool is_settled(VertexId v) const { return settled_[v]; }
  /// Final distance of a settled vertex.
  double distance(VertexId v) const { return dist_[v]; }

  /// Settles one more vertex; false once the frontier is empty.
  bool settle_next();
  /// Distance of the next vertex to be settled (+inf when exhausted).
  double next_distance();
  bool exhausted();
  /// Runs the search until `v` is settled or the frontier empties and returns
  /// the raw shortest-path weight (+inf when unreachable).
  double distance_to(VertexId v);

  std::size_t relaxations() const { return relaxations_; }
  std::size_t frontier_size() const { return frontier_.size(); }
  StructureCensus census() const;

 private:
  using Item = std::pair<double, VertexId>;
  void drop_stale();

  const DocumentGraph* graph_;
  VertexId source_;
  std::vector<double> dist_;
  std::vector<bool> settled_;
  std::vector<Settled> order_;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier_;
  std::size_t relaxations_ = 0;
};

/// Per-query shared state: the searches rooted at every vertex that has been
/// used as a source and memoized text distances. All iterators of one query
/// share one context and must stay on one thread.
class QueryContext final : public DistanceSource {
 public:
  QueryContext(const DocumentGraph& g, VertexId query, RankParams params,
               RestrictionSet restriction = {});

  const DocumentGraph& graph() const override { return *graph_; }
  VertexId query() const { return query_; }
  const RankParams& params() const { return params_; }
  const RestrictionSet& restriction() const { return restriction_; }

  SourceSearch& search(VertexId source);
  const std::unordered_map<VertexId, std::unique_ptr<SourceSearch>>& searches() const {
    return searches_;
  }

  double graph_leg(VertexId from, VertexId to) override;
  double text_leg(VertexId a, VertexId b) override;
  /// Text distances from `source` to every vertex, filled lazily.
  std::vector<double>& text_row(VertexId source);
  /// Every vertex ordered by (text distance to the query center, id).
  std::span<const VertexId> text_order();

  double score(std::span<const VertexId> items) { return score_of(*this, query_, items, params_); }

  StructureCensus census() const;

 private:
  const DocumentGraph* graph_;
  VertexId query_;
  RankParams params_;
  RestrictionSet restriction_;
  std::unordered_map<VertexId, std::unique_ptr<SourceSearch>> searches_;
  std::unordered_map<VertexId, std::vector<double>> text_rows_;
  // Dense copies of row sources' term weights, for small vocabularies.
  std::unordered_map<VertexId, std::vector<double>> scatters_;
  std::size_t text_entries_ = 0;
  std::vector<VertexId> text_order_;

  double cosine_distance(VertexId row, VertexId other);
};

}  // namespace verso
