#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "verso/corpus.hpp"

namespace verso {

enum class Variant { kMinAvg, kMinMax };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);  // "avg" | "max" (also "min-avg"/"min-max")

/// Trade-off weights: lambda balances relevance against dissimilarity, alpha
/// and beta balance graph against text inside each of them.
struct RankParams {
  double lambda = 0.8;
  double alpha = 0.0;
  double beta = 0.8;
  Variant variant = Variant::kMinAvg;

  void validate() const;
};

/// An ordered result list; position is insertion rank. Lower score is better.
struct ScoredSet {
  std::vector<VertexId> items;
  double score = 0.0;
};

/// Supplies the two primitive distances. Graph distances are directed.
class DistanceSource {
 public:
  virtual ~DistanceSource() = default;
  virtual const DocumentGraph& graph() const = 0;
  /// Normalized directed distance from -> to, in [0,1].
  virtual double graph_leg(VertexId from, VertexId to) = 0;
  virtual double text_leg(VertexId a, VertexId b) = 0;
};

/// Computes graph legs with a full shortest-path run per distinct source,
/// memoized for the lifetime of the object.
class DirectDistances final : public DistanceSource {
 public:
  explicit DirectDistances(const DocumentGraph& g) : graph_(g) {}
  const DocumentGraph& graph() const override { return graph_; }
  double graph_leg(VertexId from, VertexId to) override;
  double text_leg(VertexId a, VertexId b) override;

 private:
  const DocumentGraph& graph_;
  std::unordered_map<VertexId, std::vector<double>> paths_;
};

inline double blend(double weight, double graph_leg, double text_leg) {
  return weight * graph_leg + (1.0 - weight) * text_leg;
}

/// alpha * d_graph(q -> u) + (1 - alpha) * d_text(q, u)
double rel_distance(DistanceSource& d, VertexId q, VertexId u, const RankParams& p);
/// beta * d_graph(v -> w) + (1 - beta) * d_text(v, w), v preceding w.
double diss_distance(DistanceSource& d, VertexId v, VertexId w, const RankParams& p);

double rel_distance(const DocumentGraph& g, VertexId q, VertexId u, const RankParams& p);
double diss_distance(const DocumentGraph& g, VertexId v, VertexId w, const RankParams& p);

/// Direct evaluation of the ranking function. The dissimilarity aggregate
/// enters with a negative sign; it is 0 for singleton sets.
double score_of(DistanceSource& d, VertexId q, std::span<const VertexId> items, const RankParams& p);
double score_of(const DocumentGraph& g, VertexId q, std::span<const VertexId> items,
                const RankParams& p);

/// Which of the four min-max cases a marginal gain fell into. kNotApplicable
/// covers min-avg and sets with fewer than two members (no pairwise minimum).
enum class MinMaxCase {
  kNotApplicable,
  kUnchanged,          // neither the max relevance nor the pairwise min moves
  kRelevanceWorse,     // only the max relevance distance grows
  kSpreadShrinks,      // only the pairwise minimum shrinks
  kBoth,
};

/// Aggregates of an ordered set sufficient to evaluate the gain of appending
/// any vertex from its legs alone.
class SetSummary {
 public:
  explicit SetSummary(const RankParams& p) : params_(p) { refresh_score(); }
  static SetSummary of(DistanceSource& d, VertexId q, std::span<const VertexId> items,
                       const RankParams& p);

  std::size_t size() const { return size_; }
  double score() const { return score_; }
  const RankParams& params() const { return params_; }
  double max_rel() const { return max_rel_; }
  double min_pair() const { return min_pair_; }

  /// score(S + u) - score(S) where rel_u = d_rel(q,u) and diss_u[i] is
  /// d_diss(S[i], u). Monotone non-decreasing in rel_u and non-increasing in
  /// every diss_u[i].
  double gain(double rel_u, std::span<const double> diss_u, MinMaxCase* branch = nullptr) const;

  /// Summary of S with u appended.
  SetSummary appended(double rel_u, std::span<const double> diss_u) const;

 private:
  void refresh_score();

  RankParams params_;
  std::size_t size_ = 0;
  double rel_sum_ = 0.0;
  double pair_sum_ = 0.0;
  double max_rel_ = 0.0;
  double min_pair_ = 0.0;  // meaningful only for size >= 2
  double score_ = 0.0;
  // min-avg: gain = rel_coef_ * rel - diss_coef_ * sum(diss) + offset_
  double rel_coef_ = 0.0;
  double diss_coef_ = 0.0;
  double offset_ = 0.0;
};

/// Exactly score_of(S + u) - score_of(S); the empty set scores 0.
/// Throws kInvalidArgument when u is already in S.
double marginal_gain(DistanceSource& d, VertexId q, std::span<const VertexId> items, VertexId u,
                     const RankParams& p, MinMaxCase* branch = nullptr);
double marginal_gain(const DocumentGraph& g, VertexId q, std::span<const VertexId> items,
                     VertexId u, const RankParams& p, MinMaxCase* branch = nullptr);

}  // namespace verso
