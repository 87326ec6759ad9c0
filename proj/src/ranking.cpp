#include "verso/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace verso {

std::string_view to_string(Variant v) {
  return v == Variant::kMinAvg ? "avg" : "max";
}

Variant parse_variant(std::string_view text) {
  if (text == "avg" || text == "min-avg" || text == "MIN_AVG") return Variant::kMinAvg;
  if (text == "max" || text == "min-max" || text == "MIN_MAX") return Variant::kMinMax;
  throw Error(ErrorCode::kInvalidArgument, "unknown ranking variant '" + std::string(text) + "'");
}

void RankParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must lie in [0,1]");
    }
  };
  check(lambda, "lambda");
  check(alpha, "alpha");
  check(beta, "beta");
}

double DirectDistances::graph_leg(VertexId from, VertexId to) {
  graph_.check_vertex(to);
  if (from == to) return 0.0;
  auto it = paths_.find(from);
  if (it == paths_.end()) it = paths_.emplace(from, shortest_paths(graph_, from)).first;
  return graph_.normalize(it->second[to]);
}

double DirectDistances::text_leg(VertexId a, VertexId b) {
  return graph_.text_distance(a, b);
}

double rel_distance(DistanceSource& d, VertexId q, VertexId u, const RankParams& p) {
  // A zero-weight leg is skipped; it cannot change the blend.
  return blend(p.alpha, p.alpha == 0.0 ? 0.0 : d.graph_leg(q, u), d.text_leg(q, u));
}

double diss_distance(DistanceSource& d, VertexId v, VertexId w, const RankParams& p) {
  return blend(p.beta, p.beta == 0.0 ? 0.0 : d.graph_leg(v, w), d.text_leg(v, w));
}

double rel_distance(const DocumentGraph& g, VertexId q, VertexId u, const RankParams& p) {
  DirectDistances d(g);
  return rel_distance(d, q, u, p);
}

double diss_distance(const DocumentGraph& g, VertexId v, VertexId w, const RankParams& p) {
  DirectDistances d(g);
  return diss_distance(d, v, w, p);
}

namespace {

void require_distinct(std::span<const VertexId> items) {
  std::vector<VertexId> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "result set contains duplicate items");
  }
}

}  // namespace

double score_of(DistanceSource& d, VertexId q, std::span<const VertexId> items,
                const RankParams& p) {
  if (items.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot score an empty set");
  require_distinct(items);
  const std::size_t n = items.size();
  if (p.variant == Variant::kMinAvg) {
    double rel_sum = 0.0;
    for (VertexId u : items) rel_sum += rel_distance(d, q, u, p);
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) pair_sum += diss_distance(d, items[i], items[j], p);
    }
    const double N = static_cast<double>(n);
    const double pair_term = n > 1 ? (1.0 - p.lambda) / (N * (N - 1.0)) * pair_sum : 0.0;
    return p.lambda / N * rel_sum - pair_term;
  }
  double max_rel = -std::numeric_limits<double>::infinity();
  for (VertexId u : items) max_rel = std::max(max_rel, rel_distance(d, q, u, p));
  double min_pair = 0.0;
  if (n > 1) {
    min_pair = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        min_pair = std::min(min_pair, diss_distance(d, items[i], items[j], p));
      }
    }
  }
  return p.lambda * max_rel - (1.0 - p.lambda) * min_pair;
}

double score_of(const DocumentGraph& g, VertexId q, std::span<const VertexId> items,
                const RankParams& p) {
  DirectDistances d(g);
  return score_of(d, q, items, p);
}

// ---------------------------------------------------------------------------
// SetSummary

SetSummary SetSummary::of(DistanceSource& d, VertexId q, std::span<const VertexId> items,
                          const RankParams& p) {
  require_distinct(items);
  SetSummary s(p);
  std::vector<double> diss;
  for (std::size_t j = 0; j < items.size(); ++j) {
    diss.clear();
    for (std::size_t i = 0; i < j; ++i) diss.push_back(diss_distance(d, items[i], items[j], p));
    s = s.appended(rel_distance(d, q, items[j], p), diss);
  }
  return s;
}

void SetSummary::refresh_score() {
  const double n = static_cast<double>(size_);
  const double lambda = params_.lambda;
  if (params_.variant == Variant::kMinAvg) {
    score_ = 0.0;
    if (size_ >= 1) score_ = lambda / n * rel_sum_;
    if (size_ >= 2) score_ -= (1.0 - lambda) / (n * (n - 1.0)) * pair_sum_;
    // Coefficients for appending one more item (set size m -> m + 1).
    rel_coef_ = lambda / (n + 1.0);
    diss_coef_ = size_ >= 1 ? (1.0 - lambda) / ((n + 1.0) * n) : 0.0;
    offset_ = rel_coef_ * rel_sum_ - diss_coef_ * pair_sum_ - score_;
  } else {
    score_ = 0.0;
    if (size_ >= 1) score_ = lambda * max_rel_;
    if (size_ >= 2) score_ -= (1.0 - lambda) * min_pair_;
  }
}

double SetSummary::gain(double rel_u, std::span<const double> diss_u, MinMaxCase* branch) const {
  if (branch) *branch = MinMaxCase::kNotApplicable;
  const double lambda = params_.lambda;
  if (size_ == 0) return lambda * rel_u;

  if (params_.variant == Variant::kMinAvg) {
    double diss_sum = 0.0;
    for (double x : diss_u) diss_sum += x;
    return rel_coef_ * rel_u - diss_coef_ * diss_sum + offset_;
  }

  double nearest = std::numeric_limits<double>::infinity();
  for (double x : diss_u) nearest = std::min(nearest, x);
  if (size_ == 1) {
    // No pair exists yet, so the new pair's distance enters in full.
    return lambda * (std::max(max_rel_, rel_u) - max_rel_) - (1.0 - lambda) * nearest;
  }

  const bool relevance_worse = rel_u > max_rel_;
  const bool spread_shrinks = nearest < min_pair_;
  if (!relevance_worse && !spread_shrinks) {
    if (branch) *branch = MinMaxCase::kUnchanged;
    return 0.0;
  }
  if (relevance_worse && !spread_shrinks) {
    if (branch) *branch = MinMaxCase::kRelevanceWorse;
    return lambda * (rel_u - max_rel_);
  }
  if (!relevance_worse) {
    if (branch) *branch = MinMaxCase::kSpreadShrinks;
    return (1.0 - lambda) * (min_pair_ - nearest);
  }
  if (branch) *branch = MinMaxCase::kBoth;
  return lambda * (rel_u - max_rel_) + (1.0 - lambda) * (min_pair_ - nearest);
}

SetSummary SetSummary::appended(double rel_u, std::span<const double> diss_u) const {
  if (diss_u.size() != size_) {
    throw Error(ErrorCode::kInvalidArgument, "one dissimilarity leg per member is required");
  }
  SetSummary next = *this;
  next.rel_sum_ += rel_u;
  next.max_rel_ = size_ == 0 ? rel_u : std::max(max_rel_, rel_u);
  if (!diss_u.empty()) {
    double nearest = std::numeric_limits<double>::infinity();
    for (double x : diss_u) {
      next.pair_sum_ += x;
      nearest = std::min(nearest, x);
    }
    next.min_pair_ = size_ >= 2 ? std::min(min_pair_, nearest) : nearest;
  }
  ++next.size_;
  next.refresh_score();
  return next;
}

double marginal_gain(DistanceSource& d, VertexId q, std::span<const VertexId> items, VertexId u,
                     const RankParams& p, MinMaxCase* branch) {
  if (std::find(items.begin(), items.end(), u) != items.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex " + std::to_string(u) + " is already a member of the set");
  }
  const SetSummary summary = SetSummary::of(d, q, items, p);
  std::vector<double> diss;
  diss.reserve(items.size());
  for (VertexId s : items) diss.push_back(diss_distance(d, s, u, p));
  return summary.gain(rel_distance(d, q, u, p), diss, branch);
}

double marginal_gain(const DocumentGraph& g, VertexId q, std::span<const VertexId> items,
                     VertexId u, const RankParams& p, MinMaxCase* branch) {
  DirectDistances d(g);
  return marginal_gain(d, q, items, u, p, branch);
}

}  // namespace verso
