#include "verso/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace verso {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTieBand = 1e-9;

double combinations(std::size_t m, std::size_t n) {
  if (n > m) return 0.0;
  double c = 1.0;
  for (std::size_t i = 0; i < n; ++i) c = c * static_cast<double>(m - i) / static_cast<double>(i + 1);
  return c;
}

std::vector<VertexId> admissible(const DocumentGraph& g, VertexId q, const RestrictionSet& r) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v != q && r.admits(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

void BaselineParams::validate() const {
  if (ell < 1) throw Error(ErrorCode::kInvalidArgument, "ell must be at least 1");
  params.validate();
}

std::vector<VertexId> coverage_pool(const DocumentGraph& g, VertexId q,
                                    std::span<const VertexId> members, std::size_t n,
                                    std::size_t ell, const RestrictionSet& restriction) {
  g.check_vertex(q);
  const std::size_t size = g.vertex_count();
  std::vector<std::size_t> hops(size, std::numeric_limits<std::size_t>::max());
  std::vector<VertexId> frontier;
  auto seed = [&](VertexId v) {
    g.check_vertex(v);
    if (hops[v] != 0) {
      hops[v] = 0;
      frontier.push_back(v);
    }
  };
  seed(q);
  for (VertexId m : members) seed(m);

  std::vector<VertexId> reached;
  for (std::size_t depth = 1; depth <= ell && !frontier.empty(); ++depth) {
    std::vector<VertexId> next;
    for (VertexId u : frontier) {
      for (const Edge& e : g.out_edges(u)) {
        if (hops[e.target] <= depth) continue;
        hops[e.target] = depth;
        next.push_back(e.target);
        if (restriction.admits(e.target)) reached.push_back(e.target);
      }
    }
    frontier.swap(next);
  }

  std::vector<std::pair<double, VertexId>> ranked;
  ranked.reserve(reached.size());
  for (VertexId v : reached) ranked.emplace_back(g.text_distance(q, v), v);
  std::sort(ranked.begin(), ranked.end());

  const double cap = std::ceil(static_cast<double>(n) *
                               std::pow(g.mean_out_degree(), static_cast<double>(ell)));
  const std::size_t limit =
      cap >= static_cast<double>(ranked.size()) ? ranked.size() : static_cast<std::size_t>(cap);
  std::vector<VertexId> pool;
  pool.reserve(limit);
  for (std::size_t i = 0; i < limit; ++i) pool.push_back(ranked[i].second);
  return pool;
}

ScoredSet best_coverage(const DocumentGraph& g, VertexId q, std::size_t n,
                        const RestrictionSet& restriction, const BaselineParams& bp,
                        BaselineStats* stats) {
  const auto start = Clock::now();
  bp.validate();
  g.check_vertex(q);
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  const RankParams& p = bp.params;

  ScoredSet result;
  SetSummary summary(p);
  std::size_t peak = 0;
  std::size_t evaluated = 0;
  std::vector<double> diss;

  for (std::size_t round = 0; round < n; ++round) {
    const std::vector<VertexId> pool = coverage_pool(g, q, result.items, n, bp.ell, restriction);
    if (pool.empty()) {
      throw Error(ErrorCode::kInsufficientCandidates,
                  "no admissible vertex within " + std::to_string(bp.ell) + " hops after " +
                      std::to_string(round) + " of " + std::to_string(n) + " rounds");
    }

    // Nothing is carried over from the previous round.
    std::vector<SourceSearch> searches;
    const bool need_center = p.alpha > 0.0;
    const bool need_members = p.beta > 0.0;
    if (need_center) searches.emplace_back(g, q);
    if (need_members) {
      for (VertexId m : result.items) searches.emplace_back(g, m);
    }
    auto graph_leg = [&](std::size_t slot, VertexId v) {
      return g.normalize(searches[slot].distance_to(v));
    };

    VertexId best = pool.front();
    double best_gain = std::numeric_limits<double>::infinity();
    double best_rel = 0.0;
    std::vector<double> best_diss;
    for (VertexId u : pool) {
      const double rel = blend(p.alpha, need_center ? graph_leg(0, u) : 0.0, g.text_distance(q, u));
      diss.clear();
      for (std::size_t i = 0; i < result.items.size(); ++i) {
        const std::size_t slot = (need_center ? 1 : 0) + i;
        const double leg = need_members ? graph_leg(slot, u) : 0.0;
        diss.push_back(blend(p.beta, leg, g.text_distance(result.items[i], u)));
      }
      const double gain = summary.gain(rel, diss);
      ++evaluated;
      if (gain < best_gain || (gain == best_gain && u < best)) {
        best = u;
        best_gain = gain;
        best_rel = rel;
        best_diss = diss;
      }
    }

    StructureCensus c;
    for (const SourceSearch& s : searches) c += s.census();
    c.ids += pool.size() + result.items.size();
    c.scores += pool.size();
    peak = std::max(peak, logical_bytes(c));

    summary = summary.appended(best_rel, best_diss);
    result.items.push_back(best);
  }
  result.score = score_of(g, q, result.items, p);

  if (stats) {
    stats->elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    stats->logical_bytes_peak = peak;
    stats->rounds = n;
    stats->evaluated = evaluated;
  }
  return result;
}

Addendum oracle_best_addendum(const DocumentGraph& g, VertexId q, std::span<const VertexId> members,
                              const RestrictionSet& restriction, const RankParams& params) {
  if (g.vertex_count() > 10000) {
    throw Error(ErrorCode::kGuardExceeded, "oracle limited to 10000 vertices");
  }
  g.check_vertex(q);
  params.validate();
  DirectDistances d(g);
  std::vector<VertexId> with(members.begin(), members.end());
  const double base = members.empty() ? 0.0 : score_of(d, q, members, params);

  std::optional<Addendum> best;
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    if (u == q || !restriction.admits(u)) continue;
    if (std::find(members.begin(), members.end(), u) != members.end()) continue;
    with.push_back(u);
    const double gain = score_of(d, q, with, params) - base;
    with.pop_back();
    if (!best || gain < best->gain - kTieBand) best = Addendum{u, gain};
  }
  if (!best) throw Error(ErrorCode::kEmptyResult, "no admissible vertex to add");
  return *best;
}

namespace {

/// Distances among the admissible vertices, indexed by their position.
struct Tables {
  std::vector<VertexId> ids;
  std::vector<double> rel;
  std::vector<double> diss;  // row-major, from i to j

  double pair(std::size_t i, std::size_t j) const { return diss[i * ids.size() + j]; }
};

Tables build_tables(const DocumentGraph& g, VertexId q, const RestrictionSet& r,
                    const RankParams& p) {
  Tables t;
  t.ids = admissible(g, q, r);
  const std::size_t m = t.ids.size();
  DirectDistances d(g);
  t.rel.resize(m);
  t.diss.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    t.rel[i] = rel_distance(d, q, t.ids[i], p);
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) t.diss[i * m + j] = diss_distance(d, t.ids[i], t.ids[j], p);
    }
  }
  return t;
}

class Search {
 public:
  Search(const Tables& t, const RankParams& p, std::size_t n) : t_(t), p_(p), n_(n) {
    used_.assign(t.ids.size(), false);
  }

  void ordered(std::size_t depth, double rel_sum, double pair_sum, double max_rel, double min_pair) {
    if (depth == n_) {
      consider(score(rel_sum, pair_sum, max_rel, min_pair));
      return;
    }
    for (std::size_t i = 0; i < t_.ids.size(); ++i) {
      if (used_[i]) continue;
      double added_sum = 0.0;
      double added_min = min_pair;
      for (std::size_t k : path_) {
        const double d = t_.pair(k, i);
        added_sum += d;
        added_min = std::min(added_min, d);
      }
      used_[i] = true;
      path_.push_back(i);
      ordered(depth + 1, rel_sum + t_.rel[i], pair_sum + added_sum, std::max(max_rel, t_.rel[i]),
              added_min);
      path_.pop_back();
      used_[i] = false;
    }
  }

  void combos(std::size_t from) {
    if (path_.size() == n_) {
      consider_greedy();
      return;
    }
    for (std::size_t i = from; i + (n_ - path_.size()) <= t_.ids.size(); ++i) {
      path_.push_back(i);
      combos(i + 1);
      path_.pop_back();
    }
  }

  const std::vector<std::size_t>& best() const { return best_; }

 private:
  double score(double rel_sum, double pair_sum, double max_rel, double min_pair) const {
    const double n = static_cast<double>(n_);
    if (p_.variant == Variant::kMinAvg) {
      double s = p_.lambda / n * rel_sum;
      if (n_ > 1) s -= (1.0 - p_.lambda) / (n * (n - 1.0)) * pair_sum;
      return s;
    }
    double s = p_.lambda * max_rel;
    if (n_ > 1) s -= (1.0 - p_.lambda) * min_pair;
    return s;
  }

  void consider(double s) { consider(s, path_); }

  void consider(double s, const std::vector<std::size_t>& order) {
    if (best_.empty() || s < best_score_ ||
        (s == best_score_ && ids_of(order) < ids_of(best_))) {
      best_score_ = s;
      best_ = order;
    }
  }

  std::vector<VertexId> ids_of(const std::vector<std::size_t>& order) const {
    std::vector<VertexId> out;
    for (std::size_t i : order) out.push_back(t_.ids[i]);
    return out;
  }

  // Orders the chosen combination by repeatedly appending the member with
  // the smallest score after insertion.
  void consider_greedy() {
    std::vector<std::size_t> rest = path_;
    std::vector<std::size_t> order;
    double rel_sum = 0.0, pair_sum = 0.0, max_rel = 0.0;
    double min_pair = std::numeric_limits<double>::infinity();
    const std::size_t saved_n = n_;
    while (!rest.empty()) {
      std::size_t pick = 0;
      double pick_score = std::numeric_limits<double>::infinity();
      double pick_sum = 0.0, pick_min = 0.0;
      for (std::size_t r = 0; r < rest.size(); ++r) {
        const std::size_t i = rest[r];
        double s_sum = 0.0, s_min = min_pair;
        for (std::size_t k : order) {
          s_sum += t_.pair(k, i);
          s_min = std::min(s_min, t_.pair(k, i));
        }
        n_ = order.size() + 1;
        const double s = score(rel_sum + t_.rel[i], pair_sum + s_sum, std::max(max_rel, t_.rel[i]), s_min);
        if (s < pick_score || (s == pick_score && t_.ids[i] < t_.ids[rest[pick]])) {
          pick = r;
          pick_score = s;
          pick_sum = s_sum;
          pick_min = s_min;
        }
      }
      const std::size_t i = rest[pick];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
      order.push_back(i);
      rel_sum += t_.rel[i];
      pair_sum += pick_sum;
      max_rel = std::max(max_rel, t_.rel[i]);
      min_pair = pick_min;
    }
    n_ = saved_n;
    consider(score(rel_sum, pair_sum, max_rel, min_pair), order);
  }

  const Tables& t_;
  const RankParams& p_;
  std::size_t n_;
  std::vector<bool> used_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> best_;
  double best_score_ = std::numeric_limits<double>::infinity();
};

}  // namespace

ScoredSet oracle_best_set(const DocumentGraph& g, VertexId q, std::size_t n,
                          const RestrictionSet& restriction, const RankParams& params) {
  g.check_vertex(q);
  params.validate();
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  const std::size_t m = admissible(g, q, restriction).size();
  if (m < n) {
    throw Error(ErrorCode::kInsufficientCandidates,
                "need " + std::to_string(n) + " admissible vertices, found " + std::to_string(m));
  }
  if (combinations(m, n) > 2'000'000.0) {
    throw Error(ErrorCode::kGuardExceeded, "oracle limited to 2000000 combinations");
  }

  const Tables tables = build_tables(g, q, restriction, params);
  Search search(tables, params, n);
  if (n <= 5) {
    search.ordered(0, 0.0, 0.0, 0.0, std::numeric_limits<double>::infinity());
  } else {
    search.combos(0);
  }
  ScoredSet out;
  for (std::size_t i : search.best()) out.items.push_back(tables.ids[i]);
  out.score = score_of(g, q, out.items, params);
  return out;
}

}  // namespace verso
