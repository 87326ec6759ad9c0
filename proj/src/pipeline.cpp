#include "verso/pipeline.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>

namespace verso {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool better(const ScoredSet& a, const ScoredSet& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.items < b.items;
}

std::vector<VertexId> sorted_key(std::vector<VertexId> items) {
  std::sort(items.begin(), items.end());
  return items;
}

StructureCensus census_of(const ScoredSet& s) {
  StructureCensus c;
  c.ids = s.items.size();
  c.scores = 1;
  return c;
}

/// Bounded collection that keeps the `capacity` best sets; the worst one is
/// the eviction threshold.
class BestSets {
 public:
  explicit BestSets(std::size_t capacity) : capacity_(capacity) {}

  bool full() const { return sets_.size() >= capacity_; }
  std::size_t size() const { return sets_.size(); }
  const ScoredSet& worst() const { return sets_.back(); }

  bool contains(const ScoredSet& s) const {
    return std::any_of(sets_.begin(), sets_.end(),
                       [&](const ScoredSet& x) { return x.items == s.items; });
  }

  /// Inserts when there is room or when `s` beats the worst member.
  bool offer(ScoredSet s) {
    if (contains(s)) return false;
    if (full()) {
      if (!better(s, worst())) return false;
      sets_.pop_back();
    }
    auto pos = std::lower_bound(sets_.begin(), sets_.end(), s, better);
    sets_.insert(pos, std::move(s));
    return true;
  }

  std::vector<ScoredSet> take() { return std::move(sets_); }
  StructureCensus census() const {
    StructureCensus c;
    for (const ScoredSet& s : sets_) c += census_of(s);
    return c;
  }

 private:
  std::size_t capacity_;
  std::vector<ScoredSet> sets_;  // best first
};

class PeakTracker {
 public:
  void sample(const StructureCensus& c) { peak_ = std::max(peak_, logical_bytes(c)); }
  std::size_t peak() const { return peak_; }

 private:
  std::size_t peak_ = 0;
};

IteratorOptions iterator_options(const PipelineConfig& config) {
  IteratorOptions o = default_iterator_options();
  o.emission_timeout = config.t_d;
  return o;
}

}  // namespace

void PipelineConfig::validate() const {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  if (k_g < 1) throw Error(ErrorCode::kInvalidArgument, "k_g must be at least 1");
  if (k_c < 1) throw Error(ErrorCode::kInvalidArgument, "k_c must be at least 1");
  if (t_d.count() < 0 || (t_c && t_c->count() < 0)) {
    throw Error(ErrorCode::kInvalidArgument, "time-outs must be non-negative");
  }
}

std::chrono::milliseconds PipelineConfig::effective_t_c() const {
  if (t_c) return *t_c;
  if (t_d.count() > 0) {
    return t_d * static_cast<long long>(t_c_multiple * n * k_g);
  }
  return std::chrono::milliseconds{0};
}

std::size_t admissible_count(const QueryContext& ctx) {
  const DocumentGraph& g = ctx.graph();
  std::size_t count = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v != ctx.query() && ctx.restriction().admits(v)) ++count;
  }
  return count;
}

std::vector<ScoredSet> greeverso(const std::shared_ptr<QueryContext>& ctx, std::size_t n,
                                 std::size_t k_g, const PipelineConfig& config, PhaseStats* stats) {
  const auto start = Clock::now();
  if (n < 1 || k_g < 1) throw Error(ErrorCode::kInvalidArgument, "n and k_g must be at least 1");
  const std::size_t available = admissible_count(*ctx);
  if (available < n) {
    throw Error(ErrorCode::kInsufficientCandidates,
                "need " + std::to_string(n) + " admissible vertices but only " +
                    std::to_string(available) + " exist (short by " +
                    std::to_string(n - available) + ")");
  }

  struct Branch {
    ScoredSet set;
    std::unique_ptr<DivIterator> it;
  };
  PeakTracker peak;
  auto sample = [&](const std::vector<Branch>& a, const std::vector<Branch>& b,
                    const BestSets& result) {
    StructureCensus c = ctx->census();
    for (const auto* level : {&a, &b}) {
      for (const Branch& br : *level) {
        c += census_of(br.set);
        if (br.it) c += br.it->census();
      }
    }
    c += result.census();
    peak.sample(c);
  };

  const IteratorOptions options = iterator_options(config);
  BestSets result(k_g);
  std::vector<Branch> level;
  std::vector<Branch> next_level;

  // Seeds: the k_g vertices with the best relevance, i.e. the first
  // emissions for the empty set.
  DivIterator root(ctx, {}, options);
  for (std::size_t i = 0; i < k_g; ++i) {
    auto a = root.next();
    if (!a) break;
    ScoredSet seed{{a->vertex}, ctx->score(std::vector<VertexId>{a->vertex})};
    if (n == 1) {
      result.offer(std::move(seed));
    } else {
      level.push_back({std::move(seed), std::make_unique<DivIterator>(root.expand(a->vertex))});
    }
    sample(level, next_level, result);
  }

  std::size_t rounds = 0;
  while (!level.empty()) {
    ++rounds;
    next_level.clear();
    for (Branch& br : level) {
      std::size_t counter = 0;
      while (br.it->has_next()) {
        auto a = br.it->next();
        if (!a) break;
        ScoredSet grown{br.set.items, 0.0};
        grown.items.push_back(a->vertex);
        grown.score = ctx->score(grown.items);
        if (grown.items.size() == n) {
          // Emissions arrive in gain order, so once a complete set fails to
          // beat the worst kept result no later one from this branch can.
          if (!result.full() || better(grown, result.worst())) {
            result.offer(std::move(grown));
          } else {
            break;
          }
        } else {
          next_level.push_back({std::move(grown), std::make_unique<DivIterator>(br.it->expand(a->vertex))});
          sample(level, next_level, result);
          if (++counter >= k_g) break;
        }
      }
      sample(level, next_level, result);
      br.it.reset();
    }
    std::sort(next_level.begin(), next_level.end(),
              [](const Branch& a, const Branch& b) { return better(a.set, b.set); });
    if (next_level.size() > k_g) next_level.resize(k_g);
    level.swap(next_level);
  }

  if (stats) {
    stats->elapsed_ms = ms_since(start);
    stats->logical_bytes_peak = peak.peak();
    stats->iterations = rounds;
  }
  return result.take();
}

std::vector<ScoredSet> interverso(const std::shared_ptr<QueryContext>& ctx,
                                  const std::vector<ScoredSet>& seeds, std::size_t k_c,
                                  const PipelineConfig& config, PhaseStats* stats) {
  const auto start = Clock::now();
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "interverso needs at least one seed");
  if (k_c < 1) throw Error(ErrorCode::kInvalidArgument, "k_c must be at least 1");
  const std::size_t n = seeds.front().items.size();
  for (const ScoredSet& s : seeds) {
    if (s.items.size() != n || n == 0) {
      throw Error(ErrorCode::kInvalidArgument, "all seeds must share the same non-zero cardinality");
    }
  }

  const auto budget = config.effective_t_c();
  const bool bounded = budget.count() > 0;
  const IteratorOptions options = iterator_options(config);
  PeakTracker peak;
  BestSets candidates(k_c);

  struct Pending {
    double score;
    std::vector<VertexId> items;
    bool operator>(const Pending& o) const {
      if (score != o.score) return score > o.score;
      return items > o.items;
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> subsets;
  std::map<std::vector<VertexId>, std::unique_ptr<DivIterator>> iterators;
  std::set<std::vector<VertexId>> queued;
  std::size_t queued_ids = 0;

  auto sample = [&] {
    StructureCensus c = ctx->census();
    for (const auto& [_, it] : iterators) c += it->census();
    c.ids += queued_ids;
    c.scores += subsets.size();
    c += candidates.census();
    peak.sample(c);
  };

  for (const ScoredSet& seed : seeds) {
    if (n > 1) {
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<VertexId> subset = seed.items;
        subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(i));
        if (!queued.insert(sorted_key(subset)).second) continue;
        iterators.emplace(subset, std::make_unique<DivIterator>(ctx, subset, options));
        subsets.push({ctx->score(subset), subset});
        queued_ids += subset.size();
      }
    }
    candidates.offer(seed);
    sample();
  }

  bool timed_out = false;
  std::size_t iterations = 0;
  auto out_of_time = [&] {
    if (bounded && Clock::now() - start >= budget) timed_out = true;
    return timed_out;
  };

  while (!subsets.empty() && !out_of_time()) {
    if (config.max_iterations > 0 && iterations >= config.max_iterations) break;
    ++iterations;
    Pending subset = subsets.top();
    subsets.pop();
    queued_ids -= subset.items.size();
    auto node = iterators.extract(subset.items);
    std::unique_ptr<DivIterator> replacements = std::move(node.mapped());

    while (replacements->has_next() && !out_of_time()) {
      auto r = replacements->next();
      if (!r) break;
      ScoredSet augmented{subset.items, 0.0};
      augmented.items.push_back(r->vertex);
      augmented.score = ctx->score(augmented.items);

      for (VertexId s : subset.items) {
        std::vector<VertexId> reduced;
        reduced.reserve(subset.items.size());
        for (VertexId x : augmented.items) {
          if (x != s) reduced.push_back(x);
        }
        const double reduced_score = ctx->score(reduced);
        if (!(reduced_score < subset.score)) continue;
        if (candidates.full() && !(reduced_score < candidates.worst().score)) continue;
        if (!queued.insert(sorted_key(reduced)).second) continue;
        iterators.emplace(reduced,
                          std::make_unique<DivIterator>(replacements->replace(s, r->vertex)));
        queued_ids += reduced.size();
        subsets.push({reduced_score, std::move(reduced)});
      }

      if (!candidates.full() || better(augmented, candidates.worst())) {
        candidates.offer(std::move(augmented));
      } else {
        break;
      }
      sample();
    }
    sample();
  }

  if (stats) {
    stats->elapsed_ms = ms_since(start);
    stats->logical_bytes_peak = peak.peak();
    stats->timed_out = timed_out;
    stats->iterations = iterations;
  }
  return candidates.take();
}

DiversifyResult diversify(const std::shared_ptr<QueryContext>& ctx, const PipelineConfig& config) {
  config.validate();
  DiversifyResult out;
  out.seeds = greeverso(ctx, config.n, config.k_g, config, &out.greedy);
  if (out.seeds.empty()) throw Error(ErrorCode::kEmptyResult, "greedy stage produced no set");
  out.refined = interverso(ctx, out.seeds, config.k_c, config, &out.hillclimb);
  out.best = out.refined.front();
  return out;
}

DiversifyResult diversify(const DocumentGraph& g, VertexId q, const RestrictionSet& restriction,
                          const PipelineConfig& config, const RankParams& params) {
  auto ctx = std::make_shared<QueryContext>(g, q, params, restriction);
  return diversify(ctx, config);
}

}  // namespace verso
