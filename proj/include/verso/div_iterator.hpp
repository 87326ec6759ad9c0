#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <vector>

#include "verso/search.hpp"

namespace verso {

struct Addendum {
  VertexId vertex;
  double gain;
  bool timed_out = false;  // emitted early because the per-emission budget ran out
};

struct IteratorOptions {
  /// Number of head entries of the partial-score index that are re-completed
  /// with the current search radius before the bound is trusted.
  std::size_t head_entries = 3;
  /// Settles performed on one source between two bound checks.
  std::size_t batch = 64;
  /// Per-emission budget; zero disables it.
  std::chrono::milliseconds emission_timeout{0};
  /// Verify every emission against exact gains of all pending vertices.
  /// Defaults to the VERSO_CHECK_BOUNDS environment variable.
  bool check_bounds = false;
};

IteratorOptions default_iterator_options();

/// Streams the vertices that can be appended to an ordered set S in order of
/// their marginal gain (ties by lower id), exactly. One best-first search runs
/// from the query center and from every member of S; a vertex becomes a
/// candidate once every search has either settled it or saturated at the
/// diameter. Until then it sits in the partial-score index keyed by a lower
/// bound of its gain: unknown legs from the center are completed with 0 and
/// unknown legs from members with 1, which is valid because the gain grows
/// with relevance distances and shrinks with dissimilarity distances.
/// Vertices the center search has not reached enter through a second stream
/// ordered by text distance to the center.
class DivIterator {
 public:
  DivIterator(std::shared_ptr<QueryContext> ctx, std::vector<VertexId> members,
              IteratorOptions options = default_iterator_options());

  bool has_next() const;
  /// Next best addendum, or nullopt at end of stream.
  std::optional<Addendum> next();

  /// Iterator for S + {s}. Search progress is carried over; emissions are
  /// not, so the child streams exactly what a fresh iterator would.
  DivIterator expand(VertexId s) const;
  /// Iterator for (S \ {out}) + {in}, `in` appended last.
  DivIterator replace(VertexId out, VertexId in) const;

  std::span<const VertexId> members() const { return members_; }
  std::span<const VertexId> emitted() const { return emitted_; }
  const SetSummary& summary() const { return summary_; }
  const QueryContext& context() const { return *ctx_; }
  std::shared_ptr<QueryContext> shared_context() const { return ctx_; }

  /// Relaxation counters of the searches behind each source (center first).
  std::vector<std::size_t> source_relaxations() const;
  std::size_t candidate_count() const { return candidates_.size(); }
  std::size_t index_size() const { return index_.size(); }
  StructureCensus census() const;

  void set_emission_timeout(std::chrono::milliseconds t) { options_.emission_timeout = t; }
  void set_check_bounds(bool on) { options_.check_bounds = on; }

 private:
  enum class State : std::uint8_t { kUntouched, kPartial, kCandidate, kEmitted, kExcluded };
  static constexpr std::size_t kMaxSlots = 64;

  struct Slot {
    VertexId source;
    SourceSearch* search;
    std::size_t cursor = 0;   // settled entries of `search` this iterator has consumed
    bool saturated = false;   // every unconsumed vertex lies at normalized distance 1
    std::vector<double>* text = nullptr;
  };

  using Key = std::pair<double, VertexId>;

  DivIterator(std::shared_ptr<QueryContext> ctx, std::vector<VertexId> members,
              std::vector<std::size_t> cursors, std::vector<bool> saturated,
              IteratorOptions options);
  void rebuild(const std::vector<std::size_t>& cursors, const std::vector<bool>& saturated);

  double text(std::size_t slot, VertexId v);
  double radius(std::size_t slot);
  /// Gain of v with unknown legs completed; `use_radius` substitutes the
  /// center's current radius instead of 0 for an unknown center leg.
  double completed_gain(VertexId v, bool use_radius);
  bool resolved(VertexId v) const;
  void place(VertexId v);
  void on_settled(VertexId v, std::size_t slot);
  bool advance(std::size_t slot);
  void saturate(std::size_t slot);
  std::optional<VertexId> next_unseen();
  double unseen_bound();
  void stream_step();
  double bound(std::optional<VertexId>& blocker);
  std::size_t pick_slot(const std::optional<VertexId>& blocker) const;
  Addendum emit(bool timed_out);
  void verify_emission(const Key& head) const;

  std::shared_ptr<QueryContext> ctx_;
  std::vector<VertexId> members_;
  IteratorOptions options_;
  SetSummary summary_;
  std::vector<Slot> slots_;
  std::uint64_t all_bits_ = 0;

  std::vector<State> state_;
  std::vector<std::uint64_t> mask_;
  std::vector<double> key_;
  std::set<Key> index_;
  std::size_t partial_ = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> candidates_;
  std::size_t untouched_ = 0;  // admissible vertices not yet placed
  std::size_t text_cursor_ = 0;
  bool stream_turn_ = false;
  std::vector<VertexId> emitted_;
  std::vector<double> diss_scratch_;
};

/// The single best vertex to append to `members`, exactly.
/// Throws kEmptyResult when no admissible vertex exists.
Addendum verso(const DocumentGraph& g, VertexId q, std::span<const VertexId> members,
               const RestrictionSet& restriction, const RankParams& params);

}  // namespace verso
