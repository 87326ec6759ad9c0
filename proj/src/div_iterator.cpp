#include "verso/div_iterator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace verso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool env_flag(const char* name) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

}  // namespace

IteratorOptions default_iterator_options() {
  IteratorOptions o;
  o.check_bounds = env_flag("VERSO_CHECK_BOUNDS");
  return o;
}

DivIterator::DivIterator(std::shared_ptr<QueryContext> ctx, std::vector<VertexId> members,
                         IteratorOptions options)
    : DivIterator(ctx, members, std::vector<std::size_t>(members.size() + 1, 0),
                  std::vector<bool>(members.size() + 1, false), options) {}

DivIterator::DivIterator(std::shared_ptr<QueryContext> ctx, std::vector<VertexId> members,
                         std::vector<std::size_t> cursors, std::vector<bool> saturated,
                         IteratorOptions options)
    : ctx_(std::move(ctx)),
      members_(std::move(members)),
      options_(options),
      summary_(ctx_ ? ctx_->params() : RankParams{}) {
  if (!ctx_) throw Error(ErrorCode::kInvalidArgument, "iterator needs a query context");
  if (members_.size() + 1 > kMaxSlots) {
    throw Error(ErrorCode::kInvalidArgument,
                "at most " + std::to_string(kMaxSlots - 1) + " set members are supported");
  }
  if (options_.head_entries == 0) options_.head_entries = 1;
  if (options_.batch == 0) options_.batch = 1;
  const DocumentGraph& g = ctx_->graph();
  std::vector<VertexId> sorted = members_;
  for (VertexId m : members_) {
    g.check_vertex(m);
    if (m == ctx_->query()) throw Error(ErrorCode::kInvalidArgument, "the query center cannot be a member");
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "set members must be distinct");
  }
  rebuild(cursors, saturated);
}

void DivIterator::rebuild(const std::vector<std::size_t>& cursors,
                          const std::vector<bool>& saturated) {
  const DocumentGraph& g = ctx_->graph();
  const VertexId q = ctx_->query();
  const std::size_t n = g.vertex_count();

  slots_.clear();
  for (std::size_t i = 0; i <= members_.size(); ++i) {
    const VertexId src = i == 0 ? q : members_[i - 1];
    // A leg with zero weight never needs its search.
    const double w = i == 0 ? ctx_->params().alpha : ctx_->params().beta;
    Slot s{src, &ctx_->search(src), cursors[i], saturated[i] || w == 0.0, &ctx_->text_row(src)};
    slots_.push_back(s);
  }
  all_bits_ = slots_.size() == 64 ? ~0ULL : ((1ULL << slots_.size()) - 1);
  summary_ = SetSummary::of(*ctx_, q, members_, ctx_->params());
  diss_scratch_.assign(members_.size(), 0.0);

  state_.assign(n, State::kUntouched);
  mask_.assign(n, 0);
  key_.assign(n, 0.0);
  index_.clear();
  partial_ = 0;
  candidates_ = {};
  emitted_.clear();

  const RestrictionSet& r = ctx_->restriction();
  for (VertexId v = 0; v < n; ++v) {
    if (!r.admits(v)) state_[v] = State::kExcluded;
  }
  for (const Slot& s : slots_) state_[s.source] = State::kExcluded;
  untouched_ = static_cast<std::size_t>(std::count(state_.begin(), state_.end(), State::kUntouched));

  for (std::size_t j = 0; j < slots_.size(); ++j) {
    const SourceSearch& search = *slots_[j].search;
    for (std::size_t k = 0; k < slots_[j].cursor; ++k) {
      mask_[search.settled(k).vertex] |= 1ULL << j;
    }
  }
  text_cursor_ = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (state_[v] == State::kUntouched && (mask_[v] & 1ULL)) {
      --untouched_;
      place(v);
    }
  }
}

double DivIterator::text(std::size_t slot, VertexId v) {
  double cell = (*slots_[slot].text)[v];
  if (std::isnan(cell)) cell = ctx_->text_leg(slots_[slot].source, v);
  return cell;
}

double DivIterator::radius(std::size_t slot) {
  Slot& s = slots_[slot];
  if (s.saturated) return 1.0;
  const double d = s.cursor < s.search->settled_count() ? s.search->settled(s.cursor).distance
                                                        : s.search->next_distance();
  return ctx_->graph().normalize(d);
}

double DivIterator::completed_gain(VertexId v, bool use_radius) {
  const DocumentGraph& g = ctx_->graph();
  const RankParams& p = ctx_->params();
  const std::uint64_t mask = mask_[v];

  double g_rel;
  if (mask & 1ULL) {
    g_rel = g.normalize(slots_[0].search->distance(v));
  } else if (slots_[0].saturated) {
    g_rel = 1.0;
  } else {
    g_rel = use_radius ? radius(0) : 0.0;
  }
  const double rel = blend(p.alpha, g_rel, text(0, v));
  for (std::size_t j = 1; j < slots_.size(); ++j) {
    const double g_diss = (mask >> j) & 1ULL ? g.normalize(slots_[j].search->distance(v)) : 1.0;
    diss_scratch_[j - 1] = blend(p.beta, g_diss, text(j, v));
  }
  return summary_.gain(rel, diss_scratch_);
}

bool DivIterator::resolved(VertexId v) const {
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    if (!((mask_[v] >> j) & 1ULL) && !slots_[j].saturated) return false;
  }
  return true;
}

void DivIterator::place(VertexId v) {
  const double key = completed_gain(v, false);
  key_[v] = key;
  const bool was_partial = state_[v] == State::kPartial;
  if (resolved(v)) {
    if (was_partial) --partial_;
    state_[v] = State::kCandidate;
    candidates_.emplace(key, v);
  } else if (!was_partial) {
    ++partial_;
    state_[v] = State::kPartial;
    index_.emplace(key, v);
  }
  // Keys only grow as legs resolve, so an older index entry stays a valid
  // lower bound; bound() re-keys it when it reaches the head.
}

void DivIterator::on_settled(VertexId v, std::size_t slot) {
  mask_[v] |= 1ULL << slot;
  switch (state_[v]) {
    case State::kUntouched:
      // Member legs alone do not tighten the unseen bound; the text stream
      // places these later.
      if (slot == 0) {
        --untouched_;
        place(v);
      }
      break;
    case State::kPartial:
      place(v);
      break;
    default:
      break;
  }
}

bool DivIterator::advance(std::size_t slot) {
  Slot& s = slots_[slot];
  if (s.saturated) return false;
  const bool cached = s.cursor < s.search->settled_count();
  const double d = cached ? s.search->settled(s.cursor).distance : s.search->next_distance();
  if (ctx_->graph().normalize(d) >= 1.0) {
    saturate(slot);
    return false;
  }
  if (!cached) s.search->settle_next();
  const VertexId v = s.search->settled(s.cursor).vertex;
  ++s.cursor;
  on_settled(v, slot);
  return true;
}

void DivIterator::saturate(std::size_t slot) {
  slots_[slot].saturated = true;
  // Completed keys change (the center's unknown leg is now exactly 1) and
  // some entries may have become fully resolved.
  std::vector<VertexId> pending;
  pending.reserve(partial_);
  for (const Key& k : index_) {
    if (state_[k.second] == State::kPartial) pending.push_back(k.second);
  }
  index_.clear();
  partial_ = 0;
  for (VertexId v : pending) {
    state_[v] = State::kUntouched;
    place(v);
  }
}

std::optional<VertexId> DivIterator::next_unseen() {
  const auto order = ctx_->text_order();
  while (text_cursor_ < order.size() && state_[order[text_cursor_]] != State::kUntouched) ++text_cursor_;
  if (text_cursor_ == order.size()) return std::nullopt;
  return order[text_cursor_];
}

void DivIterator::stream_step() {
  for (std::size_t i = 0; i < options_.batch; ++i) {
    const auto v = next_unseen();
    if (!v) break;
    --untouched_;
    place(*v);
  }
}

double DivIterator::unseen_bound() {
  // An unplaced vertex lies beyond the center's radius and no closer in text
  // than the stream head; member legs are completed with 1.
  const auto head = next_unseen();
  if (!head) return kInf;
  const RankParams& p = ctx_->params();
  const double rel = blend(p.alpha, radius(0), text(0, *head));
  std::fill(diss_scratch_.begin(), diss_scratch_.end(), 1.0);
  return summary_.gain(rel, diss_scratch_);
}

double DivIterator::bound(std::optional<VertexId>& blocker) {
  blocker.reset();
  double best = untouched_ > 0 ? unseen_bound() : kInf;

  // Keys complete the center leg with 0, so they never exceed the radius
  // completion: re-complete the head entries, then every entry whose key is
  // still below the best completed value.
  const bool center_known = slots_[0].saturated;
  double index_best = kInf;
  VertexId index_vertex = 0;
  std::size_t scanned = 0;
  for (auto it = index_.begin(); it != index_.end();) {
    const Key k = *it;
    if (scanned >= options_.head_entries && k.first >= index_best) break;
    const VertexId v = k.second;
    if (state_[v] != State::kPartial || k.first != key_[v]) {
      it = index_.erase(it);
      if (state_[v] == State::kPartial) {
        // The new key may still sort ahead of `it`.
        const auto moved = index_.emplace(key_[v], v).first;
        if (it == index_.end() || *moved < *it) it = moved;
      }
      continue;
    }
    ++it;
    const double lb = (center_known || (mask_[v] & 1ULL)) ? k.first : completed_gain(v, true);
    if (lb < index_best) {
      index_best = lb;
      index_vertex = v;
    }
    ++scanned;
  }
  if (index_best < best) {
    best = index_best;
    blocker = index_vertex;
  }
  return best;
}

std::size_t DivIterator::pick_slot(const std::optional<VertexId>& blocker) const {
  if (!blocker) {
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      if (!slots_[j].saturated) return j;
    }
    return 0;
  }
  const VertexId v = *blocker;
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    if (!((mask_[v] >> j) & 1ULL) && !slots_[j].saturated) return j;
  }
  return 0;
}

bool DivIterator::has_next() const {
  return !candidates_.empty() || partial_ > 0 || untouched_ > 0;
}

std::optional<Addendum> DivIterator::next() {
  const auto start = std::chrono::steady_clock::now();
  const bool timed = options_.emission_timeout.count() > 0;
  while (true) {
    if (!has_next()) return std::nullopt;
    std::optional<VertexId> blocker;
    const double b = bound(blocker);
    if (!candidates_.empty()) {
      // Strict: an unresolved vertex whose bound equals the head's gain could
      // still win the tie on id.
      if (candidates_.top().first < b || (partial_ == 0 && untouched_ == 0)) return emit(false);
      if (timed && std::chrono::steady_clock::now() - start >= options_.emission_timeout) {
        return emit(true);
      }
    }
    if (!blocker && untouched_ > 0) {
      // The unseen bound is the smallest: push the text stream, alternating
      // with the center search while its radius is still informative.
      stream_turn_ = !stream_turn_;
      if (stream_turn_ || slots_[0].saturated) {
        stream_step();
        continue;
      }
    }
    const std::size_t slot = pick_slot(blocker);
    for (std::size_t i = 0; i < options_.batch; ++i) {
      if (!advance(slot)) break;
    }
  }
}

Addendum DivIterator::emit(bool timed_out) {
  const Key head = candidates_.top();
  if (options_.check_bounds && !timed_out) verify_emission(head);
  candidates_.pop();
  state_[head.second] = State::kEmitted;
  emitted_.push_back(head.second);
  return {head.second, head.first, timed_out};
}

void DivIterator::verify_emission(const Key& head) const {
  const DocumentGraph& g = ctx_->graph();
  const RankParams& p = ctx_->params();
  std::vector<std::vector<double>> paths;
  for (const Slot& s : slots_) paths.push_back(shortest_paths(g, s.source));
  std::vector<double> diss(members_.size());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const State st = state_[v];
    if (v == head.second || st == State::kExcluded || st == State::kEmitted) continue;
    const double rel = blend(p.alpha, g.normalize(paths[0][v]), g.text_distance(slots_[0].source, v));
    for (std::size_t j = 1; j < slots_.size(); ++j) {
      diss[j - 1] = blend(p.beta, g.normalize(paths[j][v]), g.text_distance(slots_[j].source, v));
    }
    const double gain = summary_.gain(rel, diss);
    if (gain < head.first || (gain == head.first && v < head.second)) {
      throw std::logic_error("bound violation: emitted " + std::to_string(head.second) + " with gain " +
                             std::to_string(head.first) + " but vertex " + std::to_string(v) +
                             " has gain " + std::to_string(gain));
    }
  }
}

DivIterator DivIterator::expand(VertexId s) const {
  ctx_->graph().check_vertex(s);
  if (s == ctx_->query() || std::find(members_.begin(), members_.end(), s) != members_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex " + std::to_string(s) + " is already a source of this iterator");
  }
  std::vector<VertexId> members = members_;
  members.push_back(s);
  std::vector<std::size_t> cursors;
  std::vector<bool> saturated;
  for (const Slot& slot : slots_) {
    cursors.push_back(slot.cursor);
    saturated.push_back(slot.saturated);
  }
  cursors.push_back(0);
  saturated.push_back(false);
  return DivIterator(ctx_, std::move(members), std::move(cursors), std::move(saturated), options_);
}

DivIterator DivIterator::replace(VertexId out, VertexId in) const {
  ctx_->graph().check_vertex(in);
  auto pos = std::find(members_.begin(), members_.end(), out);
  if (pos == members_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex " + std::to_string(out) + " is not a member of this iterator's set");
  }
  if (in == ctx_->query() || std::find(members_.begin(), members_.end(), in) != members_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "vertex " + std::to_string(in) + " is already a source of this iterator");
  }
  const std::size_t removed_slot = static_cast<std::size_t>(pos - members_.begin()) + 1;
  std::vector<VertexId> members;
  std::vector<std::size_t> cursors;
  std::vector<bool> saturated;
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    if (j == removed_slot) continue;
    if (j > 0) members.push_back(slots_[j].source);
    cursors.push_back(slots_[j].cursor);
    saturated.push_back(slots_[j].saturated);
  }
  members.push_back(in);
  cursors.push_back(0);
  saturated.push_back(false);
  return DivIterator(ctx_, std::move(members), std::move(cursors), std::move(saturated), options_);
}

std::vector<std::size_t> DivIterator::source_relaxations() const {
  std::vector<std::size_t> out;
  for (const Slot& s : slots_) out.push_back(s.search->relaxations());
  return out;
}

StructureCensus DivIterator::census() const {
  StructureCensus c;
  // partial-score index: id, score and source bitmask per entry
  c.ids += index_.size();
  c.scores += index_.size();
  c.bitmasks += index_.size();
  c.ids += candidates_.size();
  c.scores += candidates_.size();
  c.ids += emitted_.size();
  return c;
}

Addendum verso(const DocumentGraph& g, VertexId q, std::span<const VertexId> members,
               const RestrictionSet& restriction, const RankParams& params) {
  auto ctx = std::make_shared<QueryContext>(g, q, params, restriction);
  DivIterator it(ctx, std::vector<VertexId>(members.begin(), members.end()));
  auto best = it.next();
  if (!best) throw Error(ErrorCode::kEmptyResult, "no admissible vertex can extend the set");
  return *best;
}

}  // namespace verso
