#include "verso/search.hpp"

#include <algorithm>
#include <cmath>

namespace verso {

SourceSearch::SourceSearch(const DocumentGraph& g, VertexId source)
    : graph_(&g),
      source_(source),
      dist_(g.vertex_count(), std::numeric_limits<double>::infinity()),
      settled_(g.vertex_count(), false) {
  g.check_vertex(source);
  dist_[source] = 0.0;
  frontier_.emplace(0.0, source);
}

void SourceSearch::drop_stale() {
  while (!frontier_.empty() && settled_[frontier_.top().second]) frontier_.pop();
}

bool SourceSearch::settle_next() {
  drop_stale();
  if (frontier_.empty()) return false;
  const auto [d, u] = frontier_.top();
  frontier_.pop();
  settled_[u] = true;
  order_.push_back({u, d});
  for (const Edge& e : graph_->out_edges(u)) {
    ++relaxations_;
    if (settled_[e.target]) continue;
    const double nd = d + e.weight;
    if (nd < dist_[e.target]) {
      dist_[e.target] = nd;
      frontier_.emplace(nd, e.target);
    }
  }
  return true;
}

double SourceSearch::next_distance() {
  drop_stale();
  return frontier_.empty() ? std::numeric_limits<double>::infinity() : frontier_.top().first;
}

bool SourceSearch::exhausted() {
  drop_stale();
  return frontier_.empty();
}

double SourceSearch::distance_to(VertexId v) {
  graph_->check_vertex(v);
  while (!settled_[v] && settle_next()) {
  }
  return settled_[v] ? dist_[v] : std::numeric_limits<double>::infinity();
}

StructureCensus SourceSearch::census() const {
  StructureCensus c;
  c.ids = frontier_.size() + order_.size();
  c.weights = frontier_.size() + order_.size();
  return c;
}

QueryContext::QueryContext(const DocumentGraph& g, VertexId query, RankParams params,
                           RestrictionSet restriction)
    : graph_(&g), query_(query), params_(params), restriction_(std::move(restriction)) {
  g.check_vertex(query);
  params_.validate();
}

SourceSearch& QueryContext::search(VertexId source) {
  auto it = searches_.find(source);
  if (it == searches_.end()) {
    it = searches_.emplace(source, std::make_unique<SourceSearch>(*graph_, source)).first;
  }
  return *it->second;
}

double QueryContext::graph_leg(VertexId from, VertexId to) {
  if (from == to) return 0.0;
  return graph_->normalize(search(from).distance_to(to));
}

std::vector<double>& QueryContext::text_row(VertexId source) {
  graph_->check_vertex(source);
  auto it = text_rows_.find(source);
  if (it == text_rows_.end()) {
    it = text_rows_
             .emplace(source, std::vector<double>(graph_->vertex_count(),
                                                  std::numeric_limits<double>::quiet_NaN()))
             .first;
  }
  return it->second;
}

double QueryContext::text_leg(VertexId a, VertexId b) {
  // The distance is symmetric, so reuse whichever row already exists.
  auto it = text_rows_.find(a);
  if (it == text_rows_.end()) {
    auto other = text_rows_.find(b);
    if (other != text_rows_.end()) {
      std::swap(a, b);
      it = other;
    }
  }
  std::vector<double>& row = it != text_rows_.end() ? it->second : text_row(a);
  graph_->check_vertex(b);
  double& cell = row[b];
  if (std::isnan(cell)) {
    cell = cosine_distance(a, b);
    ++text_entries_;
  }
  return cell;
}

std::span<const VertexId> QueryContext::text_order() {
  if (text_order_.empty() && graph_->vertex_count() > 0) {
    std::vector<std::pair<double, VertexId>> keyed;
    keyed.reserve(graph_->vertex_count());
    for (VertexId v = 0; v < graph_->vertex_count(); ++v) keyed.emplace_back(text_leg(query_, v), v);
    std::sort(keyed.begin(), keyed.end());
    text_order_.reserve(keyed.size());
    for (const auto& [_, v] : keyed) text_order_.push_back(v);
  }
  return text_order_;
}

double QueryContext::cosine_distance(VertexId row, VertexId other) {
  constexpr std::size_t kMaxScatter = std::size_t{1} << 18;
  const TermVector& u = graph_->doc(row).vector;
  const TermVector& v = graph_->doc(other).vector;
  if (u.empty() || v.empty() || graph_->vocabulary().size() > kMaxScatter) {
    return graph_->text_distance(row, other);
  }
  auto it = scatters_.find(row);
  if (it == scatters_.end()) {
    std::vector<double> dense(graph_->vocabulary().size(), 0.0);
    for (const auto& e : u.entries()) dense[e.term] = e.weight;
    it = scatters_.emplace(row, std::move(dense)).first;
  }
  // Same products in the same term order as TermVector::dot.
  const std::vector<double>& dense = it->second;
  double dot = 0.0;
  for (const auto& e : v.entries()) dot += dense[e.term] * e.weight;
  return std::clamp(1.0 - dot / (u.norm() * v.norm()), 0.0, 1.0);
}

StructureCensus QueryContext::census() const {
  StructureCensus c;
  for (const auto& [_, s] : searches_) c += s->census();
  c.ids += text_entries_ + text_order_.size();
  c.scores += text_entries_;
  return c;
}

}  // namespace verso
