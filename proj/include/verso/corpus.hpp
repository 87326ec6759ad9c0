#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "verso/error.hpp"

namespace verso {

using VertexId = std::uint32_t;
using TermId = std::uint32_t;

/// Sparse term-weight vector. Entries are kept sorted by term id and only
/// strictly positive weights are stored.
class TermVector {
 public:
  struct Entry {
    TermId term;
    double weight;
  };

  TermVector() = default;
  /// Zero and negative weights are dropped; duplicate terms are summed.
  explicit TermVector(std::vector<Entry> entries);

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const { return norm_; }
  double weight(TermId term) const;

  double dot(const TermVector& other) const;

  friend bool operator==(const TermVector& a, const TermVector& b);

 private:
  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

/// Cosine distance 1 - <u,v>/(|u||v|), clamped to [0,1].
/// Throws kDomain ("undefined cosine") when either vector is empty.
double text_distance(const TermVector& u, const TermVector& v);

struct Document {
  std::string key;  // external id from the collection file
  std::string title;
  TermVector vector;
};

struct Edge {
  VertexId target;
  double weight;
};

/// Admission filter for result candidates. Restricted vertices still take part
/// in graph traversal, they just never appear in a result.
class RestrictionSet {
 public:
  enum class Mode { kAllowAll, kWhitelist, kBlacklist };

  RestrictionSet() = default;
  static RestrictionSet allow_all() { return {}; }
  static RestrictionSet whitelist(std::vector<VertexId> members);
  static RestrictionSet blacklist(std::vector<VertexId> members);

  Mode mode() const { return mode_; }
  bool admits(VertexId v) const;
  const std::unordered_set<VertexId>& members() const { return members_; }

 private:
  Mode mode_ = Mode::kAllowAll;
  std::unordered_set<VertexId> members_;
};

struct DiameterInfo {
  double value = 1.0;
  bool exact = true;
  bool degenerate = false;  // no finite path at all; value defaulted to 1.0
};

struct DiameterOptions {
  std::size_t exact_threshold = 2000;
  std::size_t sample_sources = 16;
  std::uint64_t seed = 0x5eedULL;
};

/// Immutable directed document graph with CSR out-adjacency.
class DocumentGraph {
 public:
  DocumentGraph() = default;

  /// `links[u]` holds the out-edges of vertex u. Self-links and duplicate
  /// targets are removed (first occurrence wins), targets are validated.
  /// When `diameter` is not supplied it is computed with default options.
  DocumentGraph(std::vector<Document> docs, std::vector<std::string> vocabulary,
                std::vector<std::vector<Edge>> links);
  DocumentGraph(std::vector<Document> docs, std::vector<std::string> vocabulary,
                std::vector<std::vector<Edge>> links, DiameterInfo diameter);

  std::size_t vertex_count() const { return docs_.size(); }
  std::size_t edge_count() const { return targets_.size(); }
  double mean_out_degree() const;

  const Document& doc(VertexId v) const;
  std::span<const Document> docs() const { return docs_; }
  std::span<const std::string> vocabulary() const { return vocabulary_; }
  std::span<const Edge> out_edges(VertexId v) const;

  bool valid(VertexId v) const { return v < docs_.size(); }
  void check_vertex(VertexId v) const;

  const DiameterInfo& diameter_info() const { return diameter_; }
  double diameter() const { return diameter_.value; }

  /// Maps a shortest-path weight onto [0,1]; infinity (unreachable) maps to 1.
  double normalize(double path_weight) const;

  /// Text distance between two vertices. Unlike the vector-level function,
  /// a vertex with an empty vector is treated as maximally distant (1.0).
  double text_distance(VertexId a, VertexId b) const;

  std::size_t empty_vector_count() const;
  /// Lookup by external key; returns false when absent.
  bool find_key(const std::string& key, VertexId& out) const;
  std::uint64_t checksum() const;

 private:
  void build(std::vector<std::vector<Edge>> links);

  std::vector<Document> docs_;
  std::vector<std::string> vocabulary_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Edge> targets_;
  std::unordered_map<std::string, VertexId> key_index_;
  DiameterInfo diameter_;
};

/// Shortest directed path weights from `source` (Dijkstra). Unreachable
/// vertices hold +infinity.
std::vector<double> shortest_paths(const DocumentGraph& g, VertexId source);

/// min(1, shortest u->v path weight / diameter); unreachable -> 1.0.
double graph_distance(const DocumentGraph& g, VertexId u, VertexId v);

/// Exact maximum finite shortest-path weight for small graphs, double-sweep
/// estimate above `exact_threshold` vertices.
DiameterInfo compute_diameter(const DocumentGraph& g, const DiameterOptions& options = {});

struct RawDocument {
  std::string key;
  std::string title;
  std::vector<std::string> tokens;
};

struct TfidfResult {
  std::vector<Document> docs;
  std::vector<std::string> vocabulary;
  std::vector<VertexId> empty_vectors;  // documents left without any term
};

/// weight(t, d) = tf(t, d) * ln(N / df(t)); terms with df == N are dropped.
TfidfResult build_tfidf(const std::vector<RawDocument>& raw);

struct IngestReport {
  std::size_t documents = 0;
  std::size_t resolved_links = 0;
  std::size_t dropped_links = 0;
  std::size_t self_or_duplicate_links = 0;
  double mean_out_degree = 0.0;
  std::vector<VertexId> empty_vectors;
};

/// Reads the line-delimited JSON collection format.
DocumentGraph ingest_collection(const std::filesystem::path& path, IngestReport* report = nullptr);
DocumentGraph ingest_collection_text(const std::string& text, IngestReport* report = nullptr);

/// Writes the graph back in the collection format, using the `tfidf` field.
void write_collection(const DocumentGraph& g, const std::filesystem::path& path);

void save_graph(const DocumentGraph& g, const std::filesystem::path& path);
DocumentGraph load_graph(const std::filesystem::path& path);

/// Lower-cases ASCII letters and splits on anything that is not a letter,
/// digit or a non-ASCII byte (so UTF-8 words stay intact).
std::vector<std::string> tokenize(std::string_view text);

}  // namespace verso
