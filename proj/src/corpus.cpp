#include "verso/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"

namespace verso {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kDomain: return "DOMAIN_ERROR";
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kEmptyResult: return "EMPTY_RESULT";
    case ErrorCode::kInsufficientCandidates: return "INSUFFICIENT_CANDIDATES";
    case ErrorCode::kGuardExceeded: return "GUARD_EXCEEDED";
    case ErrorCode::kIo: return "IO_ERROR";
  }
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// TermVector

TermVector::TermVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.term < b.term; });
  for (const Entry& e : entries) {
    if (!entries_.empty() && entries_.back().term == e.term) {
      entries_.back().weight += e.weight;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return !(e.weight > 0.0); });
  double sq = 0.0;
  for (const Entry& e : entries_) sq += e.weight * e.weight;
  norm_ = std::sqrt(sq);
}

double TermVector::weight(TermId term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const Entry& e, TermId t) { return e.term < t; });
  return (it != entries_.end() && it->term == term) ? it->weight : 0.0;
}

double TermVector::dot(const TermVector& other) const {
  double sum = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->term < b->term) {
      ++a;
    } else if (b->term < a->term) {
      ++b;
    } else {
      sum += a->weight * b->weight;
      ++a;
      ++b;
    }
  }
  return sum;
}

bool operator==(const TermVector& a, const TermVector& b) {
  return a.entries_.size() == b.entries_.size() &&
         std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                    [](const TermVector::Entry& x, const TermVector::Entry& y) {
                      return x.term == y.term && x.weight == y.weight;
                    });
}

double text_distance(const TermVector& u, const TermVector& v) {
  if (u.empty() || v.empty()) {
    throw Error(ErrorCode::kDomain, "undefined cosine: empty term vector");
  }
  const double cosine = u.dot(v) / (u.norm() * v.norm());
  return std::clamp(1.0 - cosine, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// RestrictionSet

RestrictionSet RestrictionSet::whitelist(std::vector<VertexId> members) {
  RestrictionSet r;
  r.mode_ = Mode::kWhitelist;
  r.members_.insert(members.begin(), members.end());
  return r;
}

RestrictionSet RestrictionSet::blacklist(std::vector<VertexId> members) {
  RestrictionSet r;
  r.mode_ = Mode::kBlacklist;
  r.members_.insert(members.begin(), members.end());
  return r;
}

bool RestrictionSet::admits(VertexId v) const {
  switch (mode_) {
    case Mode::kAllowAll: return true;
    case Mode::kWhitelist: return members_.contains(v);
    case Mode::kBlacklist: return !members_.contains(v);
  }
  return false;
}

// ---------------------------------------------------------------------------
// DocumentGraph

DocumentGraph::DocumentGraph(std::vector<Document> docs, std::vector<std::string> vocabulary,
                             std::vector<std::vector<Edge>> links)
    : docs_(std::move(docs)), vocabulary_(std::move(vocabulary)) {
  build(std::move(links));
  diameter_ = compute_diameter(*this);
}

DocumentGraph::DocumentGraph(std::vector<Document> docs, std::vector<std::string> vocabulary,
                             std::vector<std::vector<Edge>> links, DiameterInfo diameter)
    : docs_(std::move(docs)), vocabulary_(std::move(vocabulary)), diameter_(diameter) {
  build(std::move(links));
  if (!(diameter_.value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "diameter must be positive");
  }
}

void DocumentGraph::build(std::vector<std::vector<Edge>> links) {
  if (links.size() > docs_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "adjacency has more rows than documents");
  }
  links.resize(docs_.size());
  offsets_.assign(1, 0);
  targets_.clear();
  std::vector<VertexId> seen_stamp(docs_.size(), std::numeric_limits<VertexId>::max());
  for (VertexId u = 0; u < docs_.size(); ++u) {
    for (const Edge& e : links[u]) {
      if (e.target >= docs_.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "edge " + std::to_string(u) + "->" + std::to_string(e.target) +
                        " targets an unknown vertex");
      }
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw Error(ErrorCode::kInvalidArgument, "edge weights must be positive and finite");
      }
      if (e.target == u || seen_stamp[e.target] == u) continue;
      seen_stamp[e.target] = u;
      targets_.push_back(e);
    }
    offsets_.push_back(targets_.size());
  }
  key_index_.clear();
  for (VertexId v = 0; v < docs_.size(); ++v) {
    if (!docs_[v].key.empty()) key_index_.emplace(docs_[v].key, v);
  }
}

double DocumentGraph::mean_out_degree() const {
  return docs_.empty() ? 0.0 : static_cast<double>(targets_.size()) / docs_.size();
}

void DocumentGraph::check_vertex(VertexId v) const {
  if (!valid(v)) {
    throw Error(ErrorCode::kNotFound, "vertex " + std::to_string(v) + " does not exist");
  }
}

const Document& DocumentGraph::doc(VertexId v) const {
  check_vertex(v);
  return docs_[v];
}

std::span<const Edge> DocumentGraph::out_edges(VertexId v) const {
  check_vertex(v);
  return std::span<const Edge>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

double DocumentGraph::normalize(double path_weight) const {
  return std::min(1.0, path_weight / diameter_.value);
}

double DocumentGraph::text_distance(VertexId a, VertexId b) const {
  const TermVector& u = doc(a).vector;
  const TermVector& v = doc(b).vector;
  if (u.empty() || v.empty()) return 1.0;
  return verso::text_distance(u, v);
}

std::size_t DocumentGraph::empty_vector_count() const {
  return static_cast<std::size_t>(
      std::count_if(docs_.begin(), docs_.end(), [](const Document& d) { return d.vector.empty(); }));
}

bool DocumentGraph::find_key(const std::string& key, VertexId& out) const {
  auto it = key_index_.find(key);
  if (it == key_index_.end()) return false;
  out = it->second;
  return true;
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  template <typename T>
  void add(const T& value) {
    add(&value, sizeof(T));
  }
  void add(const std::string& s) {
    add(s.size());
    add(s.data(), s.size());
  }
};

}  // namespace

std::uint64_t DocumentGraph::checksum() const {
  Fnv f;
  f.add(docs_.size());
  for (const Document& d : docs_) {
    f.add(d.key);
    f.add(d.title);
    for (const auto& e : d.vector.entries()) {
      f.add(e.term);
      f.add(e.weight);
    }
  }
  for (std::size_t o : offsets_) f.add(o);
  for (const Edge& e : targets_) {
    f.add(e.target);
    f.add(e.weight);
  }
  f.add(diameter_.value);
  return f.h;
}

// ---------------------------------------------------------------------------
// Distances

std::vector<double> shortest_paths(const DocumentGraph& g, VertexId source) {
  g.check_vertex(source);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.vertex_count(), kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const Edge& e : g.out_edges(u)) {
      const double nd = d + e.weight;
      if (nd < dist[e.target]) {
        dist[e.target] = nd;
        heap.emplace(nd, e.target);
      }
    }
  }
  return dist;
}

double graph_distance(const DocumentGraph& g, VertexId u, VertexId v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return 0.0;
  return g.normalize(shortest_paths(g, u)[v]);
}

namespace {

// Returns (farthest reachable vertex, its distance).
std::pair<VertexId, double> farthest(const std::vector<double>& dist) {
  VertexId best = 0;
  double best_d = -1.0;
  for (VertexId v = 0; v < dist.size(); ++v) {
    if (std::isfinite(dist[v]) && dist[v] > best_d) {
      best_d = dist[v];
      best = v;
    }
  }
  return {best, best_d};
}

}  // namespace

DiameterInfo compute_diameter(const DocumentGraph& g, const DiameterOptions& options) {
  DiameterInfo info;
  double max_seen = 0.0;
  const std::size_t n = g.vertex_count();
  if (n <= options.exact_threshold) {
    for (VertexId s = 0; s < n; ++s) {
      max_seen = std::max(max_seen, farthest(shortest_paths(g, s)).second);
    }
    info.exact = true;
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    for (std::size_t i = 0; i < options.sample_sources; ++i) {
      const VertexId s = pick(rng);
      auto [t, d1] = farthest(shortest_paths(g, s));
      max_seen = std::max(max_seen, d1);
      if (d1 > 0.0) {
        max_seen = std::max(max_seen, farthest(shortest_paths(g, t)).second);
      }
    }
    info.exact = false;
  }
  if (max_seen > 0.0) {
    info.value = max_seen;
  } else {
    info.value = 1.0;
    info.degenerate = true;
  }
  return info;
}

// ---------------------------------------------------------------------------
// tf-idf

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

TfidfResult build_tfidf(const std::vector<RawDocument>& raw) {
  if (raw.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  TfidfResult result;
  std::unordered_map<std::string, TermId> term_ids;
  std::vector<std::size_t> df;
  std::vector<std::vector<std::pair<TermId, std::size_t>>> tf(raw.size());

  for (std::size_t d = 0; d < raw.size(); ++d) {
    std::unordered_map<TermId, std::size_t> counts;
    for (const std::string& token : raw[d].tokens) {
      auto [it, inserted] = term_ids.emplace(token, static_cast<TermId>(result.vocabulary.size()));
      if (inserted) {
        result.vocabulary.push_back(token);
        df.push_back(0);
      }
      ++counts[it->second];
    }
    for (const auto& [term, count] : counts) {
      ++df[term];
      tf[d].emplace_back(term, count);
    }
  }

  const double n = static_cast<double>(raw.size());
  result.docs.reserve(raw.size());
  for (std::size_t d = 0; d < raw.size(); ++d) {
    std::vector<TermVector::Entry> entries;
    for (const auto& [term, count] : tf[d]) {
      const double idf = std::log(n / static_cast<double>(df[term]));
      if (idf > 0.0) entries.push_back({term, static_cast<double>(count) * idf});
    }
    Document doc{raw[d].key, raw[d].title, TermVector(std::move(entries))};
    if (doc.vector.empty()) result.empty_vectors.push_back(static_cast<VertexId>(d));
    result.docs.push_back(std::move(doc));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Collection format

namespace {

using nlohmann::json;

std::string key_of(const json& value, std::size_t line) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": id must be a string");
}

struct ParsedLine {
  std::string key;
  std::string title;
  bool has_tokens = false;
  std::vector<std::string> tokens;
  std::vector<std::pair<std::string, double>> tfidf;
  std::vector<std::pair<std::string, double>> links;
  std::size_t line = 0;
};

ParsedLine parse_line(const std::string& text, std::size_t line) {
  auto fail = [line](const std::string& what) {
    return Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
  };
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw fail(std::string("malformed JSON (") + e.what() + ")");
  }
  if (!obj.is_object()) throw fail("record is not an object");
  if (!obj.contains("id")) throw fail("missing field 'id'");

  ParsedLine p;
  p.line = line;
  p.key = key_of(obj["id"], line);
  if (obj.contains("title")) {
    if (!obj["title"].is_string()) throw fail("'title' must be a string");
    p.title = obj["title"].get<std::string>();
  }
  const bool has_tokens = obj.contains("tokens");
  const bool has_tfidf = obj.contains("tfidf");
  if (has_tokens == has_tfidf) throw fail("exactly one of 'tokens' or 'tfidf' is required");
  if (has_tokens) {
    if (!obj["tokens"].is_array()) throw fail("'tokens' must be an array");
    p.has_tokens = true;
    for (const json& t : obj["tokens"]) {
      if (!t.is_string()) throw fail("'tokens' entries must be strings");
      p.tokens.push_back(t.get<std::string>());
    }
  } else {
    if (!obj["tfidf"].is_object()) throw fail("'tfidf' must be an object");
    for (const auto& [term, w] : obj["tfidf"].items()) {
      if (!w.is_number()) throw fail("'tfidf' weights must be numbers");
      p.tfidf.emplace_back(term, w.get<double>());
    }
  }
  if (obj.contains("links")) {
    if (!obj["links"].is_array()) throw fail("'links' must be an array");
    for (const json& l : obj["links"]) {
      if (l.is_object()) {
        if (!l.contains("id")) throw fail("link object without 'id'");
        double w = 1.0;
        if (l.contains("weight")) {
          if (!l["weight"].is_number()) throw fail("link weight must be a number");
          w = l["weight"].get<double>();
          if (!(w > 0.0)) throw fail("link weight must be positive");
        }
        p.links.emplace_back(key_of(l["id"], line), w);
      } else {
        p.links.emplace_back(key_of(l, line), 1.0);
      }
    }
  }
  return p;
}

}  // namespace

DocumentGraph ingest_collection_text(const std::string& text, IngestReport* report) {
  std::vector<ParsedLine> lines;
  std::unordered_map<std::string, VertexId> ids;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    ParsedLine p = parse_line(raw, line_no);
    if (!ids.emplace(p.key, static_cast<VertexId>(lines.size())).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(line_no) + ": duplicate document id '" + p.key + "'");
    }
    lines.push_back(std::move(p));
  }
  if (lines.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corpus");

  const bool tokens = lines.front().has_tokens;
  for (const ParsedLine& p : lines) {
    if (p.has_tokens != tokens) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(p.line) +
                                         ": mixing 'tokens' and 'tfidf' records is not supported");
    }
  }

  IngestReport rep;
  std::vector<Document> docs;
  std::vector<std::string> vocabulary;
  if (tokens) {
    std::vector<RawDocument> raw_docs;
    raw_docs.reserve(lines.size());
    for (ParsedLine& p : lines) raw_docs.push_back({p.key, p.title, std::move(p.tokens)});
    TfidfResult t = build_tfidf(raw_docs);
    docs = std::move(t.docs);
    vocabulary = std::move(t.vocabulary);
  } else {
    std::unordered_map<std::string, TermId> term_ids;
    for (ParsedLine& p : lines) {
      std::vector<TermVector::Entry> entries;
      for (const auto& [term, w] : p.tfidf) {
        auto [it, inserted] = term_ids.emplace(term, static_cast<TermId>(vocabulary.size()));
        if (inserted) vocabulary.push_back(term);
        entries.push_back({it->second, w});
      }
      docs.push_back({p.key, p.title, TermVector(std::move(entries))});
    }
  }
  for (VertexId v = 0; v < docs.size(); ++v) {
    if (docs[v].vector.empty()) rep.empty_vectors.push_back(v);
  }

  std::vector<std::vector<Edge>> links(lines.size());
  std::size_t raw_resolved = 0;
  for (VertexId u = 0; u < lines.size(); ++u) {
    for (const auto& [target, w] : lines[u].links) {
      auto it = ids.find(target);
      if (it == ids.end()) {
        ++rep.dropped_links;
        continue;
      }
      ++raw_resolved;
      links[u].push_back({it->second, w});
    }
  }

  DocumentGraph g(std::move(docs), std::move(vocabulary), std::move(links));
  rep.documents = g.vertex_count();
  rep.resolved_links = g.edge_count();
  rep.self_or_duplicate_links = raw_resolved - g.edge_count();
  rep.mean_out_degree = g.mean_out_degree();
  if (report) *report = std::move(rep);
  return g;
}

DocumentGraph ingest_collection(const std::filesystem::path& path, IngestReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open collection " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_collection_text(buf.str(), report);
}

void write_collection(const DocumentGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const auto vocab = g.vocabulary();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const Document& d = g.doc(v);
    json rec;
    rec["id"] = d.key.empty() ? std::to_string(v) : d.key;
    rec["title"] = d.title;
    json tfidf = json::object();
    for (const auto& e : d.vector.entries()) tfidf[vocab[e.term]] = e.weight;
    rec["tfidf"] = std::move(tfidf);
    json links = json::array();
    for (const Edge& e : g.out_edges(v)) {
      const Document& t = g.doc(e.target);
      std::string key = t.key.empty() ? std::to_string(e.target) : t.key;
      if (e.weight == 1.0) {
        links.push_back(key);
      } else {
        links.push_back({{"id", key}, {"weight", e.weight}});
      }
    }
    rec["links"] = std::move(links);
    out << rec.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Binary graph file

namespace {

constexpr char kMagic[8] = {'V', 'E', 'R', 'S', 'O', 'G', 'R', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void pod(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <typename T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw Error(ErrorCode::kParse, "truncated graph file");
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    if (n > (1ULL << 32)) throw Error(ErrorCode::kParse, "corrupt string length in graph file");
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (!in_) throw Error(ErrorCode::kParse, "truncated graph file");
    return s;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_graph(const DocumentGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.pod(kVersion);
  w.pod<std::uint64_t>(g.vertex_count());
  w.pod<std::uint64_t>(g.vocabulary().size());
  for (const std::string& term : g.vocabulary()) w.str(term);
  for (const Document& d : g.docs()) {
    w.str(d.key);
    w.str(d.title);
    w.pod<std::uint64_t>(d.vector.size());
    for (const auto& e : d.vector.entries()) {
      w.pod(e.term);
      w.pod(e.weight);
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto edges = g.out_edges(v);
    w.pod<std::uint64_t>(edges.size());
    for (const Edge& e : edges) {
      w.pod(e.target);
      w.pod(e.weight);
    }
  }
  const DiameterInfo& d = g.diameter_info();
  w.pod(d.value);
  w.pod<std::uint8_t>(d.exact ? 1 : 0);
  w.pod<std::uint8_t>(d.degenerate ? 1 : 0);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

DocumentGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open graph file " + path.string());
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
    throw Error(ErrorCode::kParse, path.string() + " is not a graph file (bad magic)");
  }
  Reader r(in);
  const auto version = r.pod<std::uint32_t>();
  if (version != kVersion) {
    throw Error(ErrorCode::kParse, "unsupported graph file version " + std::to_string(version));
  }
  const auto n = r.pod<std::uint64_t>();
  const auto vocab_size = r.pod<std::uint64_t>();
  std::vector<std::string> vocabulary;
  vocabulary.reserve(vocab_size);
  for (std::uint64_t i = 0; i < vocab_size; ++i) vocabulary.push_back(r.str());
  std::vector<Document> docs;
  docs.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Document d;
    d.key = r.str();
    d.title = r.str();
    const auto len = r.pod<std::uint64_t>();
    std::vector<TermVector::Entry> entries;
    entries.reserve(len);
    for (std::uint64_t k = 0; k < len; ++k) {
      const auto term = r.pod<TermId>();
      const auto weight = r.pod<double>();
      if (term >= vocab_size) throw Error(ErrorCode::kParse, "term id out of range in graph file");
      entries.push_back({term, weight});
    }
    d.vector = TermVector(std::move(entries));
    docs.push_back(std::move(d));
  }
  std::vector<std::vector<Edge>> links(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    const auto deg = r.pod<std::uint64_t>();
    links[v].reserve(deg);
    for (std::uint64_t k = 0; k < deg; ++k) {
      const auto target = r.pod<VertexId>();
      const auto weight = r.pod<double>();
      links[v].push_back({target, weight});
    }
  }
  DiameterInfo d;
  d.value = r.pod<double>();
  d.exact = r.pod<std::uint8_t>() != 0;
  d.degenerate = r.pod<std::uint8_t>() != 0;
  return DocumentGraph(std::move(docs), std::move(vocabulary), std::move(links), d);
}

}  // namespace verso
