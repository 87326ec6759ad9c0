#include "verso/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "httplib.h"

namespace verso {

using nlohmann::json;

namespace {

std::set<std::string> token_set(std::string_view text) {
  const auto tokens = tokenize(text);
  return {tokens.begin(), tokens.end()};
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t common = 0;
  for (const std::string& t : a) common += b.count(t);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::string_view code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDomain:
    case ErrorCode::kParse:
      return "INVALID_ARGUMENT";
    case ErrorCode::kNotFound:
      return "NOT_FOUND";
    case ErrorCode::kEmptyResult:
    case ErrorCode::kInsufficientCandidates:
      return "INSUFFICIENT_CANDIDATES";
    case ErrorCode::kGuardExceeded:
      return "GUARD_EXCEEDED";
    case ErrorCode::kIo:
      return "INTERNAL";
  }
  return "INTERNAL";
}

int status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDomain:
    case ErrorCode::kParse:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kEmptyResult:
    case ErrorCode::kInsufficientCandidates:
    case ErrorCode::kGuardExceeded:
      return 422;
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

ApiResponse fail(int status, std::string_view code, std::string_view message) {
  return {status, error_json(code, message)};
}

std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename T>
T field(const json& body, const char* key, T fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field '") + key + "' has the wrong type");
  }
}

std::size_t count_field(const json& body, const char* key, std::size_t fallback) {
  const long long v = field<long long>(body, key, static_cast<long long>(fallback));
  if (v < 1) throw Error(ErrorCode::kInvalidArgument, std::string(key) + " must be at least 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

VertexId resolve_query_center(const DocumentGraph& g, std::string_view text) {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "query has no searchable terms");
  const std::set<std::string> query_set(tokens.begin(), tokens.end());

  std::unordered_map<std::string_view, TermId> term_of;
  const auto vocab = g.vocabulary();
  for (TermId t = 0; t < vocab.size(); ++t) term_of.emplace(vocab[t], t);
  std::map<TermId, double> counts;
  for (const std::string& tok : tokens) {
    auto it = term_of.find(tok);
    if (it != term_of.end()) counts[it->second] += 1.0;
  }
  std::vector<TermVector::Entry> entries;
  for (const auto& [term, c] : counts) entries.push_back({term, c});
  const TermVector qv(std::move(entries));

  std::optional<VertexId> best;
  double best_score = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const Document& d = g.doc(v);
    if (d.vector.empty()) continue;
    const double overlap = jaccard(query_set, token_set(d.title));
    const double cosine = qv.empty() ? 0.0 : qv.dot(d.vector) / (qv.norm() * d.vector.norm());
    const double score = 2.0 * overlap + cosine;
    if (score > best_score) {
      best = v;
      best_score = score;
    }
  }
  if (!best) throw Error(ErrorCode::kNotFound, "no document matches '" + std::string(text) + "'");
  return *best;
}

DiversifyRequest parse_diversify_request(const json& body) {
  if (!body.is_object()) throw Error(ErrorCode::kInvalidArgument, "request body must be an object");
  DiversifyRequest r;
  if (body.contains("query") && !body.at("query").is_null()) {
    r.query = field<std::string>(body, "query", "");
  }
  if (body.contains("center_id") && !body.at("center_id").is_null()) {
    const long long id = field<long long>(body, "center_id", -1);
    if (id < 0) throw Error(ErrorCode::kInvalidArgument, "center_id must be non-negative");
    r.center_id = static_cast<VertexId>(id);
  }
  if (!r.query && !r.center_id) {
    throw Error(ErrorCode::kInvalidArgument, "either query or center_id is required");
  }
  r.config.n = count_field(body, "n", r.config.n);
  r.config.k_g = count_field(body, "kg", r.config.k_g);
  r.config.k_c = count_field(body, "kc", r.config.k_g);
  const long long td = field<long long>(body, "td_ms", 0);
  if (td < 0) throw Error(ErrorCode::kInvalidArgument, "td_ms must be non-negative");
  r.config.t_d = std::chrono::milliseconds(td);
  if (body.contains("tc_ms") && !body.at("tc_ms").is_null()) {
    const long long tc = field<long long>(body, "tc_ms", 0);
    if (tc < 0) throw Error(ErrorCode::kInvalidArgument, "tc_ms must be non-negative");
    r.config.t_c = std::chrono::milliseconds(tc);
  }
  r.params.lambda = field<double>(body, "lambda", r.params.lambda);
  r.params.alpha = field<double>(body, "alpha", r.params.alpha);
  r.params.beta = field<double>(body, "beta", r.params.beta);
  if (body.contains("variant")) r.params.variant = parse_variant(field<std::string>(body, "variant", "avg"));
  r.params.validate();
  r.config.validate();
  return r;
}

std::vector<int> hop_counts(const DocumentGraph& g, VertexId source) {
  g.check_vertex(source);
  std::vector<int> hops(g.vertex_count(), -1);
  std::deque<VertexId> queue{source};
  hops[source] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (const Edge& e : g.out_edges(u)) {
      if (hops[e.target] >= 0) continue;
      hops[e.target] = hops[u] + 1;
      queue.push_back(e.target);
    }
  }
  return hops;
}

json diversify_json(const DocumentGraph& g, VertexId q, const RankParams& params,
                    const DiversifyResult& result) {
  DirectDistances d(g);
  const std::vector<int> hops = hop_counts(g, q);
  json items = json::array();
  std::vector<VertexId> prefix;
  for (VertexId u : result.best.items) {
    const double gain = marginal_gain(d, q, prefix, u, params);
    items.push_back({{"id", u},
                     {"key", g.doc(u).key},
                     {"title", g.doc(u).title},
                     {"rel_distance", rel_distance(d, q, u, params)},
                     {"marginal_gain", gain},
                     {"hops_from_q", hops[u] >= 0 ? json(hops[u]) : json(nullptr)}});
    prefix.push_back(u);
  }
  return {{"center", {{"id", q}, {"key", g.doc(q).key}, {"title", g.doc(q).title}}},
          {"items", items},
          {"score", result.best.score},
          {"params",
           {{"lambda", params.lambda},
            {"alpha", params.alpha},
            {"beta", params.beta},
            {"variant", to_string(params.variant)}}},
          {"timings",
           {{"greedy_ms", result.greedy.elapsed_ms},
            {"hillclimb_ms", result.hillclimb.elapsed_ms},
            {"total_ms", result.greedy.elapsed_ms + result.hillclimb.elapsed_ms}}},
          {"logical_bytes",
           {{"greedy", result.greedy.logical_bytes_peak},
            {"hillclimb", result.hillclimb.logical_bytes_peak}}},
          {"hillclimb_timed_out", result.hillclimb.timed_out}};
}

json doc_json(const DocumentGraph& g, VertexId id) {
  const Document& d = g.doc(id);
  std::vector<TermVector::Entry> terms(d.vector.entries().begin(), d.vector.entries().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
  });
  if (terms.size() > 10) terms.resize(10);
  json top = json::array();
  for (const auto& t : terms) top.push_back({{"term", g.vocabulary()[t.term]}, {"weight", t.weight}});
  json links = json::array();
  for (const Edge& e : g.out_edges(id)) links.push_back(e.target);
  return {{"id", id}, {"key", d.key}, {"title", d.title}, {"top_terms", top}, {"out_links", links}};
}

json neighborhood_json(const DocumentGraph& g, VertexId id, int hops, std::size_t cap) {
  g.check_vertex(id);
  std::vector<int> depth(g.vertex_count(), -1);
  std::vector<VertexId> order{id};
  depth[id] = 0;
  for (std::size_t i = 0; i < order.size() && order.size() < cap; ++i) {
    const VertexId u = order[i];
    if (depth[u] >= hops) continue;
    for (const Edge& e : g.out_edges(u)) {
      if (depth[e.target] >= 0) continue;
      depth[e.target] = depth[u] + 1;
      order.push_back(e.target);
      if (order.size() >= cap) break;
    }
  }
  json nodes = json::array();
  for (VertexId v : order) nodes.push_back({{"id", v}, {"title", g.doc(v).title}, {"hops", depth[v]}});
  json edges = json::array();
  for (VertexId v : order) {
    for (const Edge& e : g.out_edges(v)) {
      if (depth[e.target] >= 0) edges.push_back({{"source", v}, {"target", e.target}});
    }
  }
  return {{"center", id}, {"hops", hops}, {"nodes", nodes}, {"edges", edges}};
}

json health_json(const DocumentGraph& g) {
  char checksum[17];
  std::snprintf(checksum, sizeof checksum, "%016llx",
                static_cast<unsigned long long>(g.checksum()));
  return {{"status", "ok"},
          {"vertices", g.vertex_count()},
          {"edges", g.edge_count()},
          {"diameter", g.diameter()},
          {"checksum", checksum}};
}

json error_json(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

ApiResponse handle_diversify(const DocumentGraph& g, const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) return fail(400, "INVALID_JSON", "request body is not valid JSON");
  try {
    const DiversifyRequest req = parse_diversify_request(parsed);
    VertexId q = 0;
    if (req.center_id) {
      if (!g.valid(*req.center_id)) {
        return fail(404, "DOC_NOT_FOUND", "no document with id " + std::to_string(*req.center_id));
      }
      q = *req.center_id;
    } else {
      try {
        q = resolve_query_center(g, *req.query);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kNotFound) return fail(404, "QUERY_NOT_FOUND", e.what());
        throw;
      }
    }
    const DiversifyResult r = diversify(g, q, RestrictionSet{}, req.config, req.params);
    return {200, diversify_json(g, q, req.params, r)};
  } catch (const Error& e) {
    return fail(status_of(e.code()), code_name(e.code()), e.what());
  }
}

ApiResponse handle_doc(const DocumentGraph& g, const std::string& id) {
  const auto v = parse_int(id);
  if (!v || *v < 0 || !g.valid(static_cast<VertexId>(*v))) {
    return fail(404, "DOC_NOT_FOUND", "no document with id " + id);
  }
  return {200, doc_json(g, static_cast<VertexId>(*v))};
}

ApiResponse handle_neighborhood(const DocumentGraph& g, const std::string& id,
                                const std::string& hops) {
  const auto v = parse_int(id);
  if (!v || *v < 0 || !g.valid(static_cast<VertexId>(*v))) {
    return fail(404, "DOC_NOT_FOUND", "no document with id " + id);
  }
  long long h = 1;
  if (!hops.empty()) {
    const auto parsed = parse_int(hops);
    if (!parsed || *parsed < 0 || *parsed > 10) {
      return fail(400, "INVALID_ARGUMENT", "hops must be an integer in [0,10]");
    }
    h = *parsed;
  }
  return {200, neighborhood_json(g, static_cast<VertexId>(*v), static_cast<int>(h))};
}

ApiResponse handle_health(const DocumentGraph& g) { return {200, health_json(g)}; }

struct HttpService::Impl {
  const DocumentGraph& graph;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpService::HttpService(const DocumentGraph& g) : impl_(new Impl{g, {}}) {
  auto& s = impl_->server;
  const DocumentGraph& graph = impl_->graph;
  s.Post("/api/diversify", [&graph](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_diversify(graph, req.body));
  });
  s.Get(R"(/api/doc/([^/]+))", [&graph](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_doc(graph, req.matches[1]));
  });
  s.Get("/api/neighborhood", [&graph](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_neighborhood(graph, req.get_param_value("id"), req.get_param_value("hops")));
  });
  s.Get("/api/health", [&graph](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_health(graph));
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "unexpected failure";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    reply(res, fail(500, "INTERNAL", message));
  });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      reply(res, fail(404, "NOT_FOUND", "no such endpoint"));
    }
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

bool HttpService::serve() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace verso
