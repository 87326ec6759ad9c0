#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "verso/pipeline.hpp"

namespace verso {

/// Picks the document that best matches free text: 2 * Jaccard overlap of
/// query and title tokens plus cosine of the query term counts against the
/// document vector, ties by lower id. Documents without terms are skipped.
/// Throws kInvalidArgument for a query without tokens and kNotFound when no
/// document shares a token with it.
VertexId resolve_query_center(const DocumentGraph& g, std::string_view text);

struct DiversifyRequest {
  std::optional<std::string> query;
  std::optional<VertexId> center_id;
  PipelineConfig config;
  RankParams params;
};

/// Reads {query|center_id, n, kg, kc, lambda, alpha, beta, variant, td_ms,
/// tc_ms}; absent fields keep their defaults.
DiversifyRequest parse_diversify_request(const nlohmann::json& body);

/// Directed hop counts from `source`; -1 marks unreachable vertices.
std::vector<int> hop_counts(const DocumentGraph& g, VertexId source);

nlohmann::json diversify_json(const DocumentGraph& g, VertexId q, const RankParams& params,
                              const DiversifyResult& result);
nlohmann::json doc_json(const DocumentGraph& g, VertexId id);
/// Up to `cap` vertices closest (in hops) to `id` within `hops`, with the
/// edges among them.
nlohmann::json neighborhood_json(const DocumentGraph& g, VertexId id, int hops,
                                 std::size_t cap = 200);
nlohmann::json health_json(const DocumentGraph& g);
nlohmann::json error_json(std::string_view code, std::string_view message);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Request handlers without any transport; the HTTP server only routes.
ApiResponse handle_diversify(const DocumentGraph& g, const std::string& body);
ApiResponse handle_doc(const DocumentGraph& g, const std::string& id);
ApiResponse handle_neighborhood(const DocumentGraph& g, const std::string& id,
                                const std::string& hops);
ApiResponse handle_health(const DocumentGraph& g);

class HttpService {
 public:
  explicit HttpService(const DocumentGraph& g);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds to host:port (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace verso
