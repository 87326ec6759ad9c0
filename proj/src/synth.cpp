#include "verso/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

namespace verso {

void SynthConfig::validate() const {
  if (num_docs < 1 || links_per_doc < 1 || lemmas_per_doc < 1) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic counts must be at least 1");
  }
  if (!(zipf_skew >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "zipf skew must be >= 0");
  if (links_per_doc >= num_docs) {
    throw Error(ErrorCode::kInvalidArgument, "links per doc must be smaller than the number of docs");
  }
}

DocumentGraph generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);
  const std::size_t n = cfg.num_docs;

  std::vector<std::vector<Edge>> links(n);
  std::unordered_set<std::uint64_t> seen;
  const std::size_t wanted = n * cfg.links_per_doc;
  seen.reserve(wanted * 2);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  while (seen.size() < wanted) {
    const VertexId u = pick(rng);
    const VertexId v = pick(rng);
    if (u == v) continue;
    if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) continue;
    links[u].push_back({v, 1.0});
  }

  const std::size_t vocab = cfg.effective_vocab();
  std::vector<double> weights(vocab);
  for (std::size_t r = 0; r < vocab; ++r) {
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_skew);
  }
  std::discrete_distribution<std::size_t> lemma(weights.begin(), weights.end());

  std::vector<RawDocument> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i].key = "d" + std::to_string(i);
    raw[i].title = "document " + std::to_string(i);
    raw[i].tokens.reserve(cfg.lemmas_per_doc);
    for (std::size_t k = 0; k < cfg.lemmas_per_doc; ++k) {
      raw[i].tokens.push_back("l" + std::to_string(lemma(rng)));
    }
  }
  TfidfResult tf = build_tfidf(raw);
  return DocumentGraph(std::move(tf.docs), std::move(tf.vocabulary), std::move(links));
}

DocumentGraph random_small_graph(const SmallGraphConfig& cfg, std::mt19937_64& rng) {
  if (cfg.min_v < 1 || cfg.max_v < cfg.min_v || cfg.vocab < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad small graph config");
  }
  const std::size_t n = std::uniform_int_distribution<std::size_t>(cfg.min_v, cfg.max_v)(rng);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<Edge>> links(n);
  for (VertexId u = 0; u < n; ++u) {
    const std::size_t degree =
        std::uniform_int_distribution<std::size_t>(0, std::min(cfg.max_out, n - 1))(rng);
    std::unordered_set<VertexId> chosen;
    while (chosen.size() < degree) {
      const VertexId v = pick(rng);
      if (v == u || !chosen.insert(v).second) continue;
      links[u].push_back({v, cfg.weighted ? 0.5 + 1.5 * unit(rng) : 1.0});
    }
  }

  std::vector<std::string> vocab(cfg.vocab);
  for (std::size_t t = 0; t < cfg.vocab; ++t) vocab[t] = "t" + std::to_string(t);
  std::uniform_int_distribution<TermId> term(0, static_cast<TermId>(cfg.vocab - 1));
  std::vector<Document> docs(n);
  for (std::size_t i = 0; i < n; ++i) {
    docs[i].key = "v" + std::to_string(i);
    docs[i].title = "vertex " + std::to_string(i);
    if (unit(rng) < cfg.empty_vector_rate) continue;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, cfg.terms_per_doc)(rng);
    std::vector<TermVector::Entry> entries;
    for (std::size_t j = 0; j < k; ++j) entries.push_back({term(rng), 0.1 + unit(rng)});
    docs[i].vector = TermVector(std::move(entries));
  }
  return DocumentGraph(std::move(docs), std::move(vocab), std::move(links));
}

}  // namespace verso
