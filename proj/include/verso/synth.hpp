#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "verso/corpus.hpp"

namespace verso {

struct SynthConfig {
  std::size_t num_docs = 10000;
  std::size_t links_per_doc = 10;
  std::size_t lemmas_per_doc = 100;
  double zipf_skew = 0.1;
  std::size_t vocab_size = 0;  // 0 means 10 * lemmas_per_doc
  std::uint64_t rng_seed = 42;

  void validate() const;
  std::size_t effective_vocab() const { return vocab_size ? vocab_size : 10 * lemmas_per_doc; }
};

/// Random directed graph with exactly num_docs * links_per_doc distinct
/// edges (no self-loops) and zipf-distributed lemma bags turned into tf-idf
/// vectors. Identical configs give identical graphs.
DocumentGraph generate_synthetic(const SynthConfig& cfg);

/// Small random instance for exhaustive checks: vertex count uniform in
/// [min_v, max_v], out-degree uniform in [0, max_out], up to terms_per_doc
/// random terms per document out of `vocab`.
struct SmallGraphConfig {
  std::size_t min_v = 2;
  std::size_t max_v = 200;
  std::size_t max_out = 6;
  std::size_t vocab = 30;
  std::size_t terms_per_doc = 5;
  double empty_vector_rate = 0.0;
  bool weighted = false;  // edge weights uniform in [0.5, 2] instead of 1
};

DocumentGraph random_small_graph(const SmallGraphConfig& cfg, std::mt19937_64& rng);

}  // namespace verso
