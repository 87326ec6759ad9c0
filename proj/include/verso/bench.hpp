#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "verso/baseline.hpp"
#include "verso/pipeline.hpp"

namespace verso {

/// One configuration of the benchmark grid.
struct GridPoint {
  Variant variant = Variant::kMinAvg;
  double lambda = 0.8;
  double alpha = 0.0;
  double beta = 0.8;
  std::size_t n = 10;
  std::size_t kg = 2;
  std::size_t kc = 2;
  std::size_t ell = 2;
};

/// Cartesian product of per-field value lists. Parsed from a JSON object
/// whose keys (variant, lambda, alpha, beta, n, kg, kc, ell) map to a value or
/// an array of values; missing keys keep the defaults and kc follows kg
/// unless given.
struct BenchGrid {
  std::vector<Variant> variant{Variant::kMinAvg};
  std::vector<double> lambda{0.8};
  std::vector<double> alpha{0.0};
  std::vector<double> beta{0.8};
  std::vector<std::size_t> n{10};
  std::vector<std::size_t> kg{2};
  std::vector<std::size_t> kc;  // empty: same as kg
  std::vector<std::size_t> ell{2};

  std::vector<GridPoint> points() const;
};

BenchGrid parse_grid(const std::string& json_text);
BenchGrid load_grid(const std::string& path);

struct BenchOptions {
  std::size_t queries = 100;
  std::uint64_t seed = 1;
  std::chrono::milliseconds t_d{0};
  std::optional<std::chrono::milliseconds> t_c;
};

struct MetricsRow {
  std::size_t query_id = 0;
  VertexId center_id = 0;
  GridPoint point;
  std::string method;  // diversify | best_coverage
  std::string phase;   // greedy | hillclimb | total
  double elapsed_ms = 0.0;
  std::size_t logical_bytes_peak = 0;
  double score = 0.0;
};

/// Query centers drawn uniformly with `seed`, skipping documents without
/// any term.
std::vector<VertexId> draw_query_centers(const DocumentGraph& g, std::size_t count,
                                         std::uint64_t seed);

/// Runs every grid point on every query center: the greedy and hill-climbing
/// phases of diversify and the coverage baseline, three rows per query.
std::vector<MetricsRow> run_benchmark(const DocumentGraph& g, const BenchGrid& grid,
                                      const BenchOptions& options);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

}  // namespace verso
