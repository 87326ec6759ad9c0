#include "verso/bench.hpp"

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace verso {

namespace {

using nlohmann::json;

template <typename T, typename Convert>
void read_list(const json& obj, const char* key, std::vector<T>& out, Convert convert) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  out.clear();
  if (v.is_array()) {
    for (const json& x : v) out.push_back(convert(x));
  } else {
    out.push_back(convert(v));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("grid field '") + key + "' is empty");
  }
}

double as_double(const json& x) {
  if (!x.is_number()) throw Error(ErrorCode::kParse, "grid value must be a number");
  return x.get<double>();
}

std::size_t as_count(const json& x) {
  if (!x.is_number_integer() || x.get<long long>() < 1) {
    throw Error(ErrorCode::kParse, "grid count must be a positive integer");
  }
  return x.get<std::size_t>();
}

Variant as_variant(const json& x) {
  if (!x.is_string()) throw Error(ErrorCode::kParse, "grid variant must be a string");
  return parse_variant(x.get<std::string>());
}

std::string format_double(double v, int precision) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

}  // namespace

std::vector<GridPoint> BenchGrid::points() const {
  std::vector<GridPoint> out;
  for (Variant var : variant) {
    for (double l : lambda) {
      for (double a : alpha) {
        for (double b : beta) {
          for (std::size_t nn : n) {
            for (std::size_t g : kg) {
              const std::vector<std::size_t> kcs = kc.empty() ? std::vector<std::size_t>{g} : kc;
              for (std::size_t c : kcs) {
                for (std::size_t e : ell) out.push_back({var, l, a, b, nn, g, c, e});
              }
            }
          }
        }
      }
    }
  }
  return out;
}

BenchGrid parse_grid(const std::string& json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("grid: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::kParse, "grid must be a JSON object");
  BenchGrid g;
  try {
    read_list(obj, "variant", g.variant, as_variant);
    read_list(obj, "lambda", g.lambda, as_double);
    read_list(obj, "alpha", g.alpha, as_double);
    read_list(obj, "beta", g.beta, as_double);
    read_list(obj, "n", g.n, as_count);
    read_list(obj, "kg", g.kg, as_count);
    read_list(obj, "kc", g.kc, as_count);
    read_list(obj, "ell", g.ell, as_count);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("grid: ") + e.what());
  }
  for (const GridPoint& p : g.points()) {
    RankParams{p.lambda, p.alpha, p.beta, p.variant}.validate();
  }
  return g;
}

BenchGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open grid file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

std::vector<VertexId> draw_query_centers(const DocumentGraph& g, std::size_t count,
                                         std::uint64_t seed) {
  if (g.vertex_count() == 0) throw Error(ErrorCode::kInvalidArgument, "graph is empty");
  if (g.empty_vector_count() == g.vertex_count()) {
    throw Error(ErrorCode::kInvalidArgument, "no document has a term vector");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
  std::vector<VertexId> out;
  out.reserve(count);
  while (out.size() < count) {
    const VertexId v = pick(rng);
    if (!g.doc(v).vector.empty()) out.push_back(v);
  }
  return out;
}

std::vector<MetricsRow> run_benchmark(const DocumentGraph& g, const BenchGrid& grid,
                                      const BenchOptions& options) {
  const std::vector<VertexId> centers = draw_query_centers(g, options.queries, options.seed);
  std::vector<MetricsRow> rows;
  for (const GridPoint& point : grid.points()) {
    const RankParams params{point.lambda, point.alpha, point.beta, point.variant};
    PipelineConfig config;
    config.n = point.n;
    config.k_g = point.kg;
    config.k_c = point.kc;
    config.t_d = options.t_d;
    config.t_c = options.t_c;
    for (std::size_t qi = 0; qi < centers.size(); ++qi) {
      const VertexId q = centers[qi];
      const DiversifyResult r = diversify(g, q, RestrictionSet{}, config, params);
      MetricsRow base{qi, q, point, "diversify", "greedy", r.greedy.elapsed_ms,
                      r.greedy.logical_bytes_peak, r.seeds.front().score};
      rows.push_back(base);
      base.phase = "hillclimb";
      base.elapsed_ms = r.hillclimb.elapsed_ms;
      base.logical_bytes_peak = r.hillclimb.logical_bytes_peak;
      base.score = r.best.score;
      rows.push_back(base);

      BaselineStats stats;
      const ScoredSet b = best_coverage(g, q, point.n, RestrictionSet{}, {point.ell, params}, &stats);
      rows.push_back({qi, q, point, "best_coverage", "total", stats.elapsed_ms,
                      stats.logical_bytes_peak, b.score});
    }
  }
  return rows;
}

const char* const kCsvHeader =
    "query_id,center_id,variant,lambda,alpha,beta,n,kg,kc,method,phase,elapsed_ms,"
    "logical_bytes_peak,score";

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    out << r.query_id << ',' << r.center_id << ',' << to_string(r.point.variant) << ','
        << format_double(r.point.lambda, 6) << ',' << format_double(r.point.alpha, 6) << ','
        << format_double(r.point.beta, 6) << ',' << r.point.n << ',' << r.point.kg << ','
        << r.point.kc << ',' << r.method << ',' << r.phase << ','
        << format_double(r.elapsed_ms, 6) << ',' << r.logical_bytes_peak << ','
        << format_double(r.score, 17) << '\n';
  }
}

}  // namespace verso
