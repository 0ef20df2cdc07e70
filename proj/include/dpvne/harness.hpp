#ifndef DPVNE_HARNESS_HPP_
#define DPVNE_HARNESS_HPP_

// Batch experiment runner: generates substrates, streams request batches
// through an embedder and aggregates delay and acceptance metrics.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dpvne/baselines.hpp"
#include "dpvne/generator.hpp"
#include "dpvne/pso.hpp"
#include "dpvne/text_format.hpp"

namespace dpvne {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  GeneratorParams generator;
  PsoParams pso;
  int candidates_per_domain = 3;
  std::vector<EmbedderKind> algorithms{EmbedderKind::dp_vne};
  std::vector<int> vnr_counts{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  int repetitions = 20;
  std::uint64_t seed = 1;
  std::string out_path = "metrics.csv";
  bool trace = false;
};

inline void validate_config(const RunConfig& c) {
  try {
    check_params(c.generator);
    check_params(c.pso);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.algorithms.empty()) throw ConfigError("no algorithm selected");
  if (c.vnr_counts.empty()) throw ConfigError("vnr_counts is empty");
  for (std::size_t i = 0; i < c.vnr_counts.size(); ++i) {
    if (c.vnr_counts[i] < 1) throw ConfigError("vnr_counts must be positive");
    if (i > 0 && c.vnr_counts[i] <= c.vnr_counts[i - 1]) {
      throw ConfigError("vnr_counts must be strictly ascending");
    }
  }
  if (c.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (c.candidates_per_domain < 1) throw ConfigError("candidates_per_domain must be >= 1");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad integer for " + key + ": '" + v + "'");
}

inline double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number for " + key + ": '" + v + "'");
}

inline IntRange to_range(const std::string& key, const std::string& v) {
  const auto parts = split_commas(v);
  if (parts.size() != 2) throw ConfigError(key + " expects lo,hi");
  return {to_integer(key, parts[0]), to_integer(key, parts[1])};
}

inline bool to_flag(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("bad flag for " + key + ": '" + v + "'");
}

}  // namespace detail

inline std::vector<EmbedderKind> parse_algorithm_list(const std::string& v) {
  std::vector<EmbedderKind> out;
  for (const auto& tag : detail::split_commas(v)) {
    const auto k = parse_embedder_kind(tag);
    if (!k) throw ConfigError("unknown algorithm '" + tag + "'");
    out.push_back(*k);
  }
  return out;
}

inline std::vector<int> parse_count_list(const std::string& v) {
  std::vector<int> out;
  for (const auto& item : detail::split_commas(v)) {
    out.push_back(static_cast<int>(detail::to_integer("vnr_counts", item)));
  }
  return out;
}

// Applies one `key=value` setting.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
  using namespace detail;
  auto& g = c.generator;
  auto& p = c.pso;
  if (key == "seed") c.seed = static_cast<std::uint64_t>(to_integer(key, v));
  else if (key == "algorithm") c.algorithms = parse_algorithm_list(v);
  else if (key == "vnr_counts" || key == "vnr_count") c.vnr_counts = parse_count_list(v);
  else if (key == "repetitions" || key == "reps") c.repetitions = static_cast<int>(to_integer(key, v));
  else if (key == "out") c.out_path = v;
  else if (key == "trace") c.trace = to_flag(key, v);
  else if (key == "candidates_per_domain") c.candidates_per_domain = static_cast<int>(to_integer(key, v));
  else if (key == "n_domains") g.n_domains = static_cast<int>(to_integer(key, v));
  else if (key == "n_substrate_nodes") g.n_substrate_nodes = static_cast<int>(to_integer(key, v));
  else if (key == "substrate_cpu_range") g.substrate_cpu_range = to_range(key, v);
  else if (key == "substrate_bw_range") g.substrate_bw_range = to_range(key, v);
  else if (key == "substrate_link_delay_range") g.substrate_link_delay_range = to_range(key, v);
  else if (key == "substrate_node_delay_range") g.substrate_node_delay_range = to_range(key, v);
  else if (key == "intra_connection_rate") g.intra_connection_rate = to_real(key, v);
  else if (key == "boundary_nodes_per_domain") g.boundary_nodes_per_domain = static_cast<int>(to_integer(key, v));
  else if (key == "vnr_nodes") g.vnr_nodes = static_cast<int>(to_integer(key, v));
  else if (key == "vnr_cpu_range") g.vnr_cpu_range = to_range(key, v);
  else if (key == "vnr_bw_range") g.vnr_bw_range = to_range(key, v);
  else if (key == "n_particles") p.n_particles = static_cast<int>(to_integer(key, v));
  else if (key == "n_iterations") p.n_iterations = static_cast<int>(to_integer(key, v));
  else if (key == "pso_a") p.a = to_real(key, v);
  else if (key == "pso_b") p.b = to_real(key, v);
  else if (key == "pso_c") p.c = to_real(key, v);
  else if (key == "mutation_probability") p.mutation_probability = to_real(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

// `key=value` lines; `#` starts a comment.
inline void read_config(std::istream& is, RunConfig& c) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline void load_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  read_config(in, c);
}

struct MetricsRecord {
  int vnr_count = 0;
  EmbedderKind algorithm = EmbedderKind::dp_vne;
  std::uint64_t seed = 0;
  int accepted = 0;
  int arrived = 0;
  double success_rate = 0;
  double avg_node_delay = 0;
  double avg_link_delay = 0;
  double avg_total_delay = 0;
};

// Called once per embedded request when tracing is on and the embedder
// produced a swarm trace.
using TraceSink = std::function<void(EmbedderKind, std::uint64_t seed, int vnr_count,
                                     int request, const std::vector<Scalar>& trace)>;

// Seed of repetition r.
inline std::uint64_t repetition_seed(const RunConfig& c, int r) {
  return c.seed + static_cast<std::uint64_t>(r);
}

// One repetition, one batch size: fresh substrate, `vnr_count` requests
// embedded in order with no departures.
inline MetricsRecord run_batch(const RunConfig& c, EmbedderKind kind,
                               std::uint64_t seed, int vnr_count,
                               const TraceSink& sink = {}) {
  Rng substrate_rng = make_rng(seed, 0, 0);
  SubstrateNetwork net = generate_substrate(c.generator, substrate_rng);
  EmbedOptions opts;
  opts.candidates_per_domain = c.candidates_per_domain;
  opts.pso = c.pso;

  MetricsRecord rec;
  rec.vnr_count = vnr_count;
  rec.algorithm = kind;
  rec.seed = seed;
  rec.arrived = vnr_count;
  Scalar node_sum = 0, link_sum = 0;
  for (int i = 0; i < vnr_count; ++i) {
    Rng request_rng = make_rng(seed, 1, static_cast<std::uint64_t>(i));
    const VirtualNetworkRequest vnr = generate_request(c.generator, request_rng, i);
    Rng embed_rng = make_rng(seed, 2 + static_cast<std::uint64_t>(kind),
                             static_cast<std::uint64_t>(i));
    std::vector<Scalar> trace;
    const EmbeddingResult r = embed(kind, vnr, net, opts, embed_rng, &trace);
    if (sink && !trace.empty()) sink(kind, seed, vnr_count, i, trace);
    if (!r.accepted) continue;
    ++rec.accepted;
    node_sum += r.node_delay_term;
    link_sum += r.link_delay_term;
  }
  rec.success_rate = static_cast<double>(rec.accepted) / rec.arrived;
  if (rec.accepted > 0) {
    rec.avg_node_delay = node_sum / rec.accepted;
    rec.avg_link_delay = link_sum / rec.accepted;
    rec.avg_total_delay = (node_sum + link_sum) / rec.accepted;
  }
  return rec;
}

inline std::vector<MetricsRecord> run_experiment(const RunConfig& c,
                                                 const TraceSink& sink = {}) {
  validate_config(c);
  std::vector<MetricsRecord> out;
  for (EmbedderKind kind : c.algorithms) {
    for (int r = 0; r < c.repetitions; ++r) {
      for (int count : c.vnr_counts) {
        out.push_back(run_batch(c, kind, repetition_seed(c, r), count, sink));
      }
    }
  }
  return out;
}

inline constexpr const char* kCsvHeader =
    "vnr_count,algorithm,seed,accepted,arrived,success_rate,avg_node_delay,"
    "avg_link_delay,avg_total_delay";

// Rows sorted by (algorithm tag, vnr_count, seed).
inline void write_csv(std::ostream& os, std::vector<MetricsRecord> records) {
  if (records.empty()) throw std::invalid_argument("write_csv: no records");
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(std::string(to_string(a.algorithm)), a.vnr_count, a.seed) <
           std::make_tuple(std::string(to_string(b.algorithm)), b.vnr_count, b.seed);
  });
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.vnr_count << ',' << to_string(r.algorithm) << ',' << r.seed << ','
       << r.accepted << ',' << r.arrived << ',' << format_fixed6(r.success_rate) << ','
       << format_fixed6(r.avg_node_delay) << ',' << format_fixed6(r.avg_link_delay)
       << ',' << format_fixed6(r.avg_total_delay) << '\n';
  }
}

inline void write_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(out, records);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

inline std::vector<MetricsRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::runtime_error("read_csv: missing or unexpected header");
  }
  std::vector<MetricsRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_commas(line);
    if (f.size() != 9) throw std::runtime_error("read_csv: expected 9 fields");
    MetricsRecord r;
    r.vnr_count = std::stoi(f[0]);
    const auto kind = parse_embedder_kind(f[1]);
    if (!kind) throw std::runtime_error("read_csv: unknown algorithm " + f[1]);
    r.algorithm = *kind;
    r.seed = std::stoull(f[2]);
    r.accepted = std::stoi(f[3]);
    r.arrived = std::stoi(f[4]);
    r.success_rate = std::stod(f[5]);
    r.avg_node_delay = std::stod(f[6]);
    r.avg_link_delay = std::stod(f[7]);
    r.avg_total_delay = std::stod(f[8]);
    out.push_back(r);
  }
  return out;
}

}  // namespace dpvne

#endif  // DPVNE_HARNESS_HPP_
