#ifndef DPVNE_CLI_HPP_
#define DPVNE_CLI_HPP_

// Command-line front end of the experiment harness.
//
//   dpvne_sim [--config FILE] [--seed N] [--algorithm TAG[,TAG...]]
//             [--vnr-count N[,N...]] [--reps N] [--out FILE] [--trace]
//
// Without --config, ./dpvne.conf is read when present. Flags override file
// settings. Exit codes: 0 success, 1 I/O failure, 2 usage or config error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dpvne/harness.hpp"

namespace dpvne {

inline constexpr const char* kDefaultConfigFile = "dpvne.conf";

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Multi-domain virtual network embedding simulator"};
  std::optional<std::string> config_path, algorithm, vnr_count, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  bool trace = false;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed, "base seed; repetition r uses seed + r");
  app.add_option("--algorithm", algorithm,
                 "dp-vne | greedy-delay | random-candidate | min-bw-cost (comma list)");
  app.add_option("--vnr-count", vnr_count, "request batch sizes, e.g. 2,4,6");
  app.add_option("--reps", reps, "repetitions (independent seeds)");
  app.add_option("--out", out_path, "metrics CSV path");
  app.add_flag("--trace", trace, "dump per-request swarm traces next to the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  RunConfig config;
  try {
    if (config_path) {
      load_config_file(*config_path, config);
    } else if (std::filesystem::exists(kDefaultConfigFile)) {
      load_config_file(kDefaultConfigFile, config);
    }
    if (seed) config.seed = *seed;
    if (algorithm) config.algorithms = parse_algorithm_list(*algorithm);
    if (vnr_count) config.vnr_counts = parse_count_list(*vnr_count);
    if (reps) config.repetitions = *reps;
    if (out_path) config.out_path = *out_path;
    if (trace) config.trace = true;
    validate_config(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    TraceSink sink;
    std::filesystem::path trace_dir;
    if (config.trace) {
      trace_dir = config.out_path + ".traces";
      std::filesystem::create_directories(trace_dir);
      sink = [&](EmbedderKind kind, std::uint64_t s, int count, int request,
                 const std::vector<Scalar>& t) {
        const auto file = trace_dir / (std::string(to_string(kind)) + "_seed" +
                                       std::to_string(s) + "_n" + std::to_string(count) +
                                       "_r" + std::to_string(request) + ".csv");
        std::ofstream os(file, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + file.string());
        write_trace_csv(os, t);
      };
    }
    const auto records = run_experiment(config, sink);
    write_csv(records, config.out_path);
    out << "wrote " << records.size() << " records to " << config.out_path << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dpvne

#endif  // DPVNE_CLI_HPP_
