#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace bumpdirac::cli {

int main_entry(int argc, char** argv) {
  CLI::App app{"Spectral experiments for Dirac operators with sparse bump potentials"};
  app.set_version_flag("--version", tool_version);
  std::string config_source;
  std::string out;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_source, "Config file path or inline JSON object")->required();
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides output.dir)");
  auto* threads_opt =
      app.add_option("--threads", threads, "Parallel width of grid sweeps; 1 is deterministic")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized property suites");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  ExperimentConfig config;
  try {
    config = parse_config(config_source);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  if (*out_opt) config.out = out;
  if (*threads_opt) {
    config.threads = threads;
    config.resolved["threads"] = threads;
  }
  if (*seed_opt) {
    config.seed = seed;
    config.resolved["seed"] = seed;
  }
  config.construction.measure.threads = config.threads;

  RunResult result;
  try {
    result = run(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  (result.exit_code == 0 ? std::cout : std::cerr) << result.summary << '\n';
  for (const auto& a : result.artifacts) std::cout << "wrote " << a.string() << '\n';
  return result.exit_code;
}

}  // namespace bumpdirac::cli
