#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bumpdirac/construction.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/spectral.hpp"
#include "json.hpp"

namespace bumpdirac::cli {

inline constexpr const char* tool_version = "0.1.0";

enum class Command { density, construct, concentration, asymptotics, channels, validate };

std::string to_string(Command command);

// Raised for unreadable or invalid configurations; `field` names the offending key
// (empty for JSON syntax errors, whose message carries the location instead).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class GridSign { positive, negative, both };

struct GridSpec {
  double min = 1.0;
  double max = 2.0;
  std::size_t count = 100;
  GridSign sign = GridSign::positive;

  // Increasing kappa nodes; `both` mirrors [min, max] onto the negative axis.
  std::vector<double> nodes() const;
};

struct Tolerances {
  double ode = 1e-10;
  double measure = 1e-8;
};

struct EigenvalueSpec {
  double b = 100.0;
  double lambda_min = 1.5;
  double lambda_max = 3.0;
};

struct ConcentrationSpec {
  double threshold = 0.1;
  std::vector<Interval> xi;  // defaults to Xi_1
  double cells_per_unit = 64.0;
};

struct AsymptoticsSpec {
  std::vector<double> heights{1e-1, 3e-2, 1e-2, 3e-3};
  std::size_t divergence_terms = 0;  // 0: no divergence table
};

struct ChannelsSpec {
  double tail_end = 0.0;
  bool green = false;
  double green_re = 2.0;
  double green_im = 1.0;
  std::size_t green_nodes = 2000;
};

struct ValidateSpec {
  std::size_t samples = 20;
};

struct ExperimentConfig {
  Command command = Command::density;
  BumpPotential potential;
  nlohmann::json potential_descriptor;
  GridSpec grid;
  std::vector<int> ks;
  Tolerances tolerances;
  std::optional<EigenvalueSpec> eigenvalues;
  ConstructionConfig construction;
  ConcentrationSpec concentration;
  AsymptoticsSpec asymptotics;
  ChannelsSpec channels;
  ValidateSpec validate;
  std::filesystem::path out = "bumpdirac_out";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  nlohmann::json resolved;  // echo of the config with defaults filled
};

// Reads a JSON file, or parses the argument itself when it starts with '{'.
ExperimentConfig parse_config(const std::string& path_or_json);
ExperimentConfig parse_config_json(const nlohmann::json& document, const std::filesystem::path& base = {});

// Potential descriptor: {"eta", "bumps": [{"height", "width", "profile"}], "distances"}.
BumpPotential parse_potential(const nlohmann::json& descriptor);

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

// Executes the command and writes artifacts plus manifest.json under config.out.
// Exit codes: 0 success, 1 validation failure, 2 numerical failure (diagnostic.json written).
RunResult run(const ExperimentConfig& config);

// Entry point shared by main and the tests.
int main_entry(int argc, char** argv);

}  // namespace bumpdirac::cli
