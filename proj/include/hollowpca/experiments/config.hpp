#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hollowpca/linalg.hpp"

namespace hollowpca::experiments {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind { HollowingDemo, CsbmPhase, CsbmModifiedSparse, GmmRate, LpApprox, KmeansMixture };

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_kind(std::string_view name);

/// Raised for schema or parameter problems in a config file (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One resolved parameter combination.
struct GridPoint {
  Index index = 0;
  /// Index of the seed stream; points that differ only along paired axes share it.
  Index stream = 0;
  /// Every numeric parameter, defaults included, in column order.
  std::vector<std::pair<std::string, double>> values;
  std::map<std::string, std::string> options;

  double operator[](std::string_view name) const;
  /// Integer-valued parameter; throws ConfigError on a fractional value.
  Index count(std::string_view name) const;
  const std::string& option(const std::string& name) const;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  ExperimentKind experiment = ExperimentKind::HollowingDemo;
  /// Base name for output files; defaults to the experiment name.
  std::string name;
  std::uint64_t seed = 0;
  Index replicates = 1;
  std::string output = "results";
  /// Fixed numeric parameters given in the file (defaults not merged).
  std::vector<std::pair<std::string, double>> params;
  /// Cartesian axes, in file order.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  /// Explicit points, each crossed with the cartesian axes.
  std::vector<std::vector<std::pair<std::string, double>>> points;
  std::map<std::string, std::string> options;
  std::vector<std::string> paired_axes;
};

/// Parses and checks the schema; does not check model invariants.
ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);

/// Expands the grid with defaults merged, in deterministic order.
std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg);

/// Full config with defaults filled in; written next to the results.
json resolved_config(const ExperimentConfig& cfg);

/// Schema check plus every grid point's model invariants; no sampling.
/// Throws ConfigError describing the first problem.
void validate(const ExperimentConfig& cfg);

}  // namespace hollowpca::experiments
