#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bandlab/harness/report.hpp"
#include "bandlab/truncation.hpp"

namespace bandlab::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Strategy selection as given on the command line. Unset hyperparameters fall
/// back to each strategy's default.
struct StrategyFlags {
  std::vector<std::string> names;
  std::optional<double> base_bandwidth;
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> eta;
  double temperature = 1.0;
};

/// Throws InputError for unknown or repeated names, ParameterError for bad values.
std::vector<StrategyConfig> build_strategies(const StrategyFlags& flags,
                                             const std::vector<std::string>& default_names);

struct TruncateOptions {
  std::filesystem::path input;
  StrategyFlags strategies;
  OutputFormat format = OutputFormat::Table;
  std::optional<std::filesystem::path> out;
  std::size_t top_n = 3;
};

struct TrajectoryOptions {
  std::filesystem::path config;
  StrategyFlags strategy;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
};

struct CompareOptions {
  std::filesystem::path config;
  StrategyFlags strategies;
  std::size_t n_seeds = 32;
  std::optional<std::filesystem::path> out;
};

struct SweepOptions {
  std::filesystem::path config;
  std::string bandwidths = "0.3";  // start:stop:step or a single value
  std::string temperatures = "1.0";
  std::size_t n_seeds = 32;
  std::optional<std::filesystem::path> out;
};

// Each command writes its report to `out` (or to the --out file) and
// diagnostics to `err`, and returns the process exit code.
int cmd_truncate(const TruncateOptions& options, std::ostream& out, std::ostream& err);
int cmd_trajectory(const TrajectoryOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

}  // namespace bandlab::harness
