#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bandlab/error.hpp"
#include "bandlab/process.hpp"
#include "bandlab/prob.hpp"
#include "bandlab/truncation.hpp"

namespace bandlab::harness {

using Json = nlohmann::ordered_json;

// Bad user input: missing file, schema violation, malformed flag value.
class InputError : public Error {
 public:
  using Error::Error;
};

// Output could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A next-token distribution as stored on disk:
///   {"prompt": "...", "probs": [{"token": "a", "prob": 0.5}, ...]}
/// or the same with "logits": [{"token": "a", "logit": 1.2}, ...].
struct DistributionFile {
  enum class Kind { Probs, Logits };

  Kind kind = Kind::Probs;
  std::vector<std::string> tokens;
  std::vector<double> values;  // probabilities or logits, parallel to tokens
  std::optional<std::string> prompt;

  /// The distribution at temperature 1 (softmax for logits, validated and renormalized for probs).
  ProbDist distribution() const;
  /// Strategy applied to the stored values at the config's temperature.
  TruncationResult truncate(const StrategyConfig& config) const;
};

DistributionFile parse_distribution(const Json& doc);
DistributionFile load_distribution_file(const std::filesystem::path& path);
Json to_json(const DistributionFile& file);

/// Distribution file plus the support each listed strategy must select.
struct GoldenCase {
  StrategyConfig strategy;
  std::vector<std::size_t> support;
};

struct GoldenFixture {
  std::string name;
  DistributionFile distribution;
  std::vector<GoldenCase> expected;
};

GoldenFixture load_golden_fixture(const std::filesystem::path& path);
/// Every *.json file in `dir`, sorted by file name. Throws InputError if none.
std::vector<GoldenFixture> load_golden_directory(const std::filesystem::path& dir);

/// {"name": "top-b", "base_bandwidth": 0.3, "temperature": 1.0}
StrategyConfig parse_strategy(const Json& doc);
Json to_json(const StrategyConfig& config);

ProcessConfig parse_process_config(const Json& doc);
ProcessConfig load_process_config(const std::filesystem::path& path);
Json to_json(const ProcessConfig& config);

/// "start:stop:step", stop included when reached within 1e-9.
std::vector<double> parse_range(std::string_view spec);
/// "1.0,2.5"
std::vector<double> parse_list(std::string_view spec);

/// Six significant digits, shortest form ("%.6g").
std::string format_float(double v);
/// RFC 4180 quoting when the field needs it.
std::string csv_field(std::string_view s);

Json read_json_file(const std::filesystem::path& path);
/// Writes `contents` to `path`, throwing IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace bandlab::harness
