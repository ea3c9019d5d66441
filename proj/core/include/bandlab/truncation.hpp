#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bandlab/prob.hpp"
#include "bandlab/rng.hpp"

namespace bandlab {

// Strategy hyperparameters. Defaults follow common practice for each method.
struct TopB {
  double base_bandwidth = 0.3;  // (0, 1)
};
struct TopK {
  std::size_t k = 40;  // >= 1
};
struct TopP {
  double p = 0.9;  // (0, 1]
};
struct MinP {
  double alpha = 0.05;  // (0, 1]
};
struct Epsilon {
  double epsilon = 3e-4;  // (0, 1)
};
struct Eta {
  double eta = 3e-4;  // (0, 1)
};
struct TemperatureOnly {};

using Strategy = std::variant<TopB, TopK, TopP, MinP, Epsilon, Eta, TemperatureOnly>;

struct StrategyConfig {
  Strategy strategy = TopB{};
  double temperature = 1.0;

  /// Throws ParameterError if any hyperparameter is out of range.
  void validate() const;
};

/// Command-line name of the active strategy ("top-b", "top-k", ...).
std::string_view strategy_name(const Strategy& strategy);
inline std::string_view strategy_name(const StrategyConfig& config) {
  return strategy_name(config.strategy);
}

/// Every accepted strategy name, in canonical order.
std::span<const std::string_view> strategy_names();

/// Default-parameter strategy for a name; std::nullopt if unknown.
std::optional<Strategy> strategy_from_name(std::string_view name);

struct BandwidthTrace {
  double raw_bandwidth = 0.0;      // base * (1 + H / H_max)
  double clamped_bandwidth = 0.0;  // min(raw, 1)
  bool clamp_applied = false;
};

/// Output of every strategy.
///
/// `support` is ordered by descending input probability with ties going to the
/// lower index, so support.front() is always the mode. `renormalized[i]` is the
/// sampling probability of `support[i]`.
struct TruncationResult {
  std::vector<std::size_t> support;
  std::vector<double> renormalized;
  std::optional<double> threshold;  // absolute cutoff; absent for top-k / top-p / temperature
  std::optional<BandwidthTrace> bandwidth;  // top-b only
  EntropyReport entropy_report;             // of the (post-temperature) input

  std::size_t support_size() const noexcept { return support.size(); }
};

BandwidthTrace top_b_bandwidth(const EntropyReport& report, double base_bandwidth);

/// Keeps tokens with p >= (1 - bandwidth) * p_max for a fixed bandwidth in (0, 1].
TruncationResult truncate_relative_band(const ProbDist& dist, double bandwidth);

/// Top-b: relative band around the mode whose width grows with normalized entropy.
TruncationResult truncate_top_b(const ProbDist& dist, double base_bandwidth,
                                double temperature = 1.0);
TruncationResult truncate_top_k(const ProbDist& dist, std::size_t k);
TruncationResult truncate_top_p(const ProbDist& dist, double p);
TruncationResult truncate_min_p(const ProbDist& dist, double alpha);
TruncationResult truncate_epsilon(const ProbDist& dist, double epsilon);
TruncationResult truncate_eta(const ProbDist& dist, double eta);
/// Full non-zero support, untruncated.
TruncationResult truncate_none(const ProbDist& dist);

/// Softmax at config.temperature, then the configured strategy.
TruncationResult apply(const StrategyConfig& config, const LogitVector& logits);
/// Same as above for a distribution; temperature 1 leaves it untouched.
TruncationResult apply(const StrategyConfig& config, const ProbDist& dist);

/// Multinomial draw over the renormalized support.
std::size_t sample(const TruncationResult& result, Rng& rng);

}  // namespace bandlab
