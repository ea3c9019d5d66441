#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bandlab/prob.hpp"
#include "bandlab/truncation.hpp"

namespace bandlab {

/// Per-step shape of the synthetic next-token distribution.
///  - Peaked: one logit at the sharpness L, the rest at 0.
///  - Flat:   uniform.
///  - Mixed:  flat-Dirichlet draw (normalized unit exponentials).
enum class Regime { Peaked, Flat, Mixed };

std::string_view regime_name(Regime regime);
Regime regime_from_name(std::string_view name);  // throws ParameterError

/// One regime per step; length must equal ProcessConfig::steps.
struct ExplicitSchedule {
  std::vector<Regime> regimes;
};

/// Repeats `pattern` for as many steps as needed.
struct CyclicSchedule {
  std::vector<Regime> pattern;
};

/// Every step is Peaked; sharpness moves linearly from `start` (step 0) to `end` (last step).
struct AnnealSchedule {
  double start = 1.0;
  double end = 1.0;
};

using Schedule = std::variant<ExplicitSchedule, CyclicSchedule, AnnealSchedule>;

/// A synthetic autoregressive process standing in for a language model.
struct ProcessConfig {
  std::size_t vocab_size = 32;
  std::size_t steps = 200;
  Schedule schedule = CyclicSchedule{{Regime::Peaked}};
  double sharpness = 3.0;  // L for Peaked steps under explicit/cyclic schedules
  std::uint64_t seed = 0;

  void validate() const;
  Regime regime_at(std::size_t step) const;
  double sharpness_at(std::size_t step) const;
};

/// Logits of the step distribution. Deterministic in (config.seed, step, history_digest).
LogitVector step_logits(const ProcessConfig& config, std::size_t step,
                        std::uint64_t history_digest);
/// softmax(step_logits(...)).
ProbDist step_distribution(const ProcessConfig& config, std::size_t step,
                           std::uint64_t history_digest);

/// Folds a sampled token into the running history digest.
std::uint64_t advance_digest(std::uint64_t digest, std::size_t token);

struct TrajectoryStep {
  double pre_entropy = 0.0;         // input distribution after temperature
  double entropy = 0.0;             // renormalized support distribution
  double normalized_entropy = 0.0;  // entropy / ln(vocab)
  std::size_t support_size = 0;     // branching factor
  std::optional<double> bandwidth;  // clamped Top-b bandwidth
  std::size_t sampled_token = 0;
  std::size_t mode = 0;
  bool mode_agreement = false;
};

struct TrajectoryRecord {
  std::vector<TrajectoryStep> steps;
};

TrajectoryRecord run_trajectory(const ProcessConfig& process, const StrategyConfig& strategy,
                                std::uint64_t seed);

/// Scalar metrics of one trajectory.
struct SeedMetrics {
  double mean_entropy = 0.0;
  double mean_pre_entropy = 0.0;
  double mean_support_size = 0.0;
  double geometric_mean_branching = 1.0;
  double mode_agreement_rate = 0.0;
};

SeedMetrics summarize(const TrajectoryRecord& record);

struct Stat {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n - 1)
};

Stat mean_and_variance(std::span<const double> values);

struct RunSummary {
  StrategyConfig strategy;
  std::vector<SeedMetrics> per_seed;  // seed order 0..n-1
  Stat mean_entropy;
  Stat mean_pre_entropy;
  Stat mean_support_size;
  Stat geometric_mean_branching;
  Stat mode_agreement_rate;
};

/// Runs each strategy on seeds 0..n_seeds-1 (paired across strategies).
std::vector<RunSummary> run_comparison(const ProcessConfig& process,
                                       std::span<const StrategyConfig> strategies,
                                       std::size_t n_seeds);

struct SweepCell {
  double bandwidth = 0.0;
  double temperature = 1.0;
  RunSummary summary;
};

/// Top-b over the Cartesian product, bandwidth-major (row-major) order.
std::vector<SweepCell> sweep_grid(const ProcessConfig& process, std::span<const double> bandwidths,
                                  std::span<const double> temperatures, std::size_t n_seeds);

}  // namespace bandlab
