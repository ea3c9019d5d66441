#include "bandlab/process.hpp"

#include <cmath>
#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <sstream>

#include "bandlab/error.hpp"
#include "summation.hpp"

namespace bandlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint64_t kSamplerStream = 0x5eed5a3b1e000001ULL;

}  // namespace

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::Peaked: return "PEAKED";
    case Regime::Flat: return "FLAT";
    case Regime::Mixed: return "MIXED";
  }
  return "?";
}

Regime regime_from_name(std::string_view name) {
  if (name == "PEAKED") return Regime::Peaked;
  if (name == "FLAT") return Regime::Flat;
  if (name == "MIXED") return Regime::Mixed;
  std::ostringstream msg;
  msg << "unknown regime '" << name << "' (expected PEAKED, FLAT or MIXED)";
  throw ParameterError(msg.str());
}

void ProcessConfig::validate() const {
  if (vocab_size < 2) throw ParameterError("vocab_size must be at least 2");
  if (steps < 1) throw ParameterError("steps must be at least 1");
  auto check_sharpness = [](double l, std::string_view what) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      std::ostringstream msg;
      msg << what << " must be a finite positive number, got " << l;
      throw ParameterError(msg.str());
    }
  };
  std::visit(overloaded{
                 [&](const ExplicitSchedule& s) {
                   if (s.regimes.size() != steps) {
                     std::ostringstream msg;
                     msg << "schedule has " << s.regimes.size() << " entries but steps is "
                         << steps;
                     throw ParameterError(msg.str());
                   }
                   for (Regime r : s.regimes) {
                     if (r == Regime::Peaked) check_sharpness(sharpness, "sharpness");
                   }
                 },
                 [&](const CyclicSchedule& s) {
                   if (s.pattern.empty()) throw ParameterError("cyclic schedule pattern is empty");
                   for (Regime r : s.pattern) {
                     if (r == Regime::Peaked) check_sharpness(sharpness, "sharpness");
                   }
                 },
                 [&](const AnnealSchedule& s) {
                   check_sharpness(s.start, "anneal start");
                   check_sharpness(s.end, "anneal end");
                 },
             },
             schedule);
}

Regime ProcessConfig::regime_at(std::size_t step) const {
  return std::visit(overloaded{
                        [&](const ExplicitSchedule& s) { return s.regimes.at(step); },
                        [&](const CyclicSchedule& s) { return s.pattern[step % s.pattern.size()]; },
                        [](const AnnealSchedule&) { return Regime::Peaked; },
                    },
                    schedule);
}

double ProcessConfig::sharpness_at(std::size_t step) const {
  if (const auto* anneal = std::get_if<AnnealSchedule>(&schedule)) {
    if (steps == 1) return anneal->start;
    const double t = static_cast<double>(step) / static_cast<double>(steps - 1);
    return anneal->start + t * (anneal->end - anneal->start);
  }
  return sharpness;
}

LogitVector step_logits(const ProcessConfig& config, std::size_t step,
                        std::uint64_t history_digest) {
  if (step >= config.steps) {
    std::ostringstream msg;
    msg << "step " << step << " out of range for a " << config.steps << "-step process";
    throw ParameterError(msg.str());
  }
  const std::uint64_t h = mix64(mix64(config.seed, step), history_digest);
  std::vector<double> logits(config.vocab_size, 0.0);
  switch (config.regime_at(step)) {
    case Regime::Peaked:
      logits[h % config.vocab_size] = config.sharpness_at(step);
      break;
    case Regime::Flat:
      break;
    case Regime::Mixed: {
      // log of unit exponentials; softmax then yields a flat-Dirichlet draw
      Rng rng(h);
      for (double& v : logits) v = std::log(-std::log(rng.uniform_open()));
      break;
    }
  }
  return LogitVector(std::move(logits));
}

ProbDist step_distribution(const ProcessConfig& config, std::size_t step,
                           std::uint64_t history_digest) {
  return softmax(step_logits(config, step, history_digest), 1.0);
}

std::uint64_t advance_digest(std::uint64_t digest, std::size_t token) {
  return mix64(digest, static_cast<std::uint64_t>(token));
}

TrajectoryRecord run_trajectory(const ProcessConfig& process, const StrategyConfig& strategy,
                                std::uint64_t seed) {
  process.validate();
  strategy.validate();
  Rng rng(mix64(process.seed ^ kSamplerStream, seed));
  std::uint64_t digest = mix64(seed);
  const double max_entropy = std::log(static_cast<double>(process.vocab_size));

  TrajectoryRecord record;
  record.steps.reserve(process.steps);
  for (std::size_t t = 0; t < process.steps; ++t) {
    const TruncationResult result = apply(strategy, step_logits(process, t, digest));
    TrajectoryStep row;
    row.pre_entropy = result.entropy_report.entropy;
    row.entropy = shannon_entropy(result.renormalized);
    row.normalized_entropy = row.entropy / max_entropy;
    row.support_size = result.support_size();
    if (result.bandwidth) row.bandwidth = result.bandwidth->clamped_bandwidth;
    row.sampled_token = sample(result, rng);
    row.mode = result.support.front();
    row.mode_agreement = row.sampled_token == row.mode;
    record.steps.push_back(row);
    digest = advance_digest(digest, row.sampled_token);
  }
  return record;
}

SeedMetrics summarize(const TrajectoryRecord& record) {
  SeedMetrics m;
  if (record.steps.empty()) return m;
  detail::CompensatedSum entropy_sum, pre_sum, support_sum, log_branch_sum;
  std::size_t agreements = 0;
  for (const auto& s : record.steps) {
    entropy_sum.add(s.entropy);
    pre_sum.add(s.pre_entropy);
    support_sum.add(static_cast<double>(s.support_size));
    log_branch_sum.add(std::log(static_cast<double>(s.support_size)));
    agreements += s.mode_agreement ? 1 : 0;
  }
  const auto n = static_cast<double>(record.steps.size());
  m.mean_entropy = entropy_sum.value() / n;
  m.mean_pre_entropy = pre_sum.value() / n;
  m.mean_support_size = support_sum.value() / n;
  m.geometric_mean_branching = std::max(1.0, std::exp(log_branch_sum.value() / n));
  m.mode_agreement_rate = static_cast<double>(agreements) / n;
  return m;
}

Stat mean_and_variance(std::span<const double> values) {
  Stat s;
  if (values.empty()) return s;
  detail::CompensatedSum total;
  for (double v : values) total.add(v);
  s.mean = total.value() / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  detail::CompensatedSum sq;
  for (double v : values) sq.add((v - s.mean) * (v - s.mean));
  s.variance = sq.value() / static_cast<double>(values.size() - 1);
  return s;
}

namespace {

RunSummary aggregate(const StrategyConfig& strategy, std::vector<SeedMetrics> per_seed) {
  RunSummary out;
  out.strategy = strategy;
  auto column = [&](double SeedMetrics::*field) {
    std::vector<double> v;
    v.reserve(per_seed.size());
    for (const auto& m : per_seed) v.push_back(m.*field);
    return mean_and_variance(v);
  };
  out.mean_entropy = column(&SeedMetrics::mean_entropy);
  out.mean_pre_entropy = column(&SeedMetrics::mean_pre_entropy);
  out.mean_support_size = column(&SeedMetrics::mean_support_size);
  out.geometric_mean_branching = column(&SeedMetrics::geometric_mean_branching);
  out.mode_agreement_rate = column(&SeedMetrics::mode_agreement_rate);
  out.per_seed = std::move(per_seed);
  return out;
}

}  // namespace

std::vector<RunSummary> run_comparison(const ProcessConfig& process,
                                       std::span<const StrategyConfig> strategies,
                                       std::size_t n_seeds) {
  if (n_seeds < 2) throw ParameterError("n_seeds must be at least 2");
  process.validate();
  for (const auto& s : strategies) s.validate();
  if (strategies.empty()) return {};

  // One job per (strategy, seed). Workers write into fixed slots, so the fold
  // below sees the same order regardless of completion order.
  const std::size_t jobs = strategies.size() * n_seeds;
  std::vector<SeedMetrics> slots(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t j = cursor++; j < jobs; j = cursor++) {
      try {
        slots[j] = summarize(run_trajectory(process, strategies[j / n_seeds], j % n_seeds));
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  {
    const std::size_t n_threads =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, jobs);
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<RunSummary> out;
  out.reserve(strategies.size());
  std::size_t next = 0;
  for (const auto& strategy : strategies) {
    std::vector<SeedMetrics> per_seed;
    per_seed.reserve(n_seeds);
    for (std::size_t seed = 0; seed < n_seeds; ++seed) per_seed.push_back(slots[next++]);
    out.push_back(aggregate(strategy, std::move(per_seed)));
  }
  return out;
}

std::vector<SweepCell> sweep_grid(const ProcessConfig& process, std::span<const double> bandwidths,
                                  std::span<const double> temperatures, std::size_t n_seeds) {
  if (bandwidths.empty() || temperatures.empty()) {
    throw ParameterError("sweep grid needs at least one bandwidth and one temperature");
  }
  std::vector<StrategyConfig> cells;
  cells.reserve(bandwidths.size() * temperatures.size());
  for (double b : bandwidths) {
    for (double t : temperatures) cells.push_back({TopB{b}, t});
  }
  auto summaries = run_comparison(process, cells, n_seeds);

  std::vector<SweepCell> grid;
  grid.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    grid.push_back({std::get<TopB>(cells[i].strategy).base_bandwidth, cells[i].temperature,
                    std::move(summaries[i])});
  }
  return grid;
}

}  // namespace bandlab
