#include "bandlab/truncation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bandlab/error.hpp"
#include "summation.hpp"

namespace bandlab {

namespace {

constexpr std::array<std::string_view, 7> kNames = {
    "top-b", "top-k", "top-p", "min-p", "epsilon", "eta", "temperature"};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void bad_parameter(std::string_view what, double value, std::string_view range) {
  std::ostringstream msg;
  msg << what << " must lie in " << range << ", got " << value;
  throw ParameterError(msg.str());
}

void check_open_unit(std::string_view what, double v) {
  if (!(v > 0.0 && v < 1.0)) bad_parameter(what, v, "(0, 1)");
}

void check_half_open_unit(std::string_view what, double v) {
  if (!(v > 0.0 && v <= 1.0)) bad_parameter(what, v, "(0, 1]");
}

// Indices by descending probability, ties to the lower index.
std::vector<std::size_t> ranked(const ProbDist& dist) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto probs = dist.probs();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  return order;
}

TruncationResult finish(const ProbDist& dist, std::vector<std::size_t> support) {
  TruncationResult result;
  detail::CompensatedSum total;
  for (std::size_t i : support) total.add(dist[i]);
  const double z = total.value();
  result.renormalized.reserve(support.size());
  for (std::size_t i : support) result.renormalized.push_back(dist[i] / z);
  result.support = std::move(support);
  result.entropy_report = entropy(dist);
  return result;
}

// Ranked tokens with p >= threshold (and p > 0). Falls back to the mode when
// nothing clears the threshold.
TruncationResult keep_above(const ProbDist& dist, double threshold) {
  std::vector<std::size_t> support;
  for (std::size_t i : ranked(dist)) {
    const double p = dist[i];
    if (p <= 0.0 || p < threshold) break;
    support.push_back(i);
  }
  if (support.empty()) support.push_back(mode(dist).index);
  auto result = finish(dist, std::move(support));
  result.threshold = threshold;
  return result;
}

}  // namespace

void StrategyConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    bad_parameter("temperature", temperature, "(0, inf)");
  }
  std::visit(overloaded{
                 [](const TopB& s) { check_open_unit("base_bandwidth", s.base_bandwidth); },
                 [](const TopK& s) {
                   if (s.k == 0) throw ParameterError("k must be a positive integer, got 0");
                 },
                 [](const TopP& s) { check_half_open_unit("p", s.p); },
                 [](const MinP& s) { check_half_open_unit("alpha", s.alpha); },
                 [](const Epsilon& s) { check_open_unit("epsilon", s.epsilon); },
                 [](const Eta& s) { check_open_unit("eta", s.eta); },
                 [](const TemperatureOnly&) {},
             },
             strategy);
}

std::string_view strategy_name(const Strategy& strategy) { return kNames[strategy.index()]; }

std::span<const std::string_view> strategy_names() { return kNames; }

std::optional<Strategy> strategy_from_name(std::string_view name) {
  if (name == "top-b") return TopB{};
  if (name == "top-k") return TopK{};
  if (name == "top-p") return TopP{};
  if (name == "min-p") return MinP{};
  if (name == "epsilon") return Epsilon{};
  if (name == "eta") return Eta{};
  if (name == "temperature") return TemperatureOnly{};
  return std::nullopt;
}

BandwidthTrace top_b_bandwidth(const EntropyReport& report, double base_bandwidth) {
  check_open_unit("base_bandwidth", base_bandwidth);
  const double normalized = std::clamp(report.normalized, 0.0, 1.0);
  BandwidthTrace trace;
  trace.raw_bandwidth = base_bandwidth * (1.0 + normalized);
  trace.clamp_applied = trace.raw_bandwidth > 1.0;
  trace.clamped_bandwidth = std::min(trace.raw_bandwidth, 1.0);
  return trace;
}

TruncationResult truncate_relative_band(const ProbDist& dist, double bandwidth) {
  check_half_open_unit("bandwidth", bandwidth);
  return keep_above(dist, (1.0 - bandwidth) * mode(dist).p_max);
}

TruncationResult truncate_top_b(const ProbDist& dist, double base_bandwidth, double temperature) {
  const ProbDist tempered = apply_temperature(dist, temperature);
  const BandwidthTrace trace = top_b_bandwidth(entropy(tempered), base_bandwidth);
  auto result = truncate_relative_band(tempered, trace.clamped_bandwidth);
  result.bandwidth = trace;
  return result;
}

TruncationResult truncate_top_k(const ProbDist& dist, std::size_t k) {
  if (k == 0) throw ParameterError("k must be a positive integer, got 0");
  std::vector<std::size_t> support;
  for (std::size_t i : ranked(dist)) {
    if (support.size() == k || dist[i] <= 0.0) break;
    support.push_back(i);
  }
  return finish(dist, std::move(support));
}

TruncationResult truncate_top_p(const ProbDist& dist, double p) {
  check_half_open_unit("p", p);
  std::vector<std::size_t> support;
  double cumulative = 0.0;
  for (std::size_t i : ranked(dist)) {
    if (dist[i] <= 0.0) break;
    support.push_back(i);
    cumulative += dist[i];
    if (cumulative >= p) break;
  }
  return finish(dist, std::move(support));
}

TruncationResult truncate_min_p(const ProbDist& dist, double alpha) {
  check_half_open_unit("alpha", alpha);
  return keep_above(dist, alpha * mode(dist).p_max);
}

TruncationResult truncate_epsilon(const ProbDist& dist, double epsilon) {
  check_open_unit("epsilon", epsilon);
  return keep_above(dist, epsilon);
}

TruncationResult truncate_eta(const ProbDist& dist, double eta) {
  check_open_unit("eta", eta);
  const double h = entropy(dist).entropy;
  return keep_above(dist, std::min(eta, std::sqrt(eta) * std::exp(-h)));
}

TruncationResult truncate_none(const ProbDist& dist) {
  std::vector<std::size_t> support;
  for (std::size_t i : ranked(dist)) {
    if (dist[i] <= 0.0) break;
    support.push_back(i);
  }
  return finish(dist, std::move(support));
}

TruncationResult apply(const StrategyConfig& config, const ProbDist& dist) {
  config.validate();
  const ProbDist tempered = apply_temperature(dist, config.temperature);
  return std::visit(
      overloaded{
          [&](const TopB& s) { return truncate_top_b(tempered, s.base_bandwidth); },
          [&](const TopK& s) { return truncate_top_k(tempered, s.k); },
          [&](const TopP& s) { return truncate_top_p(tempered, s.p); },
          [&](const MinP& s) { return truncate_min_p(tempered, s.alpha); },
          [&](const Epsilon& s) { return truncate_epsilon(tempered, s.epsilon); },
          [&](const Eta& s) { return truncate_eta(tempered, s.eta); },
          [&](const TemperatureOnly&) { return truncate_none(tempered); },
      },
      config.strategy);
}

TruncationResult apply(const StrategyConfig& config, const LogitVector& logits) {
  config.validate();
  StrategyConfig unit = config;
  unit.temperature = 1.0;
  return apply(unit, softmax(logits, config.temperature));
}

std::size_t sample(const TruncationResult& result, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < result.support.size(); ++i) {
    cumulative += result.renormalized[i];
    if (u < cumulative) return result.support[i];
  }
  return result.support.back();
}

}  // namespace bandlab
