#include "bandlab/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bandlab/error.hpp"
#include "summation.hpp"

namespace bandlab {

namespace {

void require_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    std::ostringstream msg;
    msg << "temperature must be a finite positive number, got " << temperature;
    throw ParameterError(msg.str());
  }
}

}  // namespace

LogitVector::LogitVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw InvalidInputError("logit vector must not be empty");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      std::ostringstream msg;
      msg << "logit " << i << " is " << v << "; only finite values or -inf (mask) are allowed";
      throw InvalidInputError(msg.str());
    }
  }
}

ProbDist ProbDist::from_probs(std::vector<double> probs) {
  if (probs.empty()) {
    throw InvalidInputError("probability vector must not be empty");
  }
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream msg;
      msg << "probability " << i << " is " << p << "; entries must be finite and non-negative";
      throw InvalidInputError(msg.str());
    }
    total.add(p);
  }
  const double sum = total.value();
  if (std::abs(sum - 1.0) > kLoadTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "probabilities sum to " << sum << ", more than " << kLoadTolerance << " away from 1";
    throw InvalidInputError(msg.str());
  }
  if (sum != 1.0) {
    for (double& p : probs) p /= sum;
  }
  return ProbDist(std::move(probs));
}

ProbDist ProbDist::uniform(std::size_t n) {
  if (n == 0) {
    throw InvalidInputError("uniform distribution needs at least one token");
  }
  return ProbDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbDist softmax(const LogitVector& logits, double temperature) {
  require_temperature(temperature);
  const auto values = logits.values();
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double v : values) max_logit = std::max(max_logit, v);
  if (!std::isfinite(max_logit)) {
    throw DegenerateInputError("softmax: every logit is masked");
  }

  std::vector<double> out(values.size(), 0.0);
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    out[i] = std::exp((values[i] - max_logit) / temperature);
    total.add(out[i]);
  }
  const double sum = total.value();
  for (double& p : out) p /= sum;
  return ProbDist::from_probs(std::move(out));
}

double shannon_entropy(std::span<const double> probs) {
  detail::CompensatedSum acc;
  for (double p : probs) {
    if (p > 0.0) acc.add(-p * std::log(p));
  }
  return std::max(acc.value(), 0.0);
}

EntropyReport entropy(const ProbDist& dist) {
  EntropyReport report;
  report.max_entropy = std::log(static_cast<double>(dist.size()));
  report.entropy = std::min(shannon_entropy(dist.probs()), report.max_entropy);
  report.normalized = dist.size() > 1 ? report.entropy / report.max_entropy : 0.0;
  return report;
}

ModeInfo mode(const ProbDist& dist) {
  const auto probs = dist.probs();
  const auto it = std::max_element(probs.begin(), probs.end());
  return {static_cast<std::size_t>(it - probs.begin()), *it};
}

std::vector<SparseEntry> renormalize(std::span<const SparseEntry> subset) {
  if (subset.empty()) {
    throw DegenerateInputError("cannot renormalize an empty subset");
  }
  detail::CompensatedSum total;
  for (const auto& e : subset) {
    if (!(e.prob > 0.0) || !std::isfinite(e.prob)) {
      std::ostringstream msg;
      msg << "subset entry for index " << e.index << " has non-positive mass " << e.prob;
      throw InvalidInputError(msg.str());
    }
    total.add(e.prob);
  }
  const double sum = total.value();
  std::vector<SparseEntry> out(subset.begin(), subset.end());
  for (auto& e : out) e.prob /= sum;
  return out;
}

LogitVector log_probs(const ProbDist& dist) {
  std::vector<double> out;
  out.reserve(dist.size());
  for (double p : dist.probs()) {
    out.push_back(p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity());
  }
  return LogitVector(std::move(out));
}

ProbDist apply_temperature(const ProbDist& dist, double temperature) {
  require_temperature(temperature);
  if (temperature == 1.0) return dist;
  return softmax(log_probs(dist), temperature);
}

}  // namespace bandlab
