#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bandlab {

// Tolerance on the sum of a constructed distribution.
inline constexpr double kSumTolerance = 1e-9;
// Externally supplied probabilities within this distance of 1 are rescaled; beyond it they are rejected.
inline constexpr double kLoadTolerance = 1e-6;

/// Raw model scores, one per vocabulary item. Negative infinity marks a masked
/// token; NaN and positive infinity are rejected.
class LogitVector {
 public:
  explicit LogitVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// A validated probability vector over a finite vocabulary.
///
/// Every entry is finite and non-negative and the entries sum to 1. Inputs
/// that sum to within kLoadTolerance of 1 are rescaled on construction.
class ProbDist {
 public:
  static ProbDist from_probs(std::vector<double> probs);
  static ProbDist uniform(std::size_t n);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  explicit ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

struct EntropyReport {
  double entropy = 0.0;      // nats
  double max_entropy = 0.0;  // ln(n)
  double normalized = 0.0;   // entropy / max_entropy, 0 when n == 1
};

struct ModeInfo {
  std::size_t index = 0;
  double p_max = 0.0;
};

struct SparseEntry {
  std::size_t index = 0;
  double prob = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Temperature-scaled softmax. Subtracts the maximum finite logit before
/// exponentiating; masked entries come out as exactly 0.
ProbDist softmax(const LogitVector& logits, double temperature = 1.0);

/// Shannon entropy in nats with 0 log 0 = 0.
EntropyReport entropy(const ProbDist& dist);

/// Entropy of an arbitrary non-negative weight vector summing to 1; no validation.
double shannon_entropy(std::span<const double> probs);

/// Argmax with ties resolved to the lowest index.
ModeInfo mode(const ProbDist& dist);

/// Rescales a non-empty subset of strictly positive masses to sum to 1.
/// Order is preserved.
std::vector<SparseEntry> renormalize(std::span<const SparseEntry> subset);

/// Natural-log probabilities; zero entries become negative infinity.
LogitVector log_probs(const ProbDist& dist);

/// Re-temper a distribution: softmax(log p / T). Identity for T == 1.
ProbDist apply_temperature(const ProbDist& dist, double temperature);

}  // namespace bandlab
