#pragma once

// Test-only reference implementations. Each one rescans the whole vocabulary
// per token (O(n^2) where ranking is involved) and recomputes every threshold
// from scratch, sharing nothing with the library beyond the input vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace bandlab::oracle {

inline double entropy(const std::vector<double>& p) {
  long double h = 0.0L;
  for (double x : p) {
    if (x > 0.0) h -= static_cast<long double>(x) * std::log(static_cast<long double>(x));
  }
  return static_cast<double>(h);
}

inline double max_of(const std::vector<double>& p) {
  double m = p[0];
  for (double x : p) m = x > m ? x : m;
  return m;
}

// Number of tokens ranked strictly ahead of i (higher prob, or equal prob and lower index).
inline std::size_t rank_of(const std::vector<double>& p, std::size_t i) {
  std::size_t r = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > p[i] || (p[j] == p[i] && j < i)) ++r;
  }
  return r;
}

// Orders an index set by rank.
inline std::vector<std::size_t> in_rank_order(const std::vector<double>& p,
                                              std::vector<std::size_t> set) {
  std::vector<std::size_t> out(set.size());
  for (std::size_t i : set) {
    std::size_t pos = 0;
    for (std::size_t j : set) pos += rank_of(p, j) < rank_of(p, i) ? 1 : 0;
    out[pos] = i;
  }
  return out;
}

inline std::size_t argmax(const std::vector<double>& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (rank_of(p, i) == 0) return i;
  }
  return 0;
}

inline std::vector<std::size_t> at_least(const std::vector<double>& p, double threshold) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && p[i] >= threshold) keep.push_back(i);
  }
  if (keep.empty()) keep.push_back(argmax(p));
  return in_rank_order(p, keep);
}

inline double top_b_bandwidth(const std::vector<double>& p, double base) {
  const double hmax = std::log(static_cast<double>(p.size()));
  const double normalized = p.size() > 1 ? std::min(entropy(p) / hmax, 1.0) : 0.0;
  return std::min(base * (1.0 + normalized), 1.0);
}

inline std::vector<std::size_t> top_b(const std::vector<double>& p, double base) {
  return at_least(p, (1.0 - top_b_bandwidth(p, base)) * max_of(p));
}

inline std::vector<std::size_t> relative_band(const std::vector<double>& p, double bandwidth) {
  return at_least(p, (1.0 - bandwidth) * max_of(p));
}

inline std::vector<std::size_t> min_p(const std::vector<double>& p, double alpha) {
  return at_least(p, alpha * max_of(p));
}

inline std::vector<std::size_t> epsilon(const std::vector<double>& p, double eps) {
  return at_least(p, eps);
}

inline std::vector<std::size_t> eta(const std::vector<double>& p, double eta) {
  return at_least(p, std::min(eta, std::sqrt(eta) * std::exp(-entropy(p))));
}

inline std::vector<std::size_t> top_k(const std::vector<double>& p, std::size_t k) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && rank_of(p, i) < k) keep.push_back(i);
  }
  return in_rank_order(p, keep);
}

// Token i is kept when the mass ranked strictly ahead of it is still below p.
// The prefix is summed in rank order so rounding matches a sorted scan.
inline std::vector<std::size_t> top_p(const std::vector<double>& probs, double p) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    const std::size_t r = rank_of(probs, i);
    std::vector<double> ahead(r, 0.0);
    for (std::size_t j = 0; j < probs.size(); ++j) {
      const std::size_t rj = rank_of(probs, j);
      if (rj < r) ahead[rj] = probs[j];
    }
    double mass = 0.0;
    for (double x : ahead) mass += x;
    if (r == 0 || mass < p) keep.push_back(i);
  }
  return in_rank_order(probs, keep);
}

inline std::vector<std::size_t> nonzero(const std::vector<double>& p) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) keep.push_back(i);
  }
  return in_rank_order(p, keep);
}

/// Random distributions of assorted shapes: flat Dirichlet, spiky (power of a
/// uniform), and sparse with exact zeros. Values are normalized to sum to 1.
class DistributionGenerator {
 public:
  explicit DistributionGenerator(std::uint64_t seed) : rng_(seed) {}

  std::vector<double> next(std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(n);
    const int shape = static_cast<int>(rng_() % 3);
    for (auto& x : p) {
      const double v = u(rng_);
      switch (shape) {
        case 0: x = -std::log(1.0 - v); break;
        case 1: x = std::pow(v, 6.0); break;
        default: x = u(rng_) < 0.3 ? 0.0 : v; break;
      }
    }
    double sum = 0.0;
    for (double x : p) sum += x;
    if (sum == 0.0) {
      p[rng_() % n] = 1.0;
      return p;
    }
    for (auto& x : p) x /= sum;
    return p;
  }

  std::size_t size_between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace bandlab::oracle
