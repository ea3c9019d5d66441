// Acceptance suite: one line per exit criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bandlab/harness/commands.hpp"
#include "bandlab/harness/formats.hpp"
#include "bandlab/process.hpp"
#include "bandlab/prob.hpp"
#include "bandlab/truncation.hpp"
#include "oracles.hpp"

namespace {

using namespace bandlab;
namespace fs = std::filesystem;

const fs::path kData = BANDLAB_DATA_DIR;

// Base bandwidth that reproduces the case-study support sizes.
constexpr double kCaseStudyBase = 0.37;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && outcome_.pass) {
      outcome_.pass = false;
      outcome_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (outcome_.pass) outcome_.detail = s;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<double> as_vector(const ProbDist& d) { return {d.probs().begin(), d.probs().end()}; }

// --- criteria -----------------------------------------------------------------

Outcome case_study_renormalization() {
  Check c;
  struct Row {
    const char* file;
    std::vector<double> printed;   // Orig. Prob (%) of the Top-b support
    std::vector<double> expected;  // Top-b column (%)
  };
  const Row rows[] = {{"email.json", {23.88, 11.25, 9.94}, {52.9, 25.0, 22.1}},
                      {"describe.json", {34.50, 27.00}, {56.2, 43.8}}};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& row : rows) {
    // From the printed probabilities alone.
    std::vector<SparseEntry> subset;
    for (std::size_t i = 0; i < row.printed.size(); ++i) subset.push_back({i, row.printed[i] / 100.0});
    const auto renorm = renormalize(subset);
    for (std::size_t i = 0; i < renorm.size(); ++i) {
      const double err = std::abs(100.0 * renorm[i].prob - row.expected[i]);
      worst = std::max(worst, err);
      c.expect(err <= 0.2, std::string(row.file) + ": renormalized printed value off by " + fmt("%.3f pp", err));
    }
    // Through the full Top-b pipeline on the reconstructed distribution.
    const auto file = harness::load_distribution_file(kData / "cases" / row.file);
    const auto result = file.truncate({TopB{kCaseStudyBase}, 1.0});
    c.expect(result.support_size() == row.expected.size(),
             std::string(row.file) + ": Top-b support size " + std::to_string(result.support_size()));
    for (std::size_t i = 0; i < std::min(result.support_size(), row.expected.size()); ++i) {
      const double err = std::abs(100.0 * result.renormalized[i] - row.expected[i]);
      worst = std::max(worst, err);
      c.expect(err <= 0.2, std::string(row.file) + ": Top-b value off by " + fmt("%.3f pp", err));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 1.0, fmt("took %.3f s (limit 1 s)", secs));
  c.note(fmt("max deviation %.3f pp (tol 0.2), %.1f ms", worst, secs * 1e3));
  return c.result();
}

Outcome proposition_bounds() {
  Check c;
  oracle::DistributionGenerator gen(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double base = gen.uniform(1e-6, 1.0 - 1e-6);
    const std::size_t n = gen.size_between(2, 512);
    std::vector<double> one_hot(n, 0.0);
    one_hot[gen.size_between(0, n - 1)] = 1.0;
    const auto low = top_b_bandwidth(entropy(ProbDist::from_probs(one_hot)), base);
    const auto high = top_b_bandwidth(entropy(ProbDist::uniform(n)), base);
    const double e1 = std::abs(low.raw_bandwidth - base);
    const double e2 = std::abs(high.raw_bandwidth - 2.0 * base);
    worst = std::max({worst, e1, e2});
    c.expect(e1 <= 1e-12, fmt("H=0: raw %.17g vs base %.17g", low.raw_bandwidth, base));
    c.expect(e2 <= 1e-12, fmt("H=Hmax: raw %.17g vs 2*base %.17g", high.raw_bandwidth, 2 * base));
  }
  c.note(fmt("100 bases, max |error| %.2e (tol 1e-12)", worst));
  return c.result();
}

Outcome uniform_maximizes_entropy() {
  Check c;
  oracle::DistributionGenerator gen(102);
  double worst_equality = 0.0;
  double smallest_gap = 1e300;
  long checked = 0;
  std::vector<double> p;
  for (std::size_t n = 2; n <= 4096; ++n) {
    const double hmax = std::log(static_cast<double>(n));
    const double h_uniform = entropy(ProbDist::uniform(n)).entropy;
    worst_equality = std::max(worst_equality, std::abs(h_uniform - hmax));
    c.expect(std::abs(h_uniform - hmax) <= 1e-12, fmt("n=%.0f: H(uniform) - ln n = %.3e", double(n), h_uniform - hmax));

    const double u = 1.0 / static_cast<double>(n);
    for (int trial = 0; trial < 1000; ++trial) {
      // Move a random share of one token's mass onto others; never uniform afterwards.
      p.assign(n, u);
      const std::size_t donors = std::min<std::size_t>(n - 1, 1 + gen.size_between(0, 3));
      for (std::size_t d = 0; d < donors; ++d) {
        const std::size_t from = gen.size_between(0, n - 1);
        std::size_t to = gen.size_between(0, n - 2);
        if (to >= from) ++to;
        const double delta = p[from] * gen.uniform(0.05, 0.95);
        p[from] -= delta;
        p[to] += delta;
      }
      const double h = entropy(ProbDist::from_probs(p)).entropy;
      smallest_gap = std::min(smallest_gap, h_uniform - h);
      c.expect(h < h_uniform, fmt("n=%.0f: perturbed H %.17g >= uniform %.17g", double(n), h, h_uniform));
      ++checked;
    }
  }
  c.note(fmt("n=2..4096, max |H-ln n| %.2e (tol 1e-12), %.0f perturbations, min gap %.2e", worst_equality,
             double(checked), smallest_gap));
  return c.result();
}

Outcome brute_force_equivalence() {
  Check c;
  oracle::DistributionGenerator gen(103);
  using Run = std::function<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>(const ProbDist&)>;
  const std::vector<std::pair<std::string, Run>> strategies = {
      {"top-b", [&](const ProbDist& d) {
         const double b = gen.uniform(0.01, 0.99);
         return std::pair{truncate_top_b(d, b).support, oracle::top_b(as_vector(d), b)};
       }},
      {"top-k", [&](const ProbDist& d) {
         const std::size_t k = gen.size_between(1, 70);
         return std::pair{truncate_top_k(d, k).support, oracle::top_k(as_vector(d), k)};
       }},
      {"top-p", [&](const ProbDist& d) {
         const double p = gen.uniform(0.05, 1.0);
         return std::pair{truncate_top_p(d, p).support, oracle::top_p(as_vector(d), p)};
       }},
      {"min-p", [&](const ProbDist& d) {
         const double a = gen.uniform(0.001, 1.0);
         return std::pair{truncate_min_p(d, a).support, oracle::min_p(as_vector(d), a)};
       }},
      {"epsilon", [&](const ProbDist& d) {
         const double e = gen.uniform(1e-4, 0.2);
         return std::pair{truncate_epsilon(d, e).support, oracle::epsilon(as_vector(d), e)};
       }},
      {"eta", [&](const ProbDist& d) {
         const double e = gen.uniform(1e-4, 0.5);
         return std::pair{truncate_eta(d, e).support, oracle::eta(as_vector(d), e)};
       }},
      {"temperature", [&](const ProbDist& d) {
         return std::pair{truncate_none(d).support, oracle::nonzero(as_vector(d))};
       }},
  };
  const auto t0 = std::chrono::steady_clock::now();
  int total = 0;
  for (const auto& [name, run] : strategies) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto d = ProbDist::from_probs(gen.next(gen.size_between(2, 64)));
      const auto [got, want] = run(d);
      c.expect(got == want, name + " differs from brute force on trial " + std::to_string(trial));
      ++total;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 10.0, fmt("took %.2f s (limit 10 s)", secs));
  c.note(fmt("%.0f distributions over 7 strategies, exact index sets, %.2f s", double(total), secs));
  return c.result();
}

Outcome frozen_top_b_equals_min_p() {
  Check c;
  oracle::DistributionGenerator gen(104);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = ProbDist::from_probs(gen.next(gen.size_between(2, 64)));
    const double b = gen.uniform(1e-4, 1.0 - 1e-4);
    c.expect(truncate_relative_band(d, b).support == truncate_min_p(d, 1.0 - b).support,
             fmt("mismatch at bandwidth %.6f", b));
  }
  c.note("1000 (distribution, B) pairs identical");
  return c.result();
}

Outcome bandwidth_monotonicity() {
  Check c;
  oracle::DistributionGenerator gen(105);
  int ladders = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = ProbDist::from_probs(gen.next(gen.size_between(2, 64)));
    for (int ladder = 0; ladder < 10; ++ladder) {
      std::vector<double> rungs(8);
      for (auto& b : rungs) b = gen.uniform(1e-4, 1.0);
      std::sort(rungs.begin(), rungs.end());
      std::set<std::size_t> prev;
      for (double b : rungs) {
        const auto s = truncate_relative_band(d, b).support;
        const std::set<std::size_t> cur(s.begin(), s.end());
        c.expect(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()),
                 fmt("support shrank when bandwidth rose to %.6f", b));
        prev = cur;
      }
      ++ladders;
    }
  }
  c.note(fmt("%.0f ladders of 8 bandwidths, supports nested", double(ladders)));
  return c.result();
}

std::vector<RunSummary> reference_comparison() {
  const auto process = harness::load_process_config(kData / "configs" / "peaked_family.json");
  const std::vector<StrategyConfig> strategies = {{TopB{0.3}, 1.0}, {TopP{0.9}, 1.0}};
  return run_comparison(process, strategies, 32);
}

Outcome entropy_and_branching_ordering(const std::vector<RunSummary>& runs) {
  Check c;
  const auto& b = runs[0];
  const auto& p = runs[1];
  c.expect(b.mean_entropy.mean < p.mean_entropy.mean,
           fmt("mean entropy top-b %.6f vs top-p %.6f", b.mean_entropy.mean, p.mean_entropy.mean));
  c.expect(b.geometric_mean_branching.mean < p.geometric_mean_branching.mean,
           fmt("branching top-b %.4f vs top-p %.4f", b.geometric_mean_branching.mean,
               p.geometric_mean_branching.mean));
  c.note(fmt("entropy %.4f < %.4f nats; branching %.3f < %.3f", b.mean_entropy.mean, p.mean_entropy.mean,
             b.geometric_mean_branching.mean, p.geometric_mean_branching.mean));
  return c.result();
}

Outcome variance_ordering(const std::vector<RunSummary>& runs) {
  Check c;
  const double vb = runs[0].mode_agreement_rate.variance;
  const double vp = runs[1].mode_agreement_rate.variance;
  c.expect(vb <= vp, fmt("variance top-b %.3e > top-p %.3e", vb, vp));
  c.note(fmt("var(mode agreement) top-b %.3e <= top-p %.3e over 32 paired seeds", vb, vp));
  return c.result();
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / "bandlab_acceptance";
  fs::create_directories(dir);
  std::ostringstream sink;

  std::vector<std::string> trajectories;
  std::vector<std::string> comparisons;
  for (int run = 0; run < 2; ++run) {
    harness::TrajectoryOptions t;
    t.config = kData / "configs" / "regime_switch.json";
    t.strategy.names = {"top-b"};
    t.seed = 17;
    t.out = dir / ("trajectory_" + std::to_string(run) + ".csv");
    c.expect(harness::cmd_trajectory(t, sink, sink) == 0, "trajectory failed");
    trajectories.push_back(read(*t.out));

    harness::CompareOptions cmp;
    cmp.config = kData / "configs" / "peaked_family.json";
    cmp.strategies.names = {"top-b", "top-p", "min-p", "eta"};
    cmp.n_seeds = 8;
    cmp.out = dir / ("compare_" + std::to_string(run) + ".json");
    c.expect(harness::cmd_compare(cmp, sink, sink) == 0, "compare failed");
    comparisons.push_back(read(*cmp.out));
  }
  c.expect(!trajectories[0].empty() && trajectories[0] == trajectories[1], "trajectory CSV differs");
  c.expect(!comparisons[0].empty() && comparisons[0] == comparisons[1], "compare JSON differs");
  c.note(fmt("trajectory %.0f bytes, compare %.0f bytes, byte-identical", double(trajectories[0].size()),
             double(comparisons[0].size())));
  return c.result();
}

Outcome sampling_fidelity() {
  Check c;
  const auto pair = truncate_top_k(ProbDist::from_probs({0.5, 0.3, 0.15, 0.05}), 2);
  const auto wide = truncate_none(ProbDist::from_probs({0.1, 0.2, 0.3, 0.4}));
  double worst = 0.0;
  for (const auto* r : {&pair, &wide}) {
    Rng rng(424242);
    std::map<std::size_t, long> counts;
    constexpr long kDraws = 1'000'000;
    for (long i = 0; i < kDraws; ++i) ++counts[sample(*r, rng)];
    for (std::size_t i = 0; i < r->support.size(); ++i) {
      const double freq = static_cast<double>(counts[r->support[i]]) / kDraws;
      const double err = std::abs(freq - r->renormalized[i]);
      worst = std::max(worst, err);
      c.expect(err <= 0.002, fmt("token %.0f: freq %.5f vs mass %.5f", double(r->support[i]), freq,
                                 r->renormalized[i]));
    }
  }
  c.note(fmt("10^6 draws per support, max |freq - mass| %.5f (tol 0.002)", worst));
  return c.result();
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<RunSummary> reference;
  auto comparison = [&]() -> const std::vector<RunSummary>& {
    if (reference.empty()) reference = reference_comparison();
    return reference;
  };

  const std::vector<Criterion> criteria = {
      {"AC01", "case-study renormalization", case_study_renormalization},
      {"AC02", "bandwidth asymptotes", proposition_bounds},
      {"AC03", "uniform maximizes entropy", uniform_maximizes_entropy},
      {"AC04", "brute-force oracle equivalence", brute_force_equivalence},
      {"AC05", "frozen top-b equals min-p", frozen_top_b_equals_min_p},
      {"AC06", "support monotone in bandwidth", bandwidth_monotonicity},
      {"AC07", "entropy/branching ordering (simulated)", [&] { return entropy_and_branching_ordering(comparison()); }},
      {"AC08", "mode-agreement variance ordering", [&] { return variance_ordering(comparison()); }},
      {"AC09", "trajectory/compare determinism", determinism},
      {"AC10", "sampling fidelity", sampling_fidelity},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
