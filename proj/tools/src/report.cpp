#include "bandlab/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace bandlab::harness {

namespace {

std::string printable(std::string_view token) {
  std::string out;
  for (char c : token) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return "\"" + out + "\"";
}

std::string fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

ReportRow make_report_row(const DistributionFile& file, const StrategyConfig& config,
                          std::size_t top_n) {
  const ProbDist original = file.distribution();
  const TruncationResult result = file.truncate(config);

  std::map<std::size_t, double> renorm;
  for (std::size_t i = 0; i < result.support.size(); ++i) {
    renorm[result.support[i]] = 100.0 * result.renormalized[i];
  }
  auto share = [&](std::size_t idx) {
    TokenShare s;
    s.index = idx;
    s.token = file.tokens[idx];
    s.original_pct = 100.0 * original[idx];
    if (auto it = renorm.find(idx); it != renorm.end()) s.renormalized_pct = it->second;
    return s;
  };

  ReportRow row;
  row.strategy = config;
  row.support_size = result.support_size();
  row.threshold = result.threshold;
  if (result.bandwidth) row.bandwidth = result.bandwidth->clamped_bandwidth;
  for (std::size_t idx : result.support) row.support.push_back(share(idx));

  std::vector<std::size_t> order(original.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return original[a] > original[b]; });
  order.resize(std::min(top_n, order.size()));
  for (std::size_t idx : order) row.top_tokens.push_back(share(idx));
  return row;
}

std::string render_truncate_table(const DistributionFile& file, const std::vector<ReportRow>& rows) {
  constexpr std::size_t kCol = 11;
  std::size_t token_width = 16;
  if (!rows.empty()) {
    for (const auto& t : rows.front().top_tokens) {
      token_width = std::max(token_width, printable(t.token).size() + 2);
    }
  }

  std::ostringstream out;
  if (file.prompt) out << "prompt: " << *file.prompt << "\n";
  out << pad_right("token", token_width) << pad_left("orig %", kCol);
  for (const auto& r : rows) out << pad_left(std::string(strategy_name(r.strategy)), kCol);
  out << "\n";

  out << pad_right("|S|", token_width) << pad_left("", kCol);
  for (const auto& r : rows) {
    out << pad_left(std::to_string(r.support_size) + (r.support_size == 1 ? " token" : " tokens"), kCol);
  }
  out << "\n";

  if (!rows.empty()) {
    for (std::size_t t = 0; t < rows.front().top_tokens.size(); ++t) {
      const auto& tok = rows.front().top_tokens[t];
      out << pad_right(printable(tok.token), token_width) << pad_left(fixed(tok.original_pct, 2), kCol);
      for (const auto& r : rows) {
        const auto& cell = r.top_tokens[t].renormalized_pct;
        out << pad_left(cell ? fixed(*cell, 1) : "-", kCol);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string render_truncate_json(const DistributionFile& file, const std::vector<ReportRow>& rows) {
  Json doc = Json::object();
  if (file.prompt) doc["prompt"] = *file.prompt;
  Json results = Json::array();
  for (const auto& r : rows) {
    Json entry = Json::object();
    entry["strategy"] = to_json(r.strategy);
    entry["support_size"] = r.support_size;
    entry["threshold"] = optional_number(r.threshold);
    entry["bandwidth"] = optional_number(r.bandwidth);
    Json support = Json::array();
    for (const auto& s : r.support) {
      support.push_back(Json{{"index", s.index},
                             {"token", s.token},
                             {"original_pct", s.original_pct},
                             {"renormalized_pct", *s.renormalized_pct}});
    }
    entry["support"] = std::move(support);
    results.push_back(std::move(entry));
  }
  doc["results"] = std::move(results);
  return doc.dump(2) + "\n";
}

std::string render_truncate_csv(const DistributionFile&, const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "strategy,support_size,threshold,bandwidth,rank,index,token,original_pct,renormalized_pct\n";
  for (const auto& r : rows) {
    for (std::size_t rank = 0; rank < r.support.size(); ++rank) {
      const auto& s = r.support[rank];
      out << strategy_name(r.strategy) << ',' << r.support_size << ','
          << (r.threshold ? format_float(*r.threshold) : "") << ','
          << (r.bandwidth ? format_float(*r.bandwidth) : "") << ',' << rank << ',' << s.index << ','
          << csv_field(s.token) << ',' << format_float(s.original_pct) << ','
          << format_float(*s.renormalized_pct) << '\n';
    }
  }
  return out.str();
}

std::string render_trajectory_csv(const TrajectoryRecord& record) {
  std::ostringstream out;
  out << "step,entropy,normalized_entropy,support_size,bandwidth,sampled_token,mode_agreement\n";
  for (std::size_t t = 0; t < record.steps.size(); ++t) {
    const auto& s = record.steps[t];
    out << t << ',' << format_float(s.entropy) << ',' << format_float(s.normalized_entropy) << ','
        << s.support_size << ',' << (s.bandwidth ? format_float(*s.bandwidth) : "") << ','
        << s.sampled_token << ',' << (s.mode_agreement ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string render_compare_json(const std::vector<RunSummary>& runs) {
  auto stat = [](const Stat& s) { return Json{{"mean", s.mean}, {"variance", s.variance}}; };
  Json strategies = Json::object();
  std::map<std::string, int> seen;
  for (const auto& run : runs) {
    std::string key(strategy_name(run.strategy));
    if (const int n = ++seen[key]; n > 1) key += "#" + std::to_string(n);

    Json per_seed = Json::array();
    for (const auto& m : run.per_seed) {
      per_seed.push_back(Json{{"mean_entropy", m.mean_entropy},
                              {"mean_pre_entropy", m.mean_pre_entropy},
                              {"mean_support_size", m.mean_support_size},
                              {"geometric_mean_branching", m.geometric_mean_branching},
                              {"mode_agreement_rate", m.mode_agreement_rate}});
    }
    strategies[key] = Json{{"config", to_json(run.strategy)},
                           {"n_seeds", run.per_seed.size()},
                           {"mean_entropy", stat(run.mean_entropy)},
                           {"mean_pre_entropy", stat(run.mean_pre_entropy)},
                           {"mean_support_size", stat(run.mean_support_size)},
                           {"geometric_mean_branching", stat(run.geometric_mean_branching)},
                           {"mode_agreement_rate", stat(run.mode_agreement_rate)},
                           {"per_seed", std::move(per_seed)}};
  }
  return strategies.dump(2) + "\n";
}

std::string render_sweep_csv(const std::vector<SweepCell>& grid) {
  std::ostringstream out;
  out << "bandwidth,temperature,mean_entropy,mean_support_size,mode_agreement_rate,"
         "variance_mode_agreement,mean_pre_entropy\n";
  for (const auto& cell : grid) {
    const auto& s = cell.summary;
    out << format_float(cell.bandwidth) << ',' << format_float(cell.temperature) << ','
        << format_float(s.mean_entropy.mean) << ',' << format_float(s.mean_support_size.mean) << ','
        << format_float(s.mode_agreement_rate.mean) << ','
        << format_float(s.mode_agreement_rate.variance) << ','
        << format_float(s.mean_pre_entropy.mean) << '\n';
  }
  return out.str();
}

}  // namespace bandlab::harness
