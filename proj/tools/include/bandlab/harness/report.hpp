#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bandlab/harness/formats.hpp"
#include "bandlab/process.hpp"
#include "bandlab/truncation.hpp"

namespace bandlab::harness {

struct TokenShare {
  std::size_t index = 0;
  std::string token;
  double original_pct = 0.0;
  std::optional<double> renormalized_pct;  // absent when outside the support
};

/// One strategy's column of a case-study table.
struct ReportRow {
  StrategyConfig strategy;
  std::size_t support_size = 0;
  std::vector<TokenShare> top_tokens;  // highest original probability first
  std::vector<TokenShare> support;     // full support, support order
  std::optional<double> threshold;
  std::optional<double> bandwidth;
};

ReportRow make_report_row(const DistributionFile& file, const StrategyConfig& config,
                          std::size_t top_n = 3);

enum class OutputFormat { Table, Json, Csv };

std::string render_truncate_table(const DistributionFile& file, const std::vector<ReportRow>& rows);
std::string render_truncate_json(const DistributionFile& file, const std::vector<ReportRow>& rows);
std::string render_truncate_csv(const DistributionFile& file, const std::vector<ReportRow>& rows);

/// step,entropy,normalized_entropy,support_size,bandwidth,sampled_token,mode_agreement
std::string render_trajectory_csv(const TrajectoryRecord& record);

/// Object keyed by strategy name; duplicate names get a "#2", "#3" suffix.
std::string render_compare_json(const std::vector<RunSummary>& runs);

/// bandwidth,temperature,mean_entropy,mean_support_size,mode_agreement_rate,
/// variance_mode_agreement,mean_pre_entropy. mean_entropy is measured after
/// truncation; mean_pre_entropy on the tempered distribution before it.
std::string render_sweep_csv(const std::vector<SweepCell>& grid);

}  // namespace bandlab::harness
