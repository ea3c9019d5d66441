// bandlab: truncation-sampling case studies and synthetic decoding experiments.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bandlab/harness/commands.hpp"

namespace {

using namespace bandlab::harness;

void add_strategy_flags(CLI::App& cmd, StrategyFlags& flags, bool repeatable) {
  auto* opt = cmd.add_option("--strategy", flags.names,
                             "top-b|top-k|top-p|min-p|epsilon|eta|temperature");
  if (!repeatable) opt->expected(1);
  cmd.add_option("--base-bandwidth", flags.base_bandwidth, "Top-b base bandwidth in (0,1)");
  cmd.add_option("--k", flags.k, "Top-k size");
  cmd.add_option("--p", flags.p, "Top-p cumulative mass in (0,1]");
  cmd.add_option("--alpha", flags.alpha, "Min-p ratio in (0,1]");
  cmd.add_option("--epsilon", flags.epsilon, "Epsilon floor in (0,1)");
  cmd.add_option("--eta", flags.eta, "Eta parameter in (0,1)");
  cmd.add_option("--temperature", flags.temperature, "Softmax temperature (>0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandlab - entropy-regulated truncation sampling toolkit"};
  app.require_subcommand(1);

  TruncateOptions truncate;
  std::string format = "table";
  auto* truncate_cmd = app.add_subcommand("truncate", "Apply strategies to a distribution file");
  truncate_cmd->add_option("file", truncate.input, "Distribution JSON")->required();
  add_strategy_flags(*truncate_cmd, truncate.strategies, true);
  truncate_cmd->add_option("--format", format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  truncate_cmd->add_option("--top", truncate.top_n, "Tokens shown per table");
  truncate_cmd->add_option("--out", truncate.out, "Write the report here instead of stdout");

  TrajectoryOptions trajectory;
  auto* trajectory_cmd = app.add_subcommand("trajectory", "Per-step CSV for one seeded run");
  trajectory_cmd->add_option("config", trajectory.config, "Process config JSON")->required();
  add_strategy_flags(*trajectory_cmd, trajectory.strategy, false);
  trajectory_cmd->add_option("--seed", trajectory.seed, "Run seed")->envname("BANDLAB_SEED");
  trajectory_cmd->add_option("--out", trajectory.out, "CSV path (stdout if omitted)");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Paired-seed comparison of strategies");
  compare_cmd->add_option("config", compare.config, "Process config JSON")->required();
  add_strategy_flags(*compare_cmd, compare.strategies, true);
  compare_cmd->add_option("--seeds", compare.n_seeds, "Number of paired seeds (>=2)");
  compare_cmd->add_option("--out", compare.out, "JSON path (stdout if omitted)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Top-b bandwidth x temperature grid");
  sweep_cmd->add_option("config", sweep.config, "Process config JSON")->required();
  sweep_cmd->add_option("--bandwidths", sweep.bandwidths, "start:stop:step or comma list");
  sweep_cmd->add_option("--temperatures", sweep.temperatures, "Comma list");
  sweep_cmd->add_option("--seeds", sweep.n_seeds, "Seeds per cell (>=2)");
  sweep_cmd->add_option("--out", sweep.out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*truncate_cmd) {
    static const std::map<std::string, OutputFormat> kFormats = {
        {"table", OutputFormat::Table}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};
    truncate.format = kFormats.at(format);
    return cmd_truncate(truncate, std::cout, std::cerr);
  }
  if (*trajectory_cmd) return cmd_trajectory(trajectory, std::cout, std::cerr);
  if (*compare_cmd) return cmd_compare(compare, std::cout, std::cerr);
  return cmd_sweep(sweep, std::cout, std::cerr);
}
