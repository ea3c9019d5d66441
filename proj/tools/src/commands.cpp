#include "bandlab/harness/commands.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bandlab/error.hpp"
#include "bandlab/harness/formats.hpp"
#include "bandlab/process.hpp"

namespace bandlab::harness {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string valid_names() {
  std::string out;
  for (auto name : strategy_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

void emit(const std::optional<std::filesystem::path>& path, const std::string& contents,
          std::ostream& out) {
  if (path) {
    write_file(*path, contents);
  } else {
    out << contents;
  }
}

// Runs `body` and maps library errors onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

std::vector<double> parse_bandwidths(const std::string& spec) {
  if (spec.find(':') != std::string::npos) return parse_range(spec);
  return parse_list(spec);
}

}  // namespace

std::vector<StrategyConfig> build_strategies(const StrategyFlags& flags,
                                             const std::vector<std::string>& default_names) {
  const auto& names = flags.names.empty() ? default_names : flags.names;
  std::set<std::string> seen;
  std::vector<StrategyConfig> out;
  for (const auto& name : names) {
    auto strategy = strategy_from_name(name);
    if (!strategy) {
      throw InputError("unknown strategy '" + name + "'; valid names: " + valid_names());
    }
    if (!seen.insert(name).second) throw InputError("strategy '" + name + "' given twice");
    std::visit(overloaded{
                   [&](TopB& s) { s.base_bandwidth = flags.base_bandwidth.value_or(s.base_bandwidth); },
                   [&](TopK& s) { s.k = flags.k.value_or(s.k); },
                   [&](TopP& s) { s.p = flags.p.value_or(s.p); },
                   [&](MinP& s) { s.alpha = flags.alpha.value_or(s.alpha); },
                   [&](Epsilon& s) { s.epsilon = flags.epsilon.value_or(s.epsilon); },
                   [&](Eta& s) { s.eta = flags.eta.value_or(s.eta); },
                   [](TemperatureOnly&) {},
               },
               *strategy);
    StrategyConfig config{*strategy, flags.temperature};
    config.validate();
    out.push_back(config);
  }
  return out;
}

int cmd_truncate(const TruncateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto strategies =
        build_strategies(options.strategies, {"top-b", "top-p", "top-k", "min-p"});
    const DistributionFile file = load_distribution_file(options.input);
    std::vector<ReportRow> rows;
    for (const auto& s : strategies) rows.push_back(make_report_row(file, s, options.top_n));

    std::string text;
    switch (options.format) {
      case OutputFormat::Table: text = render_truncate_table(file, rows); break;
      case OutputFormat::Json: text = render_truncate_json(file, rows); break;
      case OutputFormat::Csv: text = render_truncate_csv(file, rows); break;
    }
    emit(options.out, text, out);
  });
}

int cmd_trajectory(const TrajectoryOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto strategies = build_strategies(options.strategy, {"top-b"});
    if (strategies.size() != 1) throw InputError("trajectory takes exactly one --strategy");
    const ProcessConfig process = load_process_config(options.config);
    emit(options.out, render_trajectory_csv(run_trajectory(process, strategies.front(), options.seed)),
         out);
  });
}

int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.n_seeds < 2) throw InputError("--seeds must be at least 2");
    const auto strategies = build_strategies(options.strategies, {"top-b", "top-p"});
    const ProcessConfig process = load_process_config(options.config);
    emit(options.out, render_compare_json(run_comparison(process, strategies, options.n_seeds)), out);
  });
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.n_seeds < 2) throw InputError("--seeds must be at least 2");
    const auto bandwidths = parse_bandwidths(options.bandwidths);
    const auto temperatures = parse_list(options.temperatures);
    for (double b : bandwidths) StrategyConfig{TopB{b}, 1.0}.validate();
    for (double t : temperatures) StrategyConfig{TemperatureOnly{}, t}.validate();
    const ProcessConfig process = load_process_config(options.config);
    emit(options.out, render_sweep_csv(sweep_grid(process, bandwidths, temperatures, options.n_seeds)),
         out);
  });
}

}  // namespace bandlab::harness
