#include "bandlab/harness/formats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace bandlab::harness {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void schema_error(std::string_view field, std::string_view problem) {
  std::ostringstream msg;
  msg << "schema error at '" << field << "': " << problem;
  throw InputError(msg.str());
}

const Json& require(const Json& obj, std::string_view key, std::string_view where) {
  const std::string field = where.empty() ? std::string(key) : std::string(where) + "." + std::string(key);
  if (!obj.is_object()) schema_error(where.empty() ? "<root>" : where, "expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) schema_error(field, "missing required field");
  return *it;
}

double require_number(const Json& obj, std::string_view key, std::string_view where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number()) {
    schema_error(where.empty() ? std::string(key) : std::string(where) + "." + std::string(key),
                 "expected a number");
  }
  return v.get<double>();
}

std::uint64_t require_unsigned(const Json& obj, std::string_view key, std::string_view where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number_unsigned()) {
    schema_error(where.empty() ? std::string(key) : std::string(where) + "." + std::string(key),
                 "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<Regime> parse_regimes(const Json& list, std::string_view field) {
  if (!list.is_array()) schema_error(field, "expected an array of regime names");
  std::vector<Regime> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
    if (!list[i].is_string()) schema_error(where, "expected PEAKED, FLAT or MIXED");
    try {
      out.push_back(regime_from_name(list[i].get<std::string>()));
    } catch (const ParameterError& e) {
      schema_error(where, e.what());
    }
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  // std::from_chars for double is not available everywhere; strtod on a copy.
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "invalid number '" << text << "' in " << what;
    throw InputError(msg.str());
  }
  return v;
}

}  // namespace

ProbDist DistributionFile::distribution() const {
  if (kind == Kind::Logits) return softmax(LogitVector(values), 1.0);
  return ProbDist::from_probs(values);
}

TruncationResult DistributionFile::truncate(const StrategyConfig& config) const {
  if (kind == Kind::Logits) return apply(config, LogitVector(values));
  return apply(config, distribution());
}

DistributionFile parse_distribution(const Json& doc) {
  if (!doc.is_object()) schema_error("<root>", "expected an object");
  const bool has_probs = doc.contains("probs");
  const bool has_logits = doc.contains("logits");
  if (has_probs == has_logits) schema_error("probs|logits", "exactly one of 'probs' or 'logits' is required");

  DistributionFile file;
  file.kind = has_probs ? DistributionFile::Kind::Probs : DistributionFile::Kind::Logits;
  const std::string list_key = has_probs ? "probs" : "logits";
  const std::string value_key = has_probs ? "prob" : "logit";
  const Json& list = doc.at(list_key);
  if (!list.is_array() || list.empty()) schema_error(list_key, "expected a non-empty array");

  std::set<std::string> seen;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = list_key + "[" + std::to_string(i) + "]";
    const Json& token = require(list[i], "token", where);
    if (!token.is_string()) schema_error(where + ".token", "expected a string");
    auto name = token.get<std::string>();
    if (!seen.insert(name).second) schema_error(where + ".token", "duplicate token '" + name + "'");
    file.tokens.push_back(std::move(name));
    file.values.push_back(require_number(list[i], value_key, where));
  }

  if (auto meta = doc.find("metadata"); meta != doc.end()) {
    if (!meta->is_object()) schema_error("metadata", "expected an object");
    if (auto prompt = meta->find("prompt"); prompt != meta->end()) {
      if (!prompt->is_string()) schema_error("metadata.prompt", "expected a string");
      file.prompt = prompt->get<std::string>();
    }
  }

  // Surface invariant violations (negative mass, bad sum, NaN) as schema errors.
  try {
    const ProbDist dist = file.distribution();
    if (file.kind == DistributionFile::Kind::Probs) {
      file.values.assign(dist.probs().begin(), dist.probs().end());
    }
  } catch (const Error& e) {
    schema_error(list_key, e.what());
  }
  return file;
}

DistributionFile load_distribution_file(const std::filesystem::path& path) {
  return parse_distribution(read_json_file(path));
}

Json to_json(const DistributionFile& file) {
  Json doc = Json::object();
  if (file.prompt) doc["metadata"] = Json{{"prompt", *file.prompt}};
  const bool probs = file.kind == DistributionFile::Kind::Probs;
  Json list = Json::array();
  for (std::size_t i = 0; i < file.tokens.size(); ++i) {
    list.push_back(Json{{"token", file.tokens[i]}, {probs ? "prob" : "logit", file.values[i]}});
  }
  doc[probs ? "probs" : "logits"] = std::move(list);
  return doc;
}

GoldenFixture load_golden_fixture(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  GoldenFixture fixture;
  fixture.name = path.stem().string();
  fixture.distribution = parse_distribution(doc);
  const Json& expected = require(doc, "expected", "");
  if (!expected.is_array() || expected.empty()) schema_error("expected", "expected a non-empty array");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const std::string where = "expected[" + std::to_string(i) + "]";
    GoldenCase c;
    c.strategy = parse_strategy(require(expected[i], "strategy", where));
    const Json& support = require(expected[i], "support", where);
    if (!support.is_array() || support.empty()) schema_error(where + ".support", "expected a non-empty array");
    for (const auto& idx : support) {
      if (!idx.is_number_unsigned()) schema_error(where + ".support", "expected token indices");
      c.support.push_back(idx.get<std::size_t>());
    }
    fixture.expected.push_back(std::move(c));
  }
  return fixture;
}

std::vector<GoldenFixture> load_golden_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw InputError("golden fixture directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (files.empty()) throw InputError("no golden fixtures (*.json) in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<GoldenFixture> out;
  for (const auto& f : files) out.push_back(load_golden_fixture(f));
  return out;
}

StrategyConfig parse_strategy(const Json& doc) {
  const Json& name = require(doc, "name", "strategy");
  if (!name.is_string()) schema_error("strategy.name", "expected a string");
  auto strategy = strategy_from_name(name.get<std::string>());
  if (!strategy) schema_error("strategy.name", "unknown strategy '" + name.get<std::string>() + "'");

  StrategyConfig config;
  config.strategy = *strategy;
  if (doc.contains("temperature")) config.temperature = require_number(doc, "temperature", "strategy");
  std::visit(overloaded{
                 [&](TopB& s) {
                   if (doc.contains("base_bandwidth"))
                     s.base_bandwidth = require_number(doc, "base_bandwidth", "strategy");
                 },
                 [&](TopK& s) {
                   if (doc.contains("k")) s.k = require_unsigned(doc, "k", "strategy");
                 },
                 [&](TopP& s) {
                   if (doc.contains("p")) s.p = require_number(doc, "p", "strategy");
                 },
                 [&](MinP& s) {
                   if (doc.contains("alpha")) s.alpha = require_number(doc, "alpha", "strategy");
                 },
                 [&](Epsilon& s) {
                   if (doc.contains("epsilon")) s.epsilon = require_number(doc, "epsilon", "strategy");
                 },
                 [&](Eta& s) {
                   if (doc.contains("eta")) s.eta = require_number(doc, "eta", "strategy");
                 },
                 [](TemperatureOnly&) {},
             },
             config.strategy);
  return config;
}

Json to_json(const StrategyConfig& config) {
  Json doc = Json::object();
  doc["name"] = std::string(strategy_name(config));
  std::visit(overloaded{
                 [&](const TopB& s) { doc["base_bandwidth"] = s.base_bandwidth; },
                 [&](const TopK& s) { doc["k"] = s.k; },
                 [&](const TopP& s) { doc["p"] = s.p; },
                 [&](const MinP& s) { doc["alpha"] = s.alpha; },
                 [&](const Epsilon& s) { doc["epsilon"] = s.epsilon; },
                 [&](const Eta& s) { doc["eta"] = s.eta; },
                 [](const TemperatureOnly&) {},
             },
             config.strategy);
  doc["temperature"] = config.temperature;
  return doc;
}

ProcessConfig parse_process_config(const Json& doc) {
  if (!doc.is_object()) schema_error("<root>", "expected an object");
  ProcessConfig config;
  config.vocab_size = require_unsigned(doc, "vocab_size", "");
  config.steps = require_unsigned(doc, "steps", "");
  if (doc.contains("sharpness")) config.sharpness = require_number(doc, "sharpness", "");
  if (doc.contains("seed")) config.seed = require_unsigned(doc, "seed", "");

  const Json& schedule = require(doc, "schedule", "");
  if (schedule.is_array()) {
    config.schedule = ExplicitSchedule{parse_regimes(schedule, "schedule")};
  } else if (schedule.is_object() && schedule.contains("cycle")) {
    config.schedule = CyclicSchedule{parse_regimes(schedule.at("cycle"), "schedule.cycle")};
  } else if (schedule.is_object() && schedule.contains("anneal")) {
    const Json& anneal = schedule.at("anneal");
    config.schedule = AnnealSchedule{require_number(anneal, "start", "schedule.anneal"),
                                     require_number(anneal, "end", "schedule.anneal")};
  } else {
    schema_error("schedule", "expected a regime list, {\"cycle\": [...]} or {\"anneal\": {...}}");
  }

  try {
    config.validate();
  } catch (const ParameterError& e) {
    throw InputError(std::string("invalid process config: ") + e.what());
  }
  return config;
}

ProcessConfig load_process_config(const std::filesystem::path& path) {
  return parse_process_config(read_json_file(path));
}

Json to_json(const ProcessConfig& config) {
  auto names = [](const std::vector<Regime>& regimes) {
    Json list = Json::array();
    for (Regime r : regimes) list.push_back(std::string(regime_name(r)));
    return list;
  };
  Json doc = Json::object();
  doc["vocab_size"] = config.vocab_size;
  doc["steps"] = config.steps;
  doc["sharpness"] = config.sharpness;
  doc["seed"] = config.seed;
  std::visit(overloaded{
                 [&](const ExplicitSchedule& s) { doc["schedule"] = names(s.regimes); },
                 [&](const CyclicSchedule& s) { doc["schedule"] = Json{{"cycle", names(s.pattern)}}; },
                 [&](const AnnealSchedule& s) {
                   doc["schedule"] = Json{{"anneal", Json{{"start", s.start}, {"end", s.end}}}};
                 },
             },
             config.schedule);
  return doc;
}

std::vector<double> parse_range(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw InputError("range '" + std::string(spec) + "' must look like start:stop:step");
  }
  const double start = parse_double(spec.substr(0, first), "range start");
  const double stop = parse_double(spec.substr(first + 1, second - first - 1), "range stop");
  const double step = parse_double(spec.substr(second + 1), "range step");
  if (!(step > 0.0)) throw InputError("range step must be positive");
  if (start > stop + 1e-9) throw InputError("range '" + std::string(spec) + "' is empty");

  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_list(std::string_view spec) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const auto item = spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos);
    out.push_back(parse_double(item, "list '" + std::string(spec) + "'"));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace bandlab::harness
