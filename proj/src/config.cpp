#include "crfner/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "crfner/error.hpp"

namespace crfner {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    const auto item = trim(s.substr(pos, comma - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = comma + 1;
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected a boolean, got '" + std::string(v) + "'");
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  return out;
}

void enable_gazetteer(FeatureConfig& f, const std::string& name) {
  if (std::find(f.gazetteers.begin(), f.gazetteers.end(), name) == f.gazetteers.end()) f.gazetteers.push_back(name);
}

void check_gazetteer_name(std::string_view key, std::string_view name) {
  if (name.empty() || name.find_first_of(" \t,:=") != std::string_view::npos)
    throw ConfigError("config key '" + std::string(key) + "': invalid gazetteer name");
}

void apply(RunConfig& cfg, std::string_view key, std::string_view value, const std::filesystem::path& base_dir) {
  FeatureConfig& f = cfg.features;
  TrainOptions& t = cfg.train;
  if (key == "context_window") f.context_window = parse_int(key, value);
  else if (key == "use_affix") f.use_affix = parse_bool(key, value);
  else if (key == "affix_min") f.affix_min = parse_int(key, value);
  else if (key == "affix_max") f.affix_max = parse_int(key, value);
  else if (key == "affix_nnp_only") f.affix_nnp_only = parse_bool(key, value);
  else if (key == "use_pos") f.use_pos = parse_bool(key, value);
  else if (key == "use_chunk") f.use_chunk = parse_bool(key, value);
  else if (key == "use_boundary") f.use_boundary = parse_bool(key, value);
  else if (key == "last_word") {
    if (value == "penultimate") f.last_word = LastWord::penultimate;
    else if (value == "final") f.last_word = LastWord::final;
    else throw ConfigError("config key 'last_word': expected penultimate or final");
  }
  else if (key == "use_digit") f.use_digit = parse_bool(key, value);
  else if (key == "use_position") f.use_position = parse_bool(key, value);
  else if (key == "use_verb") f.use_verb = parse_bool(key, value);
  else if (key == "verb_tags") {
    const auto tags = split_list(value);
    f.verb_tags = std::set<std::string>(tags.begin(), tags.end());
  }
  else if (key == "use_capital") f.use_capital = parse_bool(key, value);
  else if (key == "gazetteers") {
    f.gazetteers.clear();
    for (const auto& name : split_list(value)) {
      check_gazetteer_name(key, name);
      enable_gazetteer(f, name);
    }
  }
  else if (key == "gazetteer_match") {
    if (value == "span") f.gazetteer_match = GazetteerMatch::span;
    else if (value == "token") f.gazetteer_match = GazetteerMatch::token;
    else throw ConfigError("config key 'gazetteer_match': expected span or token");
  }
  else if (key == "l2_sigma") t.l2_sigma = parse_double(key, value);
  else if (key == "max_iter") t.max_iterations = parse_int(key, value);
  else if (key == "tol") t.tolerance = parse_double(key, value);
  else if (key == "feature_cutoff") t.feature_cutoff = parse_int(key, value);
  else if (key == "lbfgs_history") t.history = parse_int(key, value);
  else if (key.starts_with("gazetteer.")) {
    const std::string name(key.substr(10));
    check_gazetteer_name(key, name);
    std::filesystem::path path(std::string{value});
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    cfg.sources[name] = GazetteerSource{name, path, false};
    enable_gazetteer(f, name);
  }
  else if (key.starts_with("fold_case.")) {
    const std::string name(key.substr(10));
    check_gazetteer_name(key, name);
    cfg.fold_case[name] = parse_bool(key, value);
  }
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

bool is_known_language(std::string_view language) {
  return language == "en" || language == "bn" || language == "hi" || language == "ta" || language == "te";
}

bool default_fold_case(std::string_view language) { return language == "en"; }

void apply_language_preset(RunConfig& cfg, std::string_view language) {
  if (!is_known_language(language)) throw ConfigError("unknown language preset '" + std::string(language) + "'");
  cfg.language = std::string(language);
  cfg.features = FeatureConfig{};
  cfg.features.use_capital = language == "en";
  if (language == "en" || language == "bn" || language == "hi") cfg.features.gazetteers = {"person", "location"};
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "' given twice");
    entries.emplace_back(std::move(key), std::move(value));
  }

  RunConfig cfg;
  for (const auto& [key, value] : entries)
    if (key == "language") apply_language_preset(cfg, value);
  for (const auto& [key, value] : entries)
    if (key != "language") apply(cfg, key, value, base_dir);
  cfg.features.validate();
  cfg.train.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

void add_gazetteer_source(RunConfig& cfg, std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == spec.size())
    throw ConfigError("gazetteer must be given as name=path, got '" + std::string(spec) + "'");
  const std::string name(spec.substr(0, eq));
  check_gazetteer_name("--gazetteer", name);
  cfg.sources[name] = GazetteerSource{name, std::filesystem::path(std::string(spec.substr(eq + 1))), false};
  enable_gazetteer(cfg.features, name);
}

ResolvedGazetteers resolve_gazetteers(RunConfig& cfg) {
  ResolvedGazetteers out;
  for (auto& [name, source] : cfg.sources) {
    if (!std::filesystem::is_regular_file(source.path))
      throw ConfigError("gazetteer '" + name + "': file not found: " + source.path.string());
    auto fold = cfg.fold_case.find(name);
    source.fold_case = fold != cfg.fold_case.end() ? fold->second : default_fold_case(cfg.language);
  }
  std::vector<std::string> kept;
  for (const std::string& name : cfg.features.gazetteers) {
    auto it = cfg.sources.find(name);
    if (it == cfg.sources.end()) {
      out.dropped.push_back(name);
      continue;
    }
    kept.push_back(name);
    out.gazetteers.push_back(load_gazetteer(it->second.path, name, it->second.fold_case));
  }
  cfg.features.gazetteers = std::move(kept);
  return out;
}

}  // namespace crfner
