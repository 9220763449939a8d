#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crfner/features.hpp"
#include "crfner/gazetteer.hpp"
#include "crfner/trainer.hpp"

namespace crfner {

struct GazetteerSource {
  std::string name;
  std::filesystem::path path;
  bool fold_case = false;

  friend bool operator==(const GazetteerSource&, const GazetteerSource&) = default;
};

struct RunConfig {
  std::string language;
  FeatureConfig features;
  TrainOptions train;
  /// Gazetteer files by name; a name listed in features.gazetteers without
  /// a source here is dropped by resolve().
  std::map<std::string, GazetteerSource> sources;
  /// Per-name case-folding overrides from the config file.
  std::map<std::string, bool> fold_case;
};

/// Supported presets: en, bn, hi, ta, te.
bool is_known_language(std::string_view language);

/// Resets feature defaults for a language: capitalization on only for
/// English; person/location gazetteer slots for the languages that used
/// them.
void apply_language_preset(RunConfig& cfg, std::string_view language);

/// Whether gazetteers for this language fold case by default (English only).
bool default_fold_case(std::string_view language);

/// Parses key=value lines with '#' comments. `language` is applied first
/// regardless of where it appears; every other key overrides the preset.
/// Relative gazetteer paths resolve against `base_dir`. Unknown keys and
/// bad values throw ConfigError.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Adds a gazetteer given as "name=path" (e.g. from the command line) and
/// enables it in the feature config.
void add_gazetteer_source(RunConfig& cfg, std::string_view spec);

struct ResolvedGazetteers {
  std::vector<Gazetteer> gazetteers;
  /// Configured names that had no file and were dropped.
  std::vector<std::string> dropped;
};

/// Checks every gazetteer path exists (ConfigError otherwise), drops
/// unsourced names from cfg.features.gazetteers, and loads the rest.
ResolvedGazetteers resolve_gazetteers(RunConfig& cfg);

}  // namespace crfner
