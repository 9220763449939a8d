#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crfner/corpus.hpp"
#include "crfner/gazetteer.hpp"

namespace crfner {

/// Which sentence-end token the "last word" indicator fires on.
enum class LastWord { penultimate, final };

/// Span matching flags multi-token entries B/I; token matching flags only
/// tokens that are single-token entries.
enum class GazetteerMatch { span, token };

struct FeatureConfig {
  int context_window = 1;
  bool use_affix = true;
  int affix_min = 3;
  int affix_max = 5;
  bool affix_nnp_only = false;
  bool use_pos = true;
  bool use_chunk = true;
  bool use_boundary = true;
  LastWord last_word = LastWord::penultimate;
  bool use_digit = true;
  bool use_position = true;
  bool use_verb = true;
  std::set<std::string> verb_tags{"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "VM", "VAUX"};
  bool use_capital = false;
  std::vector<std::string> gazetteers;
  GazetteerMatch gazetteer_match = GazetteerMatch::span;

  /// Throws ConfigError when a range invariant is broken.
  void validate() const;

  /// Stable key=value rendering; two configs are equal iff their
  /// canonical strings are.
  std::string canonical() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct Feature {
  std::string id;
  double value = 1.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

using FeatureVector = std::vector<Feature>;

/// Sorts by feature id.
void canonicalize(FeatureVector& vec);

enum class AffixKind { prefix, suffix };

struct Affix {
  AffixKind kind;
  std::string text;

  friend bool operator==(const Affix&, const Affix&) = default;
};

/// Prefixes then suffixes of every length in [min_len, min(max_len, |word|)],
/// measured in code points.
std::vector<Affix> affixes(std::string_view word, int min_len, int max_len);

bool has_digit(std::string_view word);

/// Throws UsageError on an empty word.
bool is_capitalized(std::string_view word);

/// index / (len - 1), or 0 for a one-token sentence.
double position_value(std::size_t index, std::size_t sentence_len);

/// Surface of the closest token whose POS is a verb tag (the token itself
/// included); equal distances resolve to the right.
std::optional<std::string> nearest_verb(const Sentence& sentence, std::size_t index,
                                        const std::set<std::string>& verb_tags);

struct GazetteerFlags {
  std::string name;
  std::vector<SpanFlag> flags;
};

FeatureVector extract_features(const Sentence& sentence, std::size_t index, const FeatureConfig& cfg,
                               std::span<const GazetteerFlags> matches);

/// Runs the configured gazetteers (by name, from `gazetteers`) over the
/// sentence. Throws UsageError when a configured name is missing.
std::vector<GazetteerFlags> gazetteer_flags(const Sentence& sentence, const FeatureConfig& cfg,
                                            std::span<const Gazetteer> gazetteers);

/// Feature vectors for every position of a sentence.
std::vector<FeatureVector> extract_sentence(const Sentence& sentence, const FeatureConfig& cfg,
                                            std::span<const Gazetteer> gazetteers);

}  // namespace crfner
