#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crfner/corpus.hpp"

namespace crfner {

enum class SpanFlag : char { O = 'O', B = 'B', I = 'I' };

/// A named list of multi-token names, indexed as a token trie.
///
/// Entries are normalized on insertion (case-folded when the gazetteer folds
/// case) and deduplicated. Matching walks the trie from each start position,
/// so a sentence costs O(length x longest entry) lookups.
class Gazetteer {
 public:
  Gazetteer(std::string name, bool fold_case);

  /// Adds one entry; returns false if it was already present. Throws
  /// UsageError for an empty entry or an entry with an empty token.
  bool add(const std::vector<std::string>& tokens);

  const std::string& name() const noexcept { return name_; }
  bool fold_case() const noexcept { return fold_case_; }
  std::size_t size() const noexcept { return entries_; }
  std::size_t max_entry_length() const noexcept { return max_length_; }

  /// All entries in lexicographic token order.
  std::vector<std::vector<std::string>> entries() const;

  bool contains(const std::vector<std::string>& tokens) const;

  /// Length of the longest entry that is a prefix of `tokens[start..]`, 0 if none.
  std::size_t longest_match(const std::vector<std::string>& tokens, std::size_t start) const;

  friend bool operator==(const Gazetteer& a, const Gazetteer& b) {
    return a.name_ == b.name_ && a.fold_case_ == b.fold_case_ && a.entries() == b.entries();
  }

 private:
  struct Node {
    std::map<std::string, std::uint32_t, std::less<>> children;
    bool terminal = false;
  };

  std::string normalize(std::string_view token) const;
  void collect(std::uint32_t node, std::vector<std::string>& prefix,
               std::vector<std::vector<std::string>>& out) const;

  std::string name_;
  bool fold_case_;
  std::vector<Node> nodes_;
  std::size_t entries_ = 0;
  std::size_t max_length_ = 0;
};

/// One name per line; blank lines skipped, whitespace trimmed, internal
/// whitespace separates tokens.
Gazetteer load_gazetteer(const std::filesystem::path& path, const std::string& name, bool fold_case);
Gazetteer parse_gazetteer(std::string_view text, const std::string& name, bool fold_case);

/// Greedy longest-leftmost span tagging. Tokens are case-folded before
/// lookup when `fold_case` is set.
std::vector<SpanFlag> match_spans(const Gazetteer& gaz, const Sentence& sentence, bool fold_case);

/// Flags B on every token that on its own is a single-token entry.
std::vector<SpanFlag> match_tokens(const Gazetteer& gaz, const Sentence& sentence, bool fold_case);

}  // namespace crfner
