#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace crfner {

/// True for "O" and for "B-<TYPE>" / "I-<TYPE>" with a nonempty TYPE.
bool is_bio_label(std::string_view label);

/// Entity type of a B-/I- label, empty for "O".
std::string_view bio_type(std::string_view label);

struct Token {
  std::string surface;
  std::string pos;
  std::string chunk;
  std::optional<std::string> ne;

  /// Throws UsageError when a field is empty, contains whitespace, or the
  /// label is not a BIO label.
  void validate() const;

  friend bool operator==(const Token&, const Token&) = default;
};

class Sentence {
 public:
  /// Requires at least one token and uniform labeling.
  explicit Sentence(std::vector<Token> tokens);

  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  bool labeled() const noexcept { return tokens_.front().ne.has_value(); }

  /// NE labels in order; throws UsageError on an unlabeled sentence.
  std::vector<std::string> labels() const;

  /// Same tokens with the NE column replaced (or added) from `labels`.
  Sentence with_labels(const std::vector<std::string>& labels) const;
  Sentence without_labels() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::vector<Token> tokens_;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  const std::set<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return sentences_.empty(); }
  bool labeled() const noexcept { return !sentences_.empty() && sentences_.front().labeled(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Sentence> sentences_;
  std::set<std::string> labels_;
};

enum class Columns { unlabeled, labeled, detect };

struct ReadOptions {
  Columns columns = Columns::labeled;
  bool nfc = false;
};

Corpus parse_column_text(std::string_view text, const ReadOptions& options);
Corpus parse_column_file(const std::filesystem::path& path, const ReadOptions& options);
Corpus parse_column_file(const std::filesystem::path& path, bool labeled);

std::string format_column_text(const Corpus& corpus);
void write_column_file(const Corpus& corpus, const std::filesystem::path& path);

struct BioViolation {
  std::size_t sentence;
  std::size_t position;
  std::string label;

  friend bool operator==(const BioViolation&, const BioViolation&) = default;
};

struct BioCheck {
  Corpus corpus;
  std::vector<BioViolation> violations;
};

/// Finds every I-X whose predecessor is neither B-X nor I-X. With `repair`
/// those labels are rewritten to B-X in the returned corpus and the
/// violations list what was rewritten.
BioCheck validate_bio(const Corpus& corpus, bool repair);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::map<std::string, std::size_t> histogram;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace crfner
