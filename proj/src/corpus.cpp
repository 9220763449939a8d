#include "crfner/corpus.hpp"

#include <fstream>
#include <sstream>

#include "crfner/error.hpp"
#include "crfner/unicode.hpp"

namespace crfner {

namespace {

bool is_field_space(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_field_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_field_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool has_whitespace(std::string_view s) {
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  return false;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

}  // namespace

bool is_bio_label(std::string_view label) {
  if (label == "O") return true;
  return label.size() > 2 && (label[0] == 'B' || label[0] == 'I') && label[1] == '-';
}

std::string_view bio_type(std::string_view label) {
  return label.size() > 2 ? label.substr(2) : std::string_view{};
}

void Token::validate() const {
  for (const std::string* field : {&surface, &pos, &chunk}) {
    if (field->empty()) throw UsageError("token has an empty field");
    if (has_whitespace(*field)) throw UsageError("token field contains whitespace: '" + *field + "'");
  }
  if (ne && !is_bio_label(*ne)) throw UsageError("not a BIO label: '" + *ne + "'");
}

Sentence::Sentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw UsageError("sentence must contain at least one token");
  const bool first = tokens_.front().ne.has_value();
  for (const Token& t : tokens_) {
    t.validate();
    if (t.ne.has_value() != first) throw UsageError("sentence mixes labeled and unlabeled tokens");
  }
}

std::vector<std::string> Sentence::labels() const {
  if (!labeled()) throw UsageError("sentence is unlabeled");
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const Token& t : tokens_) out.push_back(*t.ne);
  return out;
}

Sentence Sentence::with_labels(const std::vector<std::string>& labels) const {
  if (labels.size() != tokens_.size()) throw UsageError("label count does not match sentence length");
  std::vector<Token> out = tokens_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].ne = labels[i];
  return Sentence(std::move(out));
}

Sentence Sentence::without_labels() const {
  std::vector<Token> out = tokens_;
  for (Token& t : out) t.ne.reset();
  return Sentence(std::move(out));
}

Corpus::Corpus(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
  if (sentences_.empty()) return;
  const bool first = sentences_.front().labeled();
  for (const Sentence& s : sentences_) {
    if (s.labeled() != first) throw UsageError("corpus mixes labeled and unlabeled sentences");
    if (first)
      for (const Token& t : s.tokens()) labels_.insert(*t.ne);
  }
}

Corpus parse_column_text(std::string_view text, const ReadOptions& options) {
  std::vector<Sentence> sentences;
  std::vector<Token> pending;
  std::size_t expected = options.columns == Columns::labeled ? 4 : options.columns == Columns::unlabeled ? 3 : 0;
  std::size_t sentence_columns = 0;

  auto flush = [&] {
    if (!pending.empty()) sentences.emplace_back(std::move(pending));
    pending.clear();
    sentence_columns = 0;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto fields = split_fields(line);
    if (fields.empty()) {
      flush();
      continue;
    }
    if (!unicode::is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
    if (fields.size() != 3 && fields.size() != 4)
      throw ParseError("expected 3 or 4 columns, found " + std::to_string(fields.size()), line_no);
    if (sentence_columns != 0 && fields.size() != sentence_columns)
      throw ParseError("sentence mixes labeled and unlabeled lines", line_no);
    if (expected == 0) expected = fields.size();
    if (fields.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " columns, found " + std::to_string(fields.size()),
                       line_no);
    sentence_columns = fields.size();

    auto field = [&](std::size_t i) {
      return options.nfc ? unicode::nfc(fields[i]) : std::string(fields[i]);
    };
    Token token{field(0), field(1), field(2), std::nullopt};
    if (fields.size() == 4) {
      token.ne = field(3);
      if (!is_bio_label(*token.ne)) throw ParseError("not a BIO label: '" + *token.ne + "'", line_no);
    }
    pending.push_back(std::move(token));
  }
  flush();
  return Corpus(std::move(sentences));
}

Corpus parse_column_file(const std::filesystem::path& path, const ReadOptions& options) {
  return parse_column_text(read_file(path), options);
}

Corpus parse_column_file(const std::filesystem::path& path, bool labeled) {
  return parse_column_file(path, ReadOptions{labeled ? Columns::labeled : Columns::unlabeled, false});
}

std::string format_column_text(const Corpus& corpus) {
  std::string out;
  for (const Sentence& s : corpus.sentences()) {
    for (const Token& t : s.tokens()) {
      out += t.surface;
      out += '\t';
      out += t.pos;
      out += '\t';
      out += t.chunk;
      if (t.ne) {
        out += '\t';
        out += *t.ne;
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

void write_column_file(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string text = format_column_text(corpus);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

BioCheck validate_bio(const Corpus& corpus, bool repair) {
  if (!corpus.empty() && !corpus.labeled()) throw UsageError("validate_bio requires a labeled corpus");
  BioCheck result;
  std::vector<Sentence> repaired;
  repaired.reserve(corpus.size());
  for (std::size_t si = 0; si < corpus.size(); ++si) {
    std::vector<std::string> labels = corpus.sentences()[si].labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::string& label = labels[i];
      if (label[0] != 'I') continue;
      const bool continues = i > 0 && labels[i - 1] != "O" && bio_type(labels[i - 1]) == bio_type(label);
      if (continues) continue;
      result.violations.push_back({si, i, label});
      if (repair) labels[i][0] = 'B';
    }
    if (repair) repaired.push_back(corpus.sentences()[si].with_labels(labels));
  }
  result.corpus = repair ? Corpus(std::move(repaired)) : corpus;
  return result;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.sentences = corpus.size();
  for (const Sentence& s : corpus.sentences()) {
    stats.tokens += s.size();
    for (const Token& t : s.tokens())
      if (t.ne) ++stats.histogram[*t.ne];
  }
  return stats;
}

}  // namespace crfner
