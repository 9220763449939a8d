#include "crfner/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "crfner/error.hpp"
#include "crfner/unicode.hpp"

namespace crfner {

Gazetteer::Gazetteer(std::string name, bool fold_case)
    : name_(std::move(name)), fold_case_(fold_case), nodes_(1) {}

std::string Gazetteer::normalize(std::string_view token) const {
  return fold_case_ ? unicode::fold_case(token) : std::string(token);
}

bool Gazetteer::add(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw UsageError("gazetteer entry must be nonempty");
  std::uint32_t node = 0;
  for (const std::string& raw : tokens) {
    if (raw.empty()) throw UsageError("gazetteer entry contains an empty token");
    std::string key = normalize(raw);
    auto it = nodes_[node].children.find(key);
    if (it == nodes_[node].children.end()) {
      const auto next = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].children.emplace(std::move(key), next);
      nodes_.emplace_back();
      node = next;
    } else {
      node = it->second;
    }
  }
  if (nodes_[node].terminal) return false;
  nodes_[node].terminal = true;
  ++entries_;
  max_length_ = std::max(max_length_, tokens.size());
  return true;
}

void Gazetteer::collect(std::uint32_t node, std::vector<std::string>& prefix,
                        std::vector<std::vector<std::string>>& out) const {
  if (nodes_[node].terminal) out.push_back(prefix);
  for (const auto& [key, child] : nodes_[node].children) {
    prefix.push_back(key);
    collect(child, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<std::string>> Gazetteer::entries() const {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> prefix;
  collect(0, prefix, out);
  return out;
}

bool Gazetteer::contains(const std::vector<std::string>& tokens) const {
  return !tokens.empty() && longest_match(tokens, 0) == tokens.size();
}

std::size_t Gazetteer::longest_match(const std::vector<std::string>& tokens, std::size_t start) const {
  std::size_t best = 0;
  std::uint32_t node = 0;
  for (std::size_t i = start; i < tokens.size(); ++i) {
    const auto& children = nodes_[node].children;
    auto it = children.find(tokens[i]);
    if (it == children.end()) break;
    node = it->second;
    if (nodes_[node].terminal) best = i - start + 1;
  }
  return best;
}

Gazetteer parse_gazetteer(std::string_view text, const std::string& name, bool fold_case) {
  Gazetteer gaz(name, fold_case);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::istringstream line{std::string(text.substr(pos, end - pos))};
    pos = end + 1;
    std::vector<std::string> tokens;
    for (std::string tok; line >> tok;) tokens.push_back(std::move(tok));
    if (!tokens.empty()) gaz.add(tokens);
  }
  return gaz;
}

Gazetteer load_gazetteer(const std::filesystem::path& path, const std::string& name, bool fold_case) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open gazetteer " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gazetteer(buf.str(), name, fold_case);
}

namespace {

std::vector<std::string> lookup_keys(const Sentence& sentence, bool fold_case) {
  std::vector<std::string> keys;
  keys.reserve(sentence.size());
  for (const Token& t : sentence.tokens()) keys.push_back(fold_case ? unicode::fold_case(t.surface) : t.surface);
  return keys;
}

}  // namespace

std::vector<SpanFlag> match_spans(const Gazetteer& gaz, const Sentence& sentence, bool fold_case) {
  const auto keys = lookup_keys(sentence, fold_case);
  std::vector<SpanFlag> flags(keys.size(), SpanFlag::O);
  std::size_t i = 0;
  while (i < keys.size()) {
    const std::size_t len = gaz.longest_match(keys, i);
    if (len == 0) {
      ++i;
      continue;
    }
    flags[i] = SpanFlag::B;
    std::fill(flags.begin() + static_cast<std::ptrdiff_t>(i + 1),
              flags.begin() + static_cast<std::ptrdiff_t>(i + len), SpanFlag::I);
    i += len;
  }
  return flags;
}

std::vector<SpanFlag> match_tokens(const Gazetteer& gaz, const Sentence& sentence, bool fold_case) {
  const auto keys = lookup_keys(sentence, fold_case);
  std::vector<SpanFlag> flags(keys.size(), SpanFlag::O);
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (gaz.contains({keys[i]})) flags[i] = SpanFlag::B;
  return flags;
}

}  // namespace crfner
