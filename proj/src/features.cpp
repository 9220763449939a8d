#include "crfner/features.hpp"

#include <algorithm>
#include <sstream>

#include "crfner/error.hpp"
#include "crfner/unicode.hpp"

namespace crfner {

namespace {

constexpr std::string_view kBos = "BOS";
constexpr std::string_view kEos = "EOS";

std::string offset_tag(int offset) {
  if (offset > 0) return "[+" + std::to_string(offset) + "]";
  return "[" + std::to_string(offset) + "]";
}

std::string_view sentinel(int offset) { return offset < 0 ? kBos : kEos; }

template <typename Field>
void add_window(FeatureVector& out, std::string_view family, const Sentence& s, std::size_t index, int width,
                Field field) {
  for (int off = -width; off <= width; ++off) {
    const auto at = static_cast<long long>(index) + off;
    std::string id(family);
    id += offset_tag(off);
    id += '=';
    if (at < 0 || at >= static_cast<long long>(s.size()))
      id += sentinel(off);
    else
      id += field(s[static_cast<std::size_t>(at)]);
    out.push_back({std::move(id), 1.0});
  }
}

}  // namespace

void FeatureConfig::validate() const {
  if (context_window < 0 || context_window > 4) throw ConfigError("context_window must be in [0, 4]");
  if (affix_min <= 0 || affix_min > affix_max) throw ConfigError("affixes require 0 < affix_min <= affix_max");
  std::set<std::string> names;
  for (const std::string& g : gazetteers) {
    if (g.empty() || g.find_first_of(" \t,:") != std::string::npos)
      throw ConfigError("invalid gazetteer name '" + g + "'");
    if (!names.insert(g).second) throw ConfigError("gazetteer '" + g + "' listed twice");
  }
}

std::string FeatureConfig::canonical() const {
  std::ostringstream out;
  out << "context_window=" << context_window << '\n'
      << "use_affix=" << use_affix << '\n'
      << "affix_min=" << affix_min << '\n'
      << "affix_max=" << affix_max << '\n'
      << "affix_nnp_only=" << affix_nnp_only << '\n'
      << "use_pos=" << use_pos << '\n'
      << "use_chunk=" << use_chunk << '\n'
      << "use_boundary=" << use_boundary << '\n'
      << "last_word=" << (last_word == LastWord::penultimate ? "penultimate" : "final") << '\n'
      << "use_digit=" << use_digit << '\n'
      << "use_position=" << use_position << '\n'
      << "use_verb=" << use_verb << '\n'
      << "verb_tags=";
  bool first = true;
  for (const auto& t : verb_tags) {
    out << (first ? "" : ",") << t;
    first = false;
  }
  out << '\n' << "use_capital=" << use_capital << '\n' << "gazetteers=";
  first = true;
  for (const auto& g : gazetteers) {
    out << (first ? "" : ",") << g;
    first = false;
  }
  out << '\n' << "gazetteer_match=" << (gazetteer_match == GazetteerMatch::span ? "span" : "token") << '\n';
  return out.str();
}

void canonicalize(FeatureVector& vec) {
  std::sort(vec.begin(), vec.end(), [](const Feature& a, const Feature& b) { return a.id < b.id; });
}

std::vector<Affix> affixes(std::string_view word, int min_len, int max_len) {
  std::vector<Affix> out;
  if (min_len <= 0 || min_len > max_len) return out;
  const auto cuts = unicode::boundaries(word);
  const auto n = static_cast<int>(cuts.size()) - 1;
  const int top = std::min(max_len, n);
  for (int k = min_len; k <= top; ++k) out.push_back({AffixKind::prefix, std::string(word.substr(0, cuts[k]))});
  for (int k = min_len; k <= top; ++k) out.push_back({AffixKind::suffix, std::string(word.substr(cuts[n - k]))});
  return out;
}

bool has_digit(std::string_view word) {
  const auto cps = unicode::decode(word);
  return std::any_of(cps.begin(), cps.end(), unicode::is_decimal_digit);
}

bool is_capitalized(std::string_view word) {
  if (word.empty()) throw UsageError("is_capitalized: empty word");
  const auto cps = unicode::decode(word);
  return unicode::is_uppercase_letter(cps.front());
}

double position_value(std::size_t index, std::size_t sentence_len) {
  if (sentence_len <= 1) return 0.0;
  return static_cast<double>(index) / static_cast<double>(sentence_len - 1);
}

std::optional<std::string> nearest_verb(const Sentence& sentence, std::size_t index,
                                        const std::set<std::string>& verb_tags) {
  const std::size_t n = sentence.size();
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t right = index + d;
    if (right < n && verb_tags.contains(sentence[right].pos)) return sentence[right].surface;
    if (d <= index && verb_tags.contains(sentence[index - d].pos)) return sentence[index - d].surface;
  }
  return std::nullopt;
}

FeatureVector extract_features(const Sentence& sentence, std::size_t index, const FeatureConfig& cfg,
                               std::span<const GazetteerFlags> matches) {
  FeatureVector out;
  const Token& tok = sentence[index];
  const std::size_t n = sentence.size();

  add_window(out, "w", sentence, index, cfg.context_window, [](const Token& t) { return t.surface; });

  if (cfg.use_affix && (!cfg.affix_nnp_only || tok.pos == "NNP")) {
    for (const Affix& a : affixes(tok.surface, cfg.affix_min, cfg.affix_max)) {
      std::string id = a.kind == AffixKind::prefix ? "pre" : "suf";
      id += std::to_string(unicode::length(a.text));
      id += '=';
      id += a.text;
      out.push_back({std::move(id), 1.0});
    }
  }

  if (cfg.use_pos) add_window(out, "pos", sentence, index, 1, [](const Token& t) { return t.pos; });
  if (cfg.use_chunk) add_window(out, "chk", sentence, index, 1, [](const Token& t) { return t.chunk; });

  if (cfg.use_boundary) {
    if (index == 0) out.push_back({"first", 1.0});
    if (cfg.last_word == LastWord::penultimate) {
      if (n >= 2 && index == n - 2) out.push_back({"penult", 1.0});
    } else if (index == n - 1) {
      out.push_back({"last", 1.0});
    }
  }

  if (cfg.use_digit && has_digit(tok.surface)) out.push_back({"digit", 1.0});
  if (cfg.use_position) out.push_back({"posn", position_value(index, n)});

  if (cfg.use_verb) {
    if (auto verb = nearest_verb(sentence, index, cfg.verb_tags)) out.push_back({"verb=" + *verb, 1.0});
  }

  for (const GazetteerFlags& m : matches) {
    if (m.flags.size() != n) throw UsageError("gazetteer flags for '" + m.name + "' do not match sentence length");
    const SpanFlag f = m.flags[index];
    if (f == SpanFlag::O) continue;
    out.push_back({"gaz:" + m.name + ":" + static_cast<char>(f), 1.0});
  }

  if (cfg.use_capital && is_capitalized(tok.surface)) out.push_back({"cap", 1.0});
  return out;
}

std::vector<GazetteerFlags> gazetteer_flags(const Sentence& sentence, const FeatureConfig& cfg,
                                            std::span<const Gazetteer> gazetteers) {
  std::vector<GazetteerFlags> out;
  out.reserve(cfg.gazetteers.size());
  for (const std::string& name : cfg.gazetteers) {
    auto it = std::find_if(gazetteers.begin(), gazetteers.end(), [&](const Gazetteer& g) { return g.name() == name; });
    if (it == gazetteers.end()) throw UsageError("gazetteer '" + name + "' is configured but not loaded");
    auto flags = cfg.gazetteer_match == GazetteerMatch::span ? match_spans(*it, sentence, it->fold_case())
                                                             : match_tokens(*it, sentence, it->fold_case());
    out.push_back({name, std::move(flags)});
  }
  return out;
}

std::vector<FeatureVector> extract_sentence(const Sentence& sentence, const FeatureConfig& cfg,
                                            std::span<const Gazetteer> gazetteers) {
  const auto matches = gazetteer_flags(sentence, cfg, gazetteers);
  std::vector<FeatureVector> out;
  out.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) out.push_back(extract_features(sentence, i, cfg, matches));
  return out;
}

}  // namespace crfner
