#include <doctest.h>

#include <random>

#include "crfner/corpus.hpp"
#include "crfner/error.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace crfner;

namespace {

Corpus parse(std::string_view text, bool labeled = true) {
  return parse_column_text(text, ReadOptions{labeled ? Columns::labeled : Columns::unlabeled, false});
}

Sentence labeled(std::vector<std::string> labels) {
  std::vector<Token> toks;
  for (std::size_t i = 0; i < labels.size(); ++i) toks.push_back({"w" + std::to_string(i), "NN", "O", labels[i]});
  return Sentence(std::move(toks));
}

}  // namespace

TEST_CASE("bio label recognition") {
  CHECK(is_bio_label("O"));
  CHECK(is_bio_label("B-PER"));
  CHECK(is_bio_label("I-LOC"));
  CHECK_FALSE(is_bio_label("B-"));
  CHECK_FALSE(is_bio_label("PER"));
  CHECK_FALSE(is_bio_label("E-PER"));
  CHECK(bio_type("I-LOC") == "LOC");
  CHECK(bio_type("O").empty());
}

TEST_CASE("parse single Bengali token") {
  const Corpus c = parse("দিল্লি NNP B-NP B-LOC\n\n");
  REQUIRE(c.size() == 1);
  REQUIRE(c.sentences()[0].size() == 1);
  CHECK(c.sentences()[0][0].surface == "দিল্লি");
  CHECK(c.labels() == std::set<std::string>{"B-LOC"});
}

TEST_CASE("parse counts sentences and collapses blank runs") {
  const Corpus c = parse("a NN O O\nb NN O O\n\n\n\nc NN O B-PER\n\r\nd NN O O");
  CHECK(c.size() == 3);
  CHECK(c.sentences()[0].size() == 2);
  CHECK(c.labels() == std::set<std::string>{"O", "B-PER"});
}

TEST_CASE("tabs, runs of spaces, and CRLF are accepted") {
  const Corpus c = parse("a\tNN  B-NP\t\tO\r\nb NN I-NP O\r\n");
  REQUIRE(c.size() == 1);
  CHECK(c.sentences()[0][0].chunk == "B-NP");
  CHECK(c.sentences()[0][1].ne == "O");
}

TEST_CASE("column count errors name the line") {
  try {
    parse("a NN O O\nword NN\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("a NN O\n", true), ParseError);
  CHECK_THROWS_AS(parse("a NN O O\n", false), ParseError);
}

TEST_CASE("a sentence mixing labeled and unlabeled lines is rejected") {
  try {
    parse_column_text("a NN O O\nb NN O\n", ReadOptions{Columns::detect, false});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("mixes") != std::string::npos);
  }
}

TEST_CASE("non-BIO label is a parse error") {
  CHECK_THROWS_AS(parse("a NN O PER\n"), ParseError);
}

TEST_CASE("empty input yields an empty corpus") {
  CHECK(parse("").empty());
  CHECK(parse("\n\n  \n").empty());
  CHECK(parse_column_text("", ReadOptions{Columns::detect, false}).empty());
}

TEST_CASE("detect mode accepts either width") {
  CHECK(parse_column_text("a NN O\n", ReadOptions{Columns::detect, false}).labeled() == false);
  CHECK(parse_column_text("a NN O O\n", ReadOptions{Columns::detect, false}).labeled());
}

TEST_CASE("nfc normalization on read") {
  // "e" + combining acute -> precomposed U+00E9
  const Corpus c = parse_column_text("é NN O O\n", ReadOptions{Columns::labeled, true});
  CHECK(c.sentences()[0][0].surface == "é");
  const Corpus raw = parse_column_text("é NN O O\n", ReadOptions{Columns::labeled, false});
  CHECK(raw.sentences()[0][0].surface == "é");
}

TEST_CASE("invalid UTF-8 is a parse error") {
  CHECK_THROWS_AS(parse("\xff\xfe NN O O\n"), ParseError);
}

TEST_CASE("sentence and corpus invariants") {
  CHECK_THROWS_AS(Sentence({}), UsageError);
  CHECK_THROWS_AS(Sentence({{"a", "NN", "O", "O"}, {"b", "NN", "O", std::nullopt}}), UsageError);
  CHECK_THROWS_AS(Sentence({{"a b", "NN", "O", "O"}}), UsageError);
  CHECK_THROWS_AS(Corpus({labeled({"O"}), labeled({"O"}).without_labels()}), UsageError);
}

TEST_CASE("write and parse round-trip") {
  testutil::TempDir dir;
  SUBCASE("labeled") {
    const std::string text = "দিল্লি\tNNP\tB-NP\tB-LOC\nযাব\tVM\tB-VGF\tO\n\nx\tNN\tO\tO\n\n";
    const Corpus c = parse(text);
    write_column_file(c, dir / "out.txt");
    CHECK(testutil::read_text(dir / "out.txt") == text);
    CHECK(parse_column_file(dir / "out.txt", true) == c);
  }
  SUBCASE("blank-line normalization") {
    const Corpus c = parse("a  NN O O\n\n\n\nb NN O O");
    CHECK(format_column_text(c) == "a\tNN\tO\tO\n\nb\tNN\tO\tO\n\n");
  }
  SUBCASE("unlabeled writes three columns") {
    const Corpus c = parse("a NN O\n", false);
    write_column_file(c, dir / "u.txt");
    CHECK(testutil::read_text(dir / "u.txt") == "a\tNN\tO\n\n");
  }
  SUBCASE("empty corpus writes an empty file") {
    write_column_file(Corpus{}, dir / "e.txt");
    CHECK(std::filesystem::file_size(dir / "e.txt") == 0);
  }
  SUBCASE("generated corpora") {
    synthetic::NameGenerator gen(7);
    for (int i = 0; i < 20; ++i) {
      const Corpus c = gen.corpus(5);
      CHECK(parse(format_column_text(c)) == c);
      const Corpus u = Corpus([&] {
        std::vector<Sentence> s;
        for (const auto& x : c.sentences()) s.push_back(x.without_labels());
        return s;
      }());
      CHECK(parse(format_column_text(u), false) == u);
    }
  }
}

TEST_CASE("write to an unwritable path") {
  CHECK_THROWS_AS(write_column_file(Corpus{}, "/nonexistent-dir/x/y.txt"), IoError);
}

TEST_CASE("missing file is an I/O error") {
  CHECK_THROWS_AS(parse_column_file("/nonexistent-file.txt", true), IoError);
}

TEST_CASE("validate_bio") {
  SUBCASE("repair stray I") {
    const auto r = validate_bio(Corpus({labeled({"O", "I-PER"})}), true);
    CHECK(r.corpus.sentences()[0].labels() == std::vector<std::string>{"O", "B-PER"});
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0] == BioViolation{0, 1, "I-PER"});
  }
  SUBCASE("valid chain unchanged") {
    const Corpus c({labeled({"B-PER", "I-PER"})});
    const auto r = validate_bio(c, false);
    CHECK(r.violations.empty());
    CHECK(r.corpus == c);
  }
  SUBCASE("type mismatch breaks the chain") {
    const Corpus c({labeled({"B-LOC", "I-PER"})});
    const auto r = validate_bio(c, false);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].position == 1);
    CHECK(r.corpus == c);
  }
  SUBCASE("sentence-initial I") {
    CHECK(validate_bio(Corpus({labeled({"I-ORG", "I-ORG"})}), false).violations.size() == 1);
  }
  SUBCASE("unlabeled corpus is a usage error") {
    CHECK_THROWS_AS(validate_bio(Corpus({labeled({"O"}).without_labels()}), false), UsageError);
  }
  SUBCASE("repaired output always validates") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> pool{"O", "B-PER", "I-PER", "B-LOC", "I-LOC"};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Sentence> ss;
      for (int s = 0; s < 3; ++s) {
        std::vector<std::string> labels(len(rng));
        for (auto& l : labels) l = pool[pick(rng)];
        ss.push_back(labeled(labels));
      }
      const auto repaired = validate_bio(Corpus(ss), true);
      CHECK(validate_bio(repaired.corpus, false).violations.empty());
    }
  }
}

TEST_CASE("corpus_stats") {
  CHECK(corpus_stats(Corpus{}).sentences == 0);
  CHECK(corpus_stats(Corpus{}).tokens == 0);
  CHECK(corpus_stats(Corpus{}).histogram.empty());

  const Corpus two({labeled({"O", "O", "B-PER"}), labeled({"O", "O", "O", "B-LOC", "I-LOC"})});
  const auto s = corpus_stats(two);
  CHECK(s.sentences == 2);
  CHECK(s.tokens == 8);

  const auto toy = corpus_stats(Corpus({labeled({"O", "O", "B-PER"})}));
  CHECK(toy.histogram == std::map<std::string, std::size_t>{{"O", 2}, {"B-PER", 1}});

  synthetic::NameGenerator gen(3);
  const Corpus c = gen.corpus(40);
  const auto st = corpus_stats(c);
  std::size_t lengths = 0, hist = 0;
  for (const auto& x : c.sentences()) lengths += x.size();
  for (const auto& [k, v] : st.histogram) hist += v;
  CHECK(st.tokens == lengths);
  CHECK(hist == st.tokens);
}
