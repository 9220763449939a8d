#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crfner/corpus.hpp"
#include "crfner/error.hpp"

namespace crfner {

struct EntitySpan {
  std::size_t start;  // inclusive
  std::size_t end;    // exclusive
  std::string etype;

  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

/// Maximal B-X (I-X)* runs. An I-X without a B-X/I-X predecessor opens a
/// new span; "O" and any type change close the current one.
std::vector<EntitySpan> extract_entities(std::span<const std::string> labels);

double f_measure(double precision, double recall);

struct Counts {
  std::size_t gold = 0;
  std::size_t pred = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  /// Recomputes precision, recall, and f1 from the counts.
  void finalize();
};

struct EvalReport {
  std::map<std::string, Counts> per_type;
  Counts overall;
};

class ShapeMismatch : public Error {
 public:
  ShapeMismatch(const std::string& what, std::size_t sentence) : Error(what), sentence_(sentence) {}
  /// 0-based index of the first diverging sentence.
  std::size_t sentence() const noexcept { return sentence_; }

 private:
  std::size_t sentence_;
};

/// Exact-match entity scoring, micro-averaged overall. Both corpora must be
/// labeled and agree on sentence count, lengths, and surfaces.
EvalReport score(const Corpus& gold, const Corpus& pred);

/// Fixed-width table: Type, Gold, Pred, Correct, Precision, Recall, F-Measure.
std::string format_table(const EvalReport& report);

/// One `type=<T> gold=.. pred=.. correct=.. precision=.. recall=.. f1=..` line
/// per type, then the overall line with type=overall.
std::string format_records(const EvalReport& report);

}  // namespace crfner
