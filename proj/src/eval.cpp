#include "crfner/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace crfner {

std::vector<EntitySpan> extract_entities(std::span<const std::string> labels) {
  std::vector<EntitySpan> spans;
  bool open = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& label = labels[i];
    if (!is_bio_label(label) || label == "O") {
      open = false;
      continue;
    }
    const auto type = bio_type(label);
    if (label[0] == 'I' && open && spans.back().etype == type) {
      spans.back().end = i + 1;
      continue;
    }
    spans.push_back({i, i + 1, std::string(type)});
    open = true;
  }
  return spans;
}

double f_measure(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

void Counts::finalize() {
  precision = pred ? static_cast<double>(correct) / static_cast<double>(pred) : 0.0;
  recall = gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  f1 = f_measure(precision, recall);
}

EvalReport score(const Corpus& gold, const Corpus& pred) {
  if (gold.size() != pred.size())
    throw ShapeMismatch("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                            std::to_string(pred.size()),
                        std::min(gold.size(), pred.size()));
  EvalReport report;
  for (std::size_t si = 0; si < gold.size(); ++si) {
    const Sentence& g = gold.sentences()[si];
    const Sentence& p = pred.sentences()[si];
    if (g.size() != p.size())
      throw ShapeMismatch("sentence " + std::to_string(si + 1) + ": gold has " + std::to_string(g.size()) +
                              " tokens, prediction has " + std::to_string(p.size()),
                          si);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i].surface != p[i].surface)
        throw ShapeMismatch("sentence " + std::to_string(si + 1) + ", token " + std::to_string(i + 1) +
                                ": surfaces differ ('" + g[i].surface + "' vs '" + p[i].surface + "')",
                            si);
    if (!g.labeled() || !p.labeled())
      throw ShapeMismatch("sentence " + std::to_string(si + 1) + " is unlabeled", si);

    const auto gold_labels = g.labels();
    const auto pred_labels = p.labels();
    const auto gold_spans = extract_entities(gold_labels);
    const auto pred_spans = extract_entities(pred_labels);
    const std::set<EntitySpan> gold_set(gold_spans.begin(), gold_spans.end());
    for (const auto& s : gold_spans) ++report.per_type[s.etype].gold;
    for (const auto& s : pred_spans) {
      Counts& c = report.per_type[s.etype];
      ++c.pred;
      if (gold_set.contains(s)) ++c.correct;
    }
  }
  for (auto& [type, c] : report.per_type) {
    c.finalize();
    report.overall.gold += c.gold;
    report.overall.pred += c.pred;
    report.overall.correct += c.correct;
  }
  report.overall.finalize();
  return report;
}

namespace {

std::string row(const std::string& name, const Counts& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %7zu %7zu %8zu %10.4f %10.4f %10.4f\n", name.c_str(), c.gold, c.pred,
                c.correct, c.precision, c.recall, c.f1);
  return buf;
}

std::string record(const std::string& name, const Counts& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "gold=%zu pred=%zu correct=%zu precision=%.4f recall=%.4f f1=%.4f\n", c.gold,
                c.pred, c.correct, c.precision, c.recall, c.f1);
  return "type=" + name + " " + buf;
}

}  // namespace

std::string format_table(const EvalReport& report) {
  char header[256];
  std::snprintf(header, sizeof header, "%-12s %7s %7s %8s %10s %10s %10s\n", "Type", "Gold", "Pred", "Correct",
                "Precision", "Recall", "F-Measure");
  std::string out = header;
  for (const auto& [type, c] : report.per_type) out += row(type, c);
  out += row("overall", report.overall);
  return out;
}

std::string format_records(const EvalReport& report) {
  std::string out;
  for (const auto& [type, c] : report.per_type) out += record(type, c);
  out += record("overall", report.overall);
  return out;
}

}  // namespace crfner
