#include "crfner/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "crfner/error.hpp"
#include "crfner/inference.hpp"

namespace crfner {

void TrainOptions::validate() const {
  if (!(l2_sigma > 0.0) || !std::isfinite(l2_sigma)) throw ConfigError("l2_sigma must be a positive number");
  if (max_iterations < 0) throw ConfigError("max_iter must be non-negative");
  if (!(tolerance >= 0.0)) throw ConfigError("tol must be non-negative");
  if (feature_cutoff < 1) throw ConfigError("feature_cutoff must be at least 1");
  if (history < 1) throw ConfigError("lbfgs_history must be at least 1");
}

std::vector<std::string> ordered_labels(const std::set<std::string>& labels) {
  std::vector<std::string> out;
  if (labels.contains("O")) out.push_back("O");
  for (const auto& l : labels)
    if (l != "O") out.push_back(l);
  return out;
}

Model train(const Corpus& corpus, const FeatureConfig& cfg, std::span<const Gazetteer> gazetteers,
            const TrainOptions& options, const IterationCallback& on_iteration) {
  if (corpus.empty()) throw UsageError("cannot train on an empty corpus");
  if (!corpus.labeled()) throw UsageError("training corpus must be labeled");
  if (!validate_bio(corpus, false).violations.empty())
    throw UsageError("training corpus has BIO violations; run validate_bio with repair first");
  cfg.validate();
  options.validate();

  Model model;
  model.config = cfg;
  model.l2_sigma = options.l2_sigma;
  model.labels = ordered_labels(corpus.labels());
  for (const std::string& name : cfg.gazetteers) {
    auto it = std::find_if(gazetteers.begin(), gazetteers.end(), [&](const Gazetteer& g) { return g.name() == name; });
    if (it == gazetteers.end()) throw UsageError("gazetteer '" + name + "' is configured but not supplied");
    model.gazetteers.push_back(*it);
  }

  std::unordered_map<std::string, std::size_t> label_ids;
  for (std::size_t i = 0; i < model.labels.size(); ++i) label_ids.emplace(model.labels[i], i);

  std::vector<std::vector<FeatureVector>> extracted;
  extracted.reserve(corpus.size());
  for (const Sentence& s : corpus.sentences()) extracted.push_back(extract_sentence(s, cfg, model.gazetteers));

  // Alphabet in first-seen order; apply the frequency cutoff afterwards.
  FeatureAlphabet seen;
  std::vector<std::size_t> counts;
  for (const auto& sentence : extracted)
    for (const auto& vec : sentence)
      for (const Feature& f : vec) {
        const auto id = seen.intern(f.id);
        if (id == counts.size()) counts.push_back(0);
        ++counts[id];
      }
  for (std::uint32_t id = 0; id < seen.size(); ++id)
    if (counts[id] >= static_cast<std::size_t>(options.feature_cutoff)) model.features.intern(seen.name(id));
  model.reset_weights();

  std::vector<CompiledSequence> data;
  data.reserve(corpus.size());
  for (std::size_t si = 0; si < corpus.size(); ++si) {
    CompiledSequence seq;
    for (const auto& vec : extracted[si]) seq.vectors.push_back(compile(model.features, vec));
    for (const Token& t : corpus.sentences()[si].tokens()) seq.gold.push_back(label_ids.at(*t.ne));
    data.push_back(std::move(seq));
  }
  extracted.clear();

  const CrfObjective objective(model.features.size(), model.num_labels(), options.l2_sigma, data);
  LbfgsOptions lbfgs;
  lbfgs.history = options.history;
  lbfgs.max_iterations = options.max_iterations;
  lbfgs.tolerance = options.tolerance;
  lbfgs.gradient_tolerance = options.gradient_tolerance;
  LbfgsResult fit = lbfgs_minimize(
      [&](std::span<const double> x, std::span<double> g) { return objective(x, g); },
      std::vector<double>(objective.dimension(), 0.0), lbfgs, on_iteration);

  if (!std::isfinite(fit.value)) throw Error("training diverged: objective is not finite");
  model.set_parameters(fit.x);
  model.metadata.iterations = static_cast<std::uint32_t>(fit.iterations);
  model.metadata.final_objective = fit.value;
  model.metadata.config_hash = fnv1a(cfg.canonical());
  model.metadata.stop_reason = fit.reason;
  model.metadata.objective_trace = std::move(fit.trace);
  model.check();
  return model;
}

}  // namespace crfner
