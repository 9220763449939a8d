#pragma once

#include <span>

#include "crfner/corpus.hpp"
#include "crfner/features.hpp"
#include "crfner/gazetteer.hpp"
#include "crfner/lbfgs.hpp"
#include "crfner/model.hpp"

namespace crfner {

struct TrainOptions {
  double l2_sigma = 1.0;
  int max_iterations = 200;
  double tolerance = 1e-5;
  /// Features seen fewer than this many times in training are dropped.
  int feature_cutoff = 1;
  int history = 10;
  double gradient_tolerance = 0.0;

  void validate() const;
};

/// Orders labels "O" first, then lexicographically.
std::vector<std::string> ordered_labels(const std::set<std::string>& labels);

/// Fits a model by L-BFGS from zero weights. The corpus must be labeled,
/// nonempty, and BIO-valid; `gazetteers` must supply every name in
/// `cfg.gazetteers` (others are ignored). The returned model carries copies
/// of the config and of the gazetteers it uses.
Model train(const Corpus& corpus, const FeatureConfig& cfg, std::span<const Gazetteer> gazetteers,
            const TrainOptions& options, const IterationCallback& on_iteration = {});

}  // namespace crfner
