#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crfner/features.hpp"
#include "crfner/model.hpp"

namespace crfner {

/// Log-potentials of one sentence. `start[y]` scores entering label y from
/// the virtual start state; `transition(y', y)` scores every later step.
struct Lattice {
  Matrix node;        // length x labels
  Matrix transition;  // labels x labels
  std::vector<double> start;

  std::size_t length() const noexcept { return node.rows(); }
  std::size_t num_labels() const noexcept { return node.cols(); }
};

/// Feature vector with ids resolved against a model alphabet.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

/// Drops features that are not in the alphabet.
SparseVector compile(const FeatureAlphabet& alphabet, const FeatureVector& vec);

/// Throws UsageError on an empty vector list.
Lattice build_lattice(const Model& model, std::span<const FeatureVector> vectors);
Lattice build_lattice(const Model& model, std::span<const SparseVector> vectors);

/// Sum of start, node, and transition scores along `path`.
double path_score(const Lattice& lattice, std::span<const std::size_t> path);

double log_partition(const Lattice& lattice);

struct Marginals {
  Matrix node;              // length x labels
  std::vector<Matrix> edge;  // length-1 matrices of labels x labels; edge[t](a, b) = P(y_t = a, y_{t+1} = b)
  double log_z = 0.0;
};

Marginals marginals(const Lattice& lattice);

struct ViterbiPath {
  std::vector<std::size_t> path;
  double score = 0.0;
};

/// Highest-scoring path; at each backpointer and at the final position the
/// lowest label index wins ties.
ViterbiPath viterbi(const Lattice& lattice);

struct Decoded {
  std::vector<std::string> labels;
  double score = 0.0;
};

Decoded viterbi(const Model& model, std::span<const FeatureVector> vectors);

/// Decodes a sentence end to end using the model's own feature config and
/// gazetteers.
std::vector<std::string> tag(const Model& model, const Sentence& sentence);

struct LabeledSequence {
  std::vector<FeatureVector> vectors;
  std::vector<std::size_t> gold;
};

struct CompiledSequence {
  std::vector<SparseVector> vectors;
  std::vector<std::size_t> gold;
};

struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Penalized negative log-likelihood of a batch at the model's current
/// weights, with its gradient laid out like Model::parameters().
ObjectiveValue nll_and_gradient(const Model& model, std::span<const LabeledSequence> batch);

/// Same objective over precompiled sequences; `params` is laid out like
/// Model::parameters(). Writes the gradient into `gradient` and returns
/// the value. Sequences are visited in order so results are reproducible.
class CrfObjective {
 public:
  CrfObjective(std::size_t num_features, std::size_t num_labels, double l2_sigma,
               std::span<const CompiledSequence> data);

  double operator()(std::span<const double> params, std::span<double> gradient) const;

  std::size_t dimension() const noexcept { return (num_features_ + num_labels_ + 1) * num_labels_; }

 private:
  std::size_t num_features_;
  std::size_t num_labels_;
  double inv_sigma2_;
  std::span<const CompiledSequence> data_;
};

}  // namespace crfner
