#include "crfner/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crfner/error.hpp"

namespace crfner {

namespace {

double log_sum_exp(const double* x, std::size_t n) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) hi = std::max(hi, x[i]);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(x[i] - hi);
  return hi + std::log(sum);
}

// alpha(t, y): log-sum of all prefixes ending in y at t, node score included.
Matrix forward(const Lattice& lat) {
  const std::size_t T = lat.length(), L = lat.num_labels();
  Matrix alpha(T, L);
  for (std::size_t y = 0; y < L; ++y) alpha(0, y) = lat.start[y] + lat.node(0, y);
  std::vector<double> terms(L);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t p = 0; p < L; ++p) terms[p] = alpha(t - 1, p) + lat.transition(p, y);
      alpha(t, y) = lat.node(t, y) + log_sum_exp(terms.data(), L);
    }
  }
  return alpha;
}

// beta(t, y): log-sum of all suffixes after t given y at t.
Matrix backward(const Lattice& lat) {
  const std::size_t T = lat.length(), L = lat.num_labels();
  Matrix beta(T, L);
  std::vector<double> terms(L);
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      for (std::size_t n = 0; n < L; ++n) terms[n] = lat.transition(y, n) + lat.node(t + 1, n) + beta(t + 1, n);
      beta(t, y) = log_sum_exp(terms.data(), L);
    }
  }
  return beta;
}

void check_lattice(const Lattice& lat) {
  if (lat.length() == 0 || lat.num_labels() == 0) throw UsageError("empty lattice");
  if (lat.transition.rows() != lat.num_labels() || lat.transition.cols() != lat.num_labels() ||
      lat.start.size() != lat.num_labels())
    throw UsageError("lattice shape mismatch");
}

void fill_nodes(const double* unigram, std::size_t L, std::span<const SparseVector> vectors, Matrix& node) {
  node = Matrix(vectors.size(), L);
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    double* row = node.row(t);
    for (const auto& [f, v] : vectors[t]) {
      const double* w = unigram + static_cast<std::size_t>(f) * L;
      for (std::size_t y = 0; y < L; ++y) row[y] += w[y] * v;
    }
  }
}

Lattice lattice_from_params(std::span<const double> params, std::size_t F, std::size_t L,
                            std::span<const SparseVector> vectors) {
  Lattice lat;
  const double* unigram = params.data();
  const double* trans = params.data() + F * L;
  fill_nodes(unigram, L, vectors, lat.node);
  lat.transition = Matrix(L, L);
  std::copy(trans, trans + L * L, lat.transition.data().begin());
  lat.start.assign(trans + L * L, trans + (L + 1) * L);
  return lat;
}

}  // namespace

SparseVector compile(const FeatureAlphabet& alphabet, const FeatureVector& vec) {
  SparseVector out;
  out.reserve(vec.size());
  for (const Feature& f : vec)
    if (auto id = alphabet.find(f.id)) out.emplace_back(*id, f.value);
  return out;
}

Lattice build_lattice(const Model& model, std::span<const SparseVector> vectors) {
  if (vectors.empty()) throw UsageError("build_lattice: no feature vectors");
  const std::size_t L = model.num_labels();
  Lattice lat;
  fill_nodes(model.unigram.data().data(), L, vectors, lat.node);
  lat.transition = Matrix(L, L);
  std::copy(model.transition.row(0), model.transition.row(0) + L * L, lat.transition.data().begin());
  lat.start.assign(model.transition.row(model.start_row()), model.transition.row(model.start_row()) + L);
  return lat;
}

Lattice build_lattice(const Model& model, std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw UsageError("build_lattice: no feature vectors");
  std::vector<SparseVector> compiled;
  compiled.reserve(vectors.size());
  for (const auto& v : vectors) compiled.push_back(compile(model.features, v));
  return build_lattice(model, std::span<const SparseVector>(compiled));
}

double path_score(const Lattice& lat, std::span<const std::size_t> path) {
  if (path.size() != lat.length()) throw UsageError("path length does not match lattice");
  double score = lat.start[path[0]] + lat.node(0, path[0]);
  for (std::size_t t = 1; t < path.size(); ++t) score += lat.transition(path[t - 1], path[t]) + lat.node(t, path[t]);
  return score;
}

double log_partition(const Lattice& lat) {
  check_lattice(lat);
  const Matrix alpha = forward(lat);
  return log_sum_exp(alpha.row(lat.length() - 1), lat.num_labels());
}

Marginals marginals(const Lattice& lat) {
  check_lattice(lat);
  const std::size_t T = lat.length(), L = lat.num_labels();
  const Matrix alpha = forward(lat);
  const Matrix beta = backward(lat);
  Marginals out;
  out.log_z = log_sum_exp(alpha.row(T - 1), L);
  out.node = Matrix(T, L);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t y = 0; y < L; ++y) out.node(t, y) = std::exp(alpha(t, y) + beta(t, y) - out.log_z);
  out.edge.reserve(T - 1);
  for (std::size_t t = 1; t < T; ++t) {
    Matrix e(L, L);
    for (std::size_t a = 0; a < L; ++a)
      for (std::size_t b = 0; b < L; ++b)
        e(a, b) = std::exp(alpha(t - 1, a) + lat.transition(a, b) + lat.node(t, b) + beta(t, b) - out.log_z);
    out.edge.push_back(std::move(e));
  }
  return out;
}

ViterbiPath viterbi(const Lattice& lat) {
  check_lattice(lat);
  const std::size_t T = lat.length(), L = lat.num_labels();
  Matrix delta(T, L);
  std::vector<std::size_t> back(T * L, 0);
  for (std::size_t y = 0; y < L; ++y) delta(0, y) = lat.start[y] + lat.node(0, y);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      std::size_t best = 0;
      double best_score = delta(t - 1, 0) + lat.transition(0, y);
      for (std::size_t p = 1; p < L; ++p) {
        const double s = delta(t - 1, p) + lat.transition(p, y);
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
      delta(t, y) = best_score + lat.node(t, y);
      back[t * L + y] = best;
    }
  }
  ViterbiPath out;
  out.path.resize(T);
  std::size_t last = 0;
  for (std::size_t y = 1; y < L; ++y)
    if (delta(T - 1, y) > delta(T - 1, last)) last = y;
  out.path[T - 1] = last;
  for (std::size_t t = T - 1; t > 0; --t) out.path[t - 1] = back[t * L + out.path[t]];
  out.score = path_score(lat, out.path);
  return out;
}

Decoded viterbi(const Model& model, std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw UsageError("viterbi: empty input");
  const ViterbiPath best = viterbi(build_lattice(model, vectors));
  Decoded out;
  out.score = best.score;
  out.labels.reserve(best.path.size());
  for (std::size_t y : best.path) out.labels.push_back(model.labels[y]);
  return out;
}

std::vector<std::string> tag(const Model& model, const Sentence& sentence) {
  const auto vectors = extract_sentence(sentence, model.config, model.gazetteers);
  return viterbi(model, vectors).labels;
}

CrfObjective::CrfObjective(std::size_t num_features, std::size_t num_labels, double l2_sigma,
                           std::span<const CompiledSequence> data)
    : num_features_(num_features), num_labels_(num_labels), inv_sigma2_(1.0 / (l2_sigma * l2_sigma)), data_(data) {
  if (num_labels == 0) throw UsageError("objective needs at least one label");
  if (!(l2_sigma > 0.0)) throw UsageError("l2_sigma must be positive");
  for (const auto& seq : data_) {
    if (seq.vectors.empty()) throw UsageError("empty training sequence");
    if (seq.gold.size() != seq.vectors.size()) throw UsageError("gold label count does not match sequence length");
    for (std::size_t y : seq.gold)
      if (y >= num_labels) throw UsageError("gold label id " + std::to_string(y) + " out of range");
    for (const auto& vec : seq.vectors)
      for (const auto& fv : vec)
        if (fv.first >= num_features) throw UsageError("feature id out of range");
  }
}

double CrfObjective::operator()(std::span<const double> params, std::span<double> gradient) const {
  const std::size_t F = num_features_, L = num_labels_;
  if (params.size() != dimension() || gradient.size() != dimension())
    throw UsageError("objective: parameter vector has the wrong size");
  std::fill(gradient.begin(), gradient.end(), 0.0);
  double* grad_unigram = gradient.data();
  double* grad_trans = gradient.data() + F * L;
  double* grad_start = grad_trans + L * L;

  double value = 0.0;
  for (const CompiledSequence& seq : data_) {
    const Lattice lat = lattice_from_params(params, F, L, seq.vectors);
    const Marginals m = marginals(lat);
    value += m.log_z - path_score(lat, seq.gold);

    for (std::size_t t = 0; t < seq.vectors.size(); ++t) {
      const double* mt = m.node.row(t);
      const std::size_t gold = seq.gold[t];
      for (const auto& [f, v] : seq.vectors[t]) {
        double* g = grad_unigram + static_cast<std::size_t>(f) * L;
        for (std::size_t y = 0; y < L; ++y) g[y] += v * mt[y];
        g[gold] -= v;
      }
    }
    for (std::size_t y = 0; y < L; ++y) grad_start[y] += m.node(0, y);
    grad_start[seq.gold[0]] -= 1.0;
    for (std::size_t t = 0; t + 1 < seq.vectors.size(); ++t) {
      const auto& e = m.edge[t].data();
      for (std::size_t k = 0; k < L * L; ++k) grad_trans[k] += e[k];
      grad_trans[seq.gold[t] * L + seq.gold[t + 1]] -= 1.0;
    }
  }

  double penalty = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    penalty += params[k] * params[k];
    gradient[k] += params[k] * inv_sigma2_;
  }
  return value + 0.5 * penalty * inv_sigma2_;
}

ObjectiveValue nll_and_gradient(const Model& model, std::span<const LabeledSequence> batch) {
  std::vector<CompiledSequence> compiled;
  compiled.reserve(batch.size());
  for (const LabeledSequence& seq : batch) {
    CompiledSequence c;
    c.gold = seq.gold;
    for (const auto& v : seq.vectors) c.vectors.push_back(compile(model.features, v));
    compiled.push_back(std::move(c));
  }
  const CrfObjective objective(model.features.size(), model.num_labels(), model.l2_sigma, compiled);
  const std::vector<double> params = model.parameters();
  ObjectiveValue out;
  out.gradient.assign(params.size(), 0.0);
  out.value = objective(params, out.gradient);
  return out;
}

}  // namespace crfner
