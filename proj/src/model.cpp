#include "crfner/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crfner/error.hpp"

namespace crfner {

std::uint32_t FeatureAlphabet::intern(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> FeatureAlphabet::find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged: return "converged";
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::line_search_failed: return "line_search_failed";
    case StopReason::gradient_zero: return "gradient_zero";
  }
  return "unknown";
}

void Model::reset_weights() {
  unigram = Matrix(features.size(), labels.size());
  transition = Matrix(labels.size() + 1, labels.size());
}

std::optional<std::size_t> Model::label_id(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

void Model::check() const {
  if (labels.empty()) throw UsageError("model has no labels");
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size())
    throw UsageError("model labels are not unique");
  if (unigram.rows() != features.size() || unigram.cols() != labels.size())
    throw UsageError("unigram weight shape does not match alphabet and labels");
  if (transition.rows() != labels.size() + 1 || transition.cols() != labels.size())
    throw UsageError("transition weight shape does not match labels");
  auto finite = [](double w) { return std::isfinite(w); };
  if (!std::all_of(unigram.data().begin(), unigram.data().end(), finite) ||
      !std::all_of(transition.data().begin(), transition.data().end(), finite))
    throw UsageError("model weights contain NaN or Inf");
  if (!(l2_sigma > 0.0)) throw UsageError("l2_sigma must be positive");
}

std::vector<double> Model::parameters() const {
  std::vector<double> out;
  out.reserve(num_parameters());
  out.insert(out.end(), unigram.data().begin(), unigram.data().end());
  out.insert(out.end(), transition.data().begin(), transition.data().end());
  return out;
}

void Model::set_parameters(const std::vector<double>& params) {
  if (params.size() != num_parameters()) throw UsageError("parameter vector has the wrong size");
  const auto split = params.begin() + static_cast<std::ptrdiff_t>(unigram.data().size());
  std::copy(params.begin(), split, unigram.data().begin());
  std::copy(split, params.end(), transition.data().begin());
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace crfner
