#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crfner/features.hpp"
#include "crfner/gazetteer.hpp"

namespace crfner {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Bijection between feature-id strings and dense ids, in insertion order.
class FeatureAlphabet {
 public:
  /// Returns the id of `name`, inserting it if new.
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const FeatureAlphabet& a, const FeatureAlphabet& b) { return a.names_ == b.names_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> ids_;
  std::vector<std::string> names_;
};

enum class StopReason : std::uint8_t { converged, max_iterations, line_search_failed, gradient_zero };

std::string_view to_string(StopReason reason);

struct TrainingMetadata {
  std::uint32_t iterations = 0;
  double final_objective = 0.0;
  std::uint64_t config_hash = 0;
  StopReason stop_reason = StopReason::max_iterations;
  /// Penalized objective at the start point and after every accepted step.
  std::vector<double> objective_trace;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

/// A trained linear-chain CRF together with everything needed to rebuild
/// its features: the feature configuration and the gazetteers it names.
///
/// Transition weights have |labels| + 1 rows; the last row holds the
/// weights of transitions out of the virtual start state.
struct Model {
  std::vector<std::string> labels;
  FeatureAlphabet features;
  Matrix unigram;     // |features| x |labels|
  Matrix transition;  // (|labels| + 1) x |labels|
  double l2_sigma = 1.0;
  TrainingMetadata metadata;
  FeatureConfig config;
  std::vector<Gazetteer> gazetteers;

  /// Allocates zero weights for the current labels and alphabet.
  void reset_weights();

  std::size_t num_labels() const noexcept { return labels.size(); }
  std::size_t start_row() const noexcept { return labels.size(); }
  std::size_t num_parameters() const noexcept { return unigram.data().size() + transition.data().size(); }

  std::optional<std::size_t> label_id(std::string_view label) const;

  /// Throws UsageError when shapes disagree, labels are empty or
  /// duplicated, or a weight is not finite.
  void check() const;

  /// Weights flattened as [unigram row-major | transition row-major].
  std::vector<double> parameters() const;
  void set_parameters(const std::vector<double>& params);

  friend bool operator==(const Model&, const Model&) = default;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace crfner
