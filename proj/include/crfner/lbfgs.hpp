#pragma once

#include <functional>
#include <span>
#include <vector>

#include "crfner/model.hpp"

namespace crfner {

struct LbfgsOptions {
  int history = 10;
  int max_iterations = 200;
  /// Stop when |f_prev - f| / max(|f_prev|, |f|, 1) falls below this.
  double tolerance = 1e-5;
  /// Stop when the largest gradient component falls to or below this.
  double gradient_tolerance = 0.0;
  int max_line_search = 40;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

/// f(x, grad) -> value; must fill `grad`.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

/// Called after every accepted step with the iteration number (1-based)
/// and the new objective value.
using IterationCallback = std::function<void(int, double)>;

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::max_iterations;
  /// Objective at the start point, then after each accepted step.
  std::vector<double> trace;
};

/// Limited-memory BFGS with a backtracking line search that only accepts
/// steps satisfying the Armijo sufficient-decrease condition, so the
/// objective never increases between accepted iterates.
LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsOptions& options,
                           const IterationCallback& on_iteration = {});

}  // namespace crfner
