#include "crfner/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "crfner/error.hpp"

namespace crfner {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Correction {
  std::vector<double> s;  // x_{k+1} - x_k
  std::vector<double> y;  // g_{k+1} - g_k
  double rho;             // 1 / (y . s)
};

// Two-loop recursion: returns -H g.
std::vector<double> search_direction(const std::deque<Correction>& memory, std::span<const double> grad) {
  std::vector<double> q(grad.begin(), grad.end());
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * dot(memory[i].s, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * memory[i].y[k];
  }
  if (!memory.empty()) {
    const Correction& last = memory.back();
    const double gamma = 1.0 / (last.rho * dot(last.y, last.y));
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * dot(memory[i].y, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += memory[i].s[k] * (alpha[i] - beta);
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsOptions& options,
                           const IterationCallback& on_iteration) {
  if (options.history < 1) throw UsageError("L-BFGS history must be at least 1");
  if (options.max_iterations < 0) throw UsageError("max_iterations must be non-negative");

  const std::size_t n = x0.size();
  LbfgsResult result;
  result.x = std::move(x0);
  std::vector<double> grad(n);
  result.value = f(result.x, grad);
  if (!std::isfinite(result.value)) throw Error("objective is not finite at the start point");
  result.trace.push_back(result.value);

  std::deque<Correction> memory;
  std::vector<double> x_new(n), grad_new(n);

  if (n == 0 || max_abs(grad) <= options.gradient_tolerance) {
    result.reason = StopReason::gradient_zero;
    return result;
  }

  while (result.iterations < options.max_iterations) {
    std::vector<double> dir = search_direction(memory, grad);
    double slope = dot(dir, grad);
    if (!(slope < 0.0)) {
      // Lost positive-definiteness; restart from steepest descent.
      memory.clear();
      dir = search_direction(memory, grad);
      slope = dot(dir, grad);
    }

    double step = memory.empty() ? 1.0 / std::sqrt(dot(grad, grad)) : 1.0;
    double value_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      for (std::size_t k = 0; k < n; ++k) x_new[k] = result.x[k] + step * dir[k];
      value_new = f(x_new, grad_new);
      if (std::isfinite(value_new) && value_new <= result.value + options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= options.backtrack;
    }
    if (!accepted) {
      result.reason = StopReason::line_search_failed;
      return result;
    }

    Correction c{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      c.s[k] = x_new[k] - result.x[k];
      c.y[k] = grad_new[k] - grad[k];
    }
    const double ys = dot(c.y, c.s);
    if (ys > 1e-12 * dot(c.y, c.y)) {
      c.rho = 1.0 / ys;
      memory.push_back(std::move(c));
      if (memory.size() > static_cast<std::size_t>(options.history)) memory.pop_front();
    }

    const double previous = result.value;
    result.x.swap(x_new);
    grad.swap(grad_new);
    result.value = value_new;
    ++result.iterations;
    result.trace.push_back(result.value);
    if (on_iteration) on_iteration(result.iterations, result.value);

    if (max_abs(grad) <= options.gradient_tolerance) {
      result.reason = StopReason::gradient_zero;
      return result;
    }
    const double scale = std::max({std::abs(previous), std::abs(result.value), 1.0});
    if ((previous - result.value) / scale < options.tolerance) {
      result.reason = StopReason::converged;
      return result;
    }
  }
  result.reason = StopReason::max_iterations;
  return result;
}

}  // namespace crfner
