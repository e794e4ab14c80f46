#pragma once

#include <functional>
#include <span>
#include <vector>

namespace alphatex {

/// f(x), writing the gradient into `grad` (same size as x).
using Evaluator = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  int max_iterations = 500;
  int memory = 20;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search_evaluations = 20;
  double gradient_tolerance = 1e-10;
};

struct LbfgsIteration {
  int iteration = 0;  // 1-based count of accepted steps
  double loss = 0.0;
  double grad_norm = 0.0;
  int evaluations = 0;
};

enum class LbfgsStop { iterations, gradient, line_search };

struct LbfgsResult {
  std::vector<double> x;
  double loss = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStop stop = LbfgsStop::iterations;
};

/// Limited-memory BFGS with a strong-Wolfe line search.
///
/// A trial point with a non-finite loss is treated as an overshoot and the
/// step is bisected toward the last finite point. Curvature pairs with
/// y.s <= 1e-10 |y||s| are skipped. After a failed line search the memory is
/// cleared and a steepest-descent step is tried; two consecutive failures end
/// the run. Returns the best point found (the last accepted iterate).
LbfgsResult lbfgs_minimize(std::vector<double> x0, const Evaluator& f, const LbfgsOptions& options,
                           const std::function<void(const LbfgsIteration&)>& on_iteration = {});

}  // namespace alphatex
