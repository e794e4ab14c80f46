#include "alphatex/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "alphatex/image.hpp"

namespace alphatex {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
#pragma omp simd reduction(+ : acc)
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Sample {
  double step = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative
  bool finite = true;
};

/// Minimizer of the cubic through two samples, safeguarded into the interior
/// of the bracket; falls back to bisection.
double interpolate(const Sample& lo, const Sample& hi) {
  const double mid = 0.5 * (lo.step + hi.step);
  if (!hi.finite) return mid;
  const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (lo.step - hi.step);
  const double disc = d1 * d1 - lo.slope * hi.slope;
  if (!(disc >= 0.0)) return mid;
  const double d2 = std::copysign(std::sqrt(disc), hi.step - lo.step);
  const double denom = hi.slope - lo.slope + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double a = hi.step - (hi.step - lo.step) * (hi.slope + d2 - d1) / denom;
  const double left = std::min(lo.step, hi.step), right = std::max(lo.step, hi.step);
  const double margin = 0.1 * (right - left);
  if (!std::isfinite(a) || a < left + margin || a > right - margin) return mid;
  return a;
}

class LineSearch {
 public:
  LineSearch(const Evaluator& f, const LbfgsOptions& o, std::span<const double> x,
             std::span<const double> d, double f0, double slope0)
      : f_(f), o_(o), x_(x), d_(d), f0_(f0), slope0_(slope0), trial_(x.size()), grad_(x.size()) {}

  /// On success, `x_out`/`g_out`/`f_out` hold the accepted point.
  bool run(double step, std::vector<double>& x_out, std::vector<double>& g_out, double& f_out) {
    Sample prev{0.0, f0_, slope0_, true};
    for (int i = 0; evaluations_ < o_.max_line_search_evaluations; ++i) {
      Sample s = probe(step);
      if (!s.finite) {
        // Overshoot into a non-finite region: halve toward the last finite point.
        step = 0.5 * (prev.step + step);
        continue;
      }
      if (s.f > f0_ + o_.c1 * s.step * slope0_ || (i > 0 && s.f >= prev.f)) return zoom(prev, s, x_out, g_out, f_out);
      if (std::abs(s.slope) <= -o_.c2 * slope0_) return accept(x_out, g_out, f_out);
      if (s.slope >= 0.0) return zoom(s, prev, x_out, g_out, f_out);
      prev = s;
      step *= 2.0;
    }
    return fallback(x_out, g_out, f_out);
  }

  int evaluations() const { return evaluations_; }

 private:
  Sample probe(double step) {
    for (std::size_t k = 0; k < x_.size(); ++k) trial_[k] = x_[k] + step * d_[k];
    const double f = f_(trial_, grad_);
    ++evaluations_;
    last_f_ = f;
    Sample s{step, f, 0.0, std::isfinite(f)};
    if (s.finite) {
      s.slope = dot(grad_, d_);
      if (!std::isfinite(s.slope)) s.finite = false;
    }
    if (s.finite && s.f <= f0_ + o_.c1 * step * slope0_ && s.f < best_f_) {
      best_f_ = s.f;
      best_x_ = trial_;
      best_g_ = grad_;
    }
    return s;
  }

  bool accept(std::vector<double>& x_out, std::vector<double>& g_out, double& f_out) {
    x_out = trial_;
    g_out = grad_;
    f_out = last_f_;
    return true;
  }

  bool zoom(Sample lo, Sample hi, std::vector<double>& x_out, std::vector<double>& g_out, double& f_out) {
    while (evaluations_ < o_.max_line_search_evaluations) {
      const double step = interpolate(lo, hi);
      if (step == lo.step || step == hi.step) break;
      Sample s = probe(step);
      if (!s.finite || s.f > f0_ + o_.c1 * s.step * slope0_ || s.f >= lo.f) {
        hi = s;
        continue;
      }
      if (std::abs(s.slope) <= -o_.c2 * slope0_) return accept(x_out, g_out, f_out);
      if (s.slope * (hi.step - lo.step) >= 0.0) hi = lo;
      lo = s;
    }
    return fallback(x_out, g_out, f_out);
  }

  /// Evaluation budget exhausted: take the best sufficient-decrease point.
  bool fallback(std::vector<double>& x_out, std::vector<double>& g_out, double& f_out) {
    if (best_x_.empty()) return false;
    x_out = best_x_;
    g_out = best_g_;
    f_out = best_f_;
    return true;
  }

  const Evaluator& f_;
  const LbfgsOptions& o_;
  std::span<const double> x_;
  std::span<const double> d_;
  double f0_;
  double slope0_;
  std::vector<double> trial_;
  std::vector<double> grad_;
  int evaluations_ = 0;
  double last_f_ = 0.0;
  double best_f_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
  std::vector<double> best_g_;
};

}  // namespace

LbfgsResult lbfgs_minimize(std::vector<double> x0, const Evaluator& f, const LbfgsOptions& options,
                           const std::function<void(const LbfgsIteration&)>& on_iteration) {
  if (options.memory < 1) throw Error("L-BFGS memory must be >= 1");
  LbfgsResult result;
  result.x = std::move(x0);
  const std::size_t dim = result.x.size();
  std::vector<double> g(dim);
  result.loss = f(result.x, g);
  result.evaluations = 1;
  if (!std::isfinite(result.loss)) throw Error("objective is not finite at the starting point");
  result.grad_norm = norm2(g);
  if (result.grad_norm < options.gradient_tolerance) {
    result.stop = LbfgsStop::gradient;
    return result;
  }

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> d(dim), alpha(options.memory), x_new, g_new;
  int failures = 0;

  for (int it = 0; it < options.max_iterations; ++it) {
    // Two-loop recursion.
    for (std::size_t k = 0; k < dim; ++k) d[k] = -g[k];
    for (int m = static_cast<int>(memory.size()) - 1; m >= 0; --m) {
      alpha[m] = memory[m].rho * dot(memory[m].s, d);
      for (std::size_t k = 0; k < dim; ++k) d[k] -= alpha[m] * memory[m].y[k];
    }
    if (!memory.empty()) {
      const Pair& last = memory.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (auto& v : d) v *= gamma;
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const double beta = memory[m].rho * dot(memory[m].y, d);
      for (std::size_t k = 0; k < dim; ++k) d[k] += (alpha[m] - beta) * memory[m].s[k];
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      for (std::size_t k = 0; k < dim; ++k) d[k] = -g[k];
      slope = -result.grad_norm * result.grad_norm;
    }
    const double step = memory.empty() ? 1.0 / result.grad_norm : 1.0;

    LineSearch search(f, options, result.x, d, result.loss, slope);
    double f_new = 0.0;
    const bool ok = search.run(step, x_new, g_new, f_new);
    result.evaluations += search.evaluations();
    if (!ok) {
      if (++failures >= 2) {
        result.stop = LbfgsStop::line_search;
        return result;
      }
      memory.clear();
      continue;
    }
    failures = 0;

    Pair pair{std::vector<double>(dim), std::vector<double>(dim), 0.0};
    for (std::size_t k = 0; k < dim; ++k) {
      pair.s[k] = x_new[k] - result.x[k];
      pair.y[k] = g_new[k] - g[k];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-10 * norm2(pair.s) * norm2(pair.y)) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }
    result.x.swap(x_new);
    g.swap(g_new);
    result.loss = f_new;
    result.grad_norm = norm2(g);
    ++result.iterations;
    if (on_iteration) on_iteration({result.iterations, result.loss, result.grad_norm, result.evaluations});
    if (result.grad_norm < options.gradient_tolerance) {
      result.stop = LbfgsStop::gradient;
      return result;
    }
  }
  result.stop = LbfgsStop::iterations;
  return result;
}

}  // namespace alphatex
