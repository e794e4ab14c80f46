#include "alphatex/covariance_engine.hpp"

#include <map>

#include "alphatex/parallel.hpp"

namespace alphatex {

namespace {

int wrap(int v, int n) {
  v %= n;
  return v < 0 ? v + n : v;
}

}  // namespace

CovarianceEngine::CovarianceEngine(const IndexSet& set, int n, Boundary boundary)
    : n_(n), boundary_(boundary), levels_(set.layout.scales) {
  const PlaneLayout& layout = set.layout;
  if (boundary == Boundary::windowed && n <= (2 << levels_) + 1) {
    throw Error("windowed statistics need n > 2^(J+1) + 1");
  }
  rectified_count_ = layout.count();
  lowpass_planes_ = layout.channels;
  mean_count_ = static_cast<std::size_t>(rectified_count_);
  entry_count_ = set.entries.size();
  lowpass_count_ = set.lowpass.size();
  shifts_ = set.shifts.shifts;
  plan_lookup_.assign(static_cast<std::size_t>(levels_ + 1) * shifts_.size(), -1);

  mean_level_.resize(rectified_count_);
  for (int p = 0; p < rectified_count_; ++p) mean_level_[p] = layout.gamma(p).j;

  auto effective = [&](int level) { return boundary_ == Boundary::periodic ? 0 : level; };

  std::map<std::pair<int, int>, int> pair_index;
  auto add_term = [&](int first, int second, int level, std::size_t out, int shift) {
    if (shift < 0 || shift >= static_cast<int>(shifts_.size())) throw Error("shift index out of range");
    const auto key = std::pair{first, second};
    auto it = pair_index.find(key);
    if (it == pair_index.end()) {
      it = pair_index.emplace(key, static_cast<int>(pairs_.size())).first;
      pairs_.push_back({first, second, level, {}});
    }
    pairs_[it->second].terms.push_back({out, plan_for(level, shift)});
  };

  for (std::size_t e = 0; e < set.entries.size(); ++e) {
    const auto& entry = set.entries[e];
    if (!layout.contains(entry.first) || !layout.contains(entry.second)) {
      throw Error("index set entry outside the plane layout");
    }
    const int level = effective(std::max(entry.first.j, entry.second.j));
    add_term(layout.index(entry.first), layout.index(entry.second), level, mean_count_ + e,
             entry.shift);
  }
  for (std::size_t l = 0; l < set.lowpass.size(); ++l) {
    const auto& entry = set.lowpass[l];
    if (entry.c < 0 || entry.c >= lowpass_planes_ || entry.c2 < 0 || entry.c2 >= lowpass_planes_) {
      throw Error("low-pass entry channel out of range");
    }
    add_term(rectified_count_ + entry.c, rectified_count_ + entry.c2, effective(levels_),
             mean_count_ + entry_count_ + l, entry.shift);
  }

  const int planes = rectified_count_ + lowpass_planes_;
  contributions_.resize(planes);
  std::vector<char> needed(static_cast<std::size_t>(planes) * (levels_ + 1), 0);
  for (int k = 0; k < static_cast<int>(pairs_.size()); ++k) {
    const Pair& pair = pairs_[k];
    contributions_[pair.first].push_back({k, true});
    contributions_[pair.second].push_back({k, false});
    needed[centered_slot(pair.first, pair.level)] = 1;
    needed[centered_slot(pair.second, pair.level)] = 1;
  }
  for (std::size_t s = 0; s < needed.size(); ++s)
    if (needed[s]) centered_needed_.push_back(static_cast<int>(s));
  centered_.resize(needed.size());
}

int CovarianceEngine::plan_for(int level, int shift_index) {
  int& slot = plan_lookup_[static_cast<std::size_t>(level) * shifts_.size() + shift_index];
  if (slot >= 0) return slot;
  const int m = window_margin(boundary_, level);
  const Shift s = shifts_[shift_index];
  ShiftPlan plan;
  for (int y = m; y < n_ - m; ++y) {
    const int ys = wrap(y - s.dy, n_);
    if (ys >= m && ys < n_ - m) plan.rows.emplace_back(y, ys);
  }
  for (int x = m; x < n_ - m; ++x) {
    const int xs = wrap(x - s.dx, n_);
    if (xs < m || xs >= n_ - m) continue;
    if (!plan.segments.empty()) {
      Segment& last = plan.segments.back();
      if (last.x + last.len == x && last.xs + last.len == xs) {
        ++last.len;
        continue;
      }
    }
    plan.segments.push_back({x, xs, 1});
  }
  if (plan.rows.empty() || plan.segments.empty()) {
    throw Error("shift leaves no valid pixels inside the averaging window");
  }
  plans_.push_back(std::move(plan));
  slot = static_cast<int>(plans_.size()) - 1;
  return slot;
}

double CovarianceEngine::scale_for(int level) const {
  const double side = n_ - 2 * window_margin(boundary_, level);
  return 1.0 / (side * side);
}

void CovarianceEngine::forward(const RectifiedStack& stack,
                               std::span<const std::vector<double>> lowpass, std::span<double> out,
                               int jobs) {
  if (stack.n != n_ || static_cast<int>(stack.planes.size()) != rectified_count_) {
    throw Error("rectified stack does not match the index set");
  }
  if (static_cast<int>(lowpass.size()) != lowpass_planes_) throw Error("wrong number of low-pass planes");
  if (out.size() != statistic_count()) throw Error("statistics buffer has the wrong size");
  if (stack.means.planes() != rectified_count_ || stack.means.levels() != levels_) {
    throw Error("plane means do not match the index set");
  }
  const std::size_t np = static_cast<std::size_t>(n_) * n_;

  parallel_for(centered_needed_.size(), jobs, [&](std::size_t k) {
    const int slot = centered_needed_[k];
    const int plane = slot / (levels_ + 1);
    const int level = slot % (levels_ + 1);
    const bool rectified = plane < rectified_count_;
    const auto& src = rectified ? stack.planes[plane] : lowpass[plane - rectified_count_];
    if (src.size() != np) throw Error("plane has the wrong size");
    const double mu = rectified ? stack.means.at(plane, level) : 0.0;
    auto& dst = centered_[slot];
    dst.resize(np);
    for (std::size_t i = 0; i < np; ++i) dst[i] = src[i] - mu;
  });

  for (int p = 0; p < rectified_count_; ++p) {
    out[p] = region_mean(stack.planes[p], n_, boundary_, mean_level_[p]);
  }

  parallel_for(pairs_.size(), jobs, [&](std::size_t k) {
    const Pair& pair = pairs_[k];
    const double* a = centered_[centered_slot(pair.first, pair.level)].data();
    const double* b = centered_[centered_slot(pair.second, pair.level)].data();
    const double scale = scale_for(pair.level);
    for (const Term& term : pair.terms) {
      const ShiftPlan& plan = plans_[term.plan];
      double acc = 0.0;
      for (const auto& [y, ys] : plan.rows) {
        const double* ar = a + static_cast<std::size_t>(y) * n_;
        const double* br = b + static_cast<std::size_t>(ys) * n_;
        double row = 0.0;
        for (const Segment& s : plan.segments) {
          const double* pa = ar + s.x;
          const double* pb = br + s.xs;
#pragma omp simd reduction(+ : row)
          for (int i = 0; i < s.len; ++i) row += pa[i] * pb[i];
        }
        acc += row;
      }
      out[term.out] = acc * scale;
    }
  });
}

void CovarianceEngine::backward(std::span<const double> dstat,
                                std::vector<std::vector<double>>& grad_planes,
                                std::vector<std::vector<double>>& grad_lowpass, int jobs) const {
  if (dstat.size() != statistic_count()) throw Error("gradient buffer has the wrong size");
  const std::size_t np = static_cast<std::size_t>(n_) * n_;
  grad_planes.resize(rectified_count_);
  grad_lowpass.resize(lowpass_planes_);

  parallel_for(contributions_.size(), jobs, [&](std::size_t e) {
    const int plane = static_cast<int>(e);
    auto& g = plane < rectified_count_ ? grad_planes[plane] : grad_lowpass[plane - rectified_count_];
    g.assign(np, 0.0);

    if (plane < rectified_count_ && dstat[plane] != 0.0) {
      const int m = window_margin(boundary_, mean_level_[plane]);
      const double w = dstat[plane] * scale_for(mean_level_[plane]);
      for (int y = m; y < n_ - m; ++y) {
        double* row = g.data() + static_cast<std::size_t>(y) * n_;
        for (int x = m; x < n_ - m; ++x) row[x] += w;
      }
    }

    for (const Contribution& c : contributions_[plane]) {
      const Pair& pair = pairs_[c.pair];
      const double scale = scale_for(pair.level);
      // The partner plane, read at the shifted location (as_first) or at u.
      const double* other =
          centered_[centered_slot(c.as_first ? pair.second : pair.first, pair.level)].data();
      for (const Term& term : pair.terms) {
        const double w = dstat[term.out] * scale;
        if (w == 0.0) continue;
        const ShiftPlan& plan = plans_[term.plan];
        for (const auto& [y, ys] : plan.rows) {
          for (const Segment& s : plan.segments) {
            double* dst;
            const double* src;
            if (c.as_first) {
              dst = g.data() + static_cast<std::size_t>(y) * n_ + s.x;
              src = other + static_cast<std::size_t>(ys) * n_ + s.xs;
            } else {
              dst = g.data() + static_cast<std::size_t>(ys) * n_ + s.xs;
              src = other + static_cast<std::size_t>(y) * n_ + s.x;
            }
#pragma omp simd
            for (int i = 0; i < s.len; ++i) dst[i] += w * src[i];
          }
        }
      }
    }
  });
}

}  // namespace alphatex
