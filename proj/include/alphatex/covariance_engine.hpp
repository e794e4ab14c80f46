#pragma once

#include <span>
#include <vector>

#include "alphatex/representation.hpp"
#include "alphatex/statistics.hpp"

namespace alphatex {

/// Evaluates a StatisticsVector and its reverse-mode derivative with respect
/// to the rectified planes and the real low-pass planes.
///
/// Entries are grouped by plane pair so each pair's centered planes are
/// touched once for all of its shifts. Every spatial sum runs row by row in
/// raster order, so values do not depend on `jobs`.
class CovarianceEngine {
 public:
  CovarianceEngine(const IndexSet& set, int n, Boundary boundary);

  std::size_t statistic_count() const { return mean_count_ + entry_count_ + lowpass_count_; }
  std::size_t mean_count() const { return mean_count_; }
  std::size_t covariance_count() const { return entry_count_; }
  std::size_t lowpass_count() const { return lowpass_count_; }

  /// Fills `out` (size statistic_count()). `lowpass` holds one real plane per
  /// channel. Keeps the centered planes for a following backward().
  void forward(const RectifiedStack& stack, std::span<const std::vector<double>> lowpass,
               std::span<double> out, int jobs = 1);

  /// Given dL/dstat, writes dL/dplane for every rectified plane and every
  /// low-pass plane. Must follow forward() on the same inputs.
  void backward(std::span<const double> dstat, std::vector<std::vector<double>>& grad_planes,
                std::vector<std::vector<double>>& grad_lowpass, int jobs = 1) const;

 private:
  struct Segment {
    int x;
    int xs;
    int len;
  };
  struct ShiftPlan {
    std::vector<std::pair<int, int>> rows;  // (y, source y)
    std::vector<Segment> segments;          // same for every row
  };
  struct Term {
    std::size_t out;  // position in the statistics vector
    int plan;
  };
  struct Pair {
    int first;   // engine plane index
    int second;
    int level;
    std::vector<Term> terms;
  };
  struct Contribution {
    int pair;
    bool as_first;
  };

  int plan_for(int level, int shift_index);
  double scale_for(int level) const;
  int centered_slot(int plane, int level) const { return plane * (levels_ + 1) + level; }

  int n_ = 0;
  Boundary boundary_;
  int levels_ = 0;  // J
  int rectified_count_ = 0;
  int lowpass_planes_ = 0;
  std::size_t mean_count_ = 0;
  std::size_t entry_count_ = 0;
  std::size_t lowpass_count_ = 0;
  std::vector<int> mean_level_;  // per rectified plane
  std::vector<Shift> shifts_;
  std::vector<ShiftPlan> plans_;
  std::vector<int> plan_lookup_;  // (level, shift) -> plan or -1
  std::vector<Pair> pairs_;
  std::vector<std::vector<Contribution>> contributions_;  // per engine plane
  std::vector<int> centered_needed_;
  std::vector<std::vector<double>> centered_;
};

}  // namespace alphatex
