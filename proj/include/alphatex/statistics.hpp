#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alphatex/image.hpp"
#include "alphatex/representation.hpp"
#include "alphatex/wavelets.hpp"

namespace alphatex {

/// Model variants: small, intermediate, large, color, reduced color.
enum class Variant { S, I, L, C, C_reduced };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);
inline bool is_color_variant(Variant v) { return v == Variant::C || v == Variant::C_reduced; }

struct Shift {
  int dx = 0;
  int dy = 0;
  auto operator<=>(const Shift&) const = default;
};

/// {0} U round(2^j (cos t, sin t)), 0 <= j < J, t in (pi/L){0..2L-1}, with
/// rounding collisions removed. shifts[0] is always (0, 0).
struct ShiftSet {
  std::vector<Shift> shifts;
  std::size_t size() const { return shifts.size(); }
  /// Index of a shift, or -1.
  int find(Shift s) const;
};

ShiftSet build_shift_set(int scales, int orientations);

struct CovarianceEntry {
  Gamma first;
  Gamma second;
  int shift = 0;  // index into ShiftSet
  bool operator==(const CovarianceEntry&) const = default;
};

struct LowPassEntry {
  int c = 0;
  int c2 = 0;
  int shift = 0;
  bool operator==(const LowPassEntry&) const = default;
};

/// The set of covariances that define a model.
struct IndexSet {
  Variant variant = Variant::I;
  PlaneLayout layout;
  ShiftSet shifts;
  std::vector<CovarianceEntry> entries;
  std::vector<LowPassEntry> lowpass;
};

/// Whether a triple is admitted by the variant's row of the index table
/// (scale, angle, phase and shift constraints). Does not check canonical order.
bool is_legal_entry(Variant variant, const PlaneLayout& layout, const ShiftSet& shifts,
                    const CovarianceEntry& e);

/// Whether a legal triple survives the canonical dedup: j' >= j, and for
/// j = j', tau = 0 the lexicographically smaller (theta, alpha, c) comes first
/// whenever the mirrored triple is also legal.
bool is_canonical_entry(Variant variant, const PlaneLayout& layout, const ShiftSet& shifts,
                        const CovarianceEntry& e);

/// Throws if any entry is illegal or non-canonical.
void validate_index_set(const IndexSet& set);

IndexSet build_index_set(Variant variant, int scales, int orientations, int alphas);

/// Position descriptor in a StatisticsVector.
struct StatisticDescriptor {
  enum class Kind { mean, covariance, lowpass };
  Kind kind = Kind::covariance;
  Gamma first;
  Gamma second;
  Shift tau;
  bool operator==(const StatisticDescriptor&) const = default;
};

/// [first-order means | covariances | low-pass covariances].
struct StatisticsVector {
  std::vector<double> values;
  std::size_t mean_count = 0;
  std::size_t covariance_count = 0;
  std::size_t lowpass_count = 0;
  std::uint64_t layout_hash = 0;

  std::size_t size() const { return values.size(); }
};

std::vector<StatisticDescriptor> describe(const IndexSet& set);
std::uint64_t layout_hash(const IndexSet& set);

/// Observation-derived centering means for every rectified plane.
PlaneMeans observation_means(std::span<const ImagePlane> channels, const FilterBank& bank,
                             const IndexSet& set, Boundary boundary);

/// Covariance statistics of x. If `means` is empty they are taken from x.
StatisticsVector compute_statistics(std::span<const ImagePlane> channels, const FilterBank& bank,
                                    const IndexSet& set, const std::optional<PlaneMeans>& means,
                                    Boundary boundary, int jobs = 1);

/// Euclidean distance; throws on layout mismatch.
double statistics_distance(const StatisticsVector& a, const StatisticsVector& b);
double norm(const StatisticsVector& a);

/// Closed-form upper bound on the number of second-order statistics (no
/// low-pass or first-order terms).
std::int64_t count_alpha_statistics(Variant variant, int scales, int orientations, int alphas,
                                    int shift_count);

struct CountCategory {
  std::string name;
  std::int64_t count = 0;
  bool software_only = false;
};

struct PsCount {
  std::vector<CountCategory> categories;
  std::int64_t total = 0;
  /// Total without the categories only present in the reference software.
  std::int64_t published_count = 0;
};

/// Portilla-Simoncelli statistic counts for a square shift window of side 2 delta + 1.
PsCount count_ps_statistics(bool color, int scales, int orientations, int delta);

}  // namespace alphatex
