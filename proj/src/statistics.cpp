#include "alphatex/statistics.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "alphatex/covariance_engine.hpp"

namespace alphatex {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::S: return "s";
    case Variant::I: return "i";
    case Variant::L: return "l";
    case Variant::C: return "c";
    case Variant::C_reduced: return "c-reduced";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  if (name == "s" || name == "S" || name == "alpha-s") return Variant::S;
  if (name == "i" || name == "I" || name == "alpha-i") return Variant::I;
  if (name == "l" || name == "L" || name == "alpha-l") return Variant::L;
  if (name == "c" || name == "C" || name == "alpha-c") return Variant::C;
  if (name == "c-reduced" || name == "C_reduced" || name == "alpha-c-reduced") return Variant::C_reduced;
  throw Error("unknown variant: " + name + " (expected s, i, l, c or c-reduced)");
}

int ShiftSet::find(Shift s) const {
  for (std::size_t i = 0; i < shifts.size(); ++i)
    if (shifts[i] == s) return static_cast<int>(i);
  return -1;
}

ShiftSet build_shift_set(int scales, int orientations) {
  if (scales < 1 || orientations < 1) throw Error("shift set needs J >= 1 and L >= 1");
  ShiftSet set;
  set.shifts.push_back({0, 0});
  for (int j = 0; j < scales; ++j) {
    const double radius = std::ldexp(1.0, j);
    for (int t = 0; t < 2 * orientations; ++t) {
      const double angle = std::numbers::pi * t / orientations;
      const Shift s{static_cast<int>(std::lround(radius * std::cos(angle))),
                    static_cast<int>(std::lround(radius * std::sin(angle)))};
      if (set.find(s) < 0) set.shifts.push_back(s);
    }
  }
  return set;
}

namespace {

int expected_channels(Variant v) { return is_color_variant(v) ? 3 : 1; }

auto dedup_key(const Gamma& g) { return std::tuple(g.theta, g.alpha, g.c); }

}  // namespace

bool is_legal_entry(Variant variant, const PlaneLayout& layout, const ShiftSet& shifts,
                    const CovarianceEntry& e) {
  if (!layout.contains(e.first) || !layout.contains(e.second)) return false;
  if (e.shift < 0 || e.shift >= static_cast<int>(shifts.size())) return false;
  if (layout.channels != expected_channels(variant)) return false;
  const bool zero_shift = shifts.shifts[e.shift] == Shift{0, 0};
  const Gamma& a = e.first;
  const Gamma& b = e.second;
  switch (variant) {
    case Variant::S:
      if (std::abs(a.j - b.j) > 1 || b.alpha != 0) return false;
      return zero_shift || (a.j == b.j && a.theta == b.theta);
    case Variant::I:
      return b.alpha == 0;
    case Variant::L:
      return true;
    case Variant::C:
      return b.alpha == 0;
    case Variant::C_reduced:
      return b.alpha == 0 && (zero_shift || a.c == b.c);
  }
  return false;
}

bool is_canonical_entry(Variant variant, const PlaneLayout& layout, const ShiftSet& shifts,
                        const CovarianceEntry& e) {
  if (e.first.j > e.second.j) return false;
  if (e.first.j < e.second.j || !(shifts.shifts[e.shift] == Shift{0, 0})) return true;
  const CovarianceEntry mirror{e.second, e.first, e.shift};
  if (!is_legal_entry(variant, layout, shifts, mirror)) return true;
  return dedup_key(e.first) <= dedup_key(e.second);
}

void validate_index_set(const IndexSet& set) {
  for (const auto& e : set.entries) {
    if (!is_legal_entry(set.variant, set.layout, set.shifts, e)) {
      throw Error("index set contains an entry not admitted by its variant");
    }
    if (!is_canonical_entry(set.variant, set.layout, set.shifts, e)) {
      throw Error("index set contains a non-canonical duplicate");
    }
  }
  for (const auto& l : set.lowpass) {
    if (l.c < 0 || l.c2 < l.c || l.c2 >= set.layout.channels || l.shift < 0 ||
        l.shift >= static_cast<int>(set.shifts.size())) {
      throw Error("invalid low-pass entry");
    }
  }
}

IndexSet build_index_set(Variant variant, int scales, int orientations, int alphas) {
  if (scales < 1 || orientations < 1 || alphas < 1) throw Error("index set needs J, L, A >= 1");
  IndexSet set;
  set.variant = variant;
  set.layout = {scales, orientations, alphas, expected_channels(variant)};
  set.shifts = build_shift_set(scales, orientations);
  const int channels = set.layout.channels;
  const int ns = static_cast<int>(set.shifts.size());

  // Grouped by plane pair, shifts innermost.
  for (int j = 0; j < scales; ++j)
    for (int j2 = j; j2 < scales; ++j2)
      for (int c = 0; c < channels; ++c)
        for (int t = 0; t < orientations; ++t)
          for (int a = 0; a < alphas; ++a)
            for (int c2 = 0; c2 < channels; ++c2)
              for (int t2 = 0; t2 < orientations; ++t2)
                for (int a2 = 0; a2 < alphas; ++a2)
                  for (int s = 0; s < ns; ++s) {
                    const CovarianceEntry e{{j, t, a, c}, {j2, t2, a2, c2}, s};
                    if (is_legal_entry(variant, set.layout, set.shifts, e) &&
                        is_canonical_entry(variant, set.layout, set.shifts, e)) {
                      set.entries.push_back(e);
                    }
                  }

  for (int c = 0; c < channels; ++c)
    for (int c2 = c; c2 < channels; ++c2)
      for (int s = 0; s < ns; ++s) {
        if (variant == Variant::C_reduced && c != c2 && s != 0) continue;
        set.lowpass.push_back({c, c2, s});
      }
  return set;
}

std::vector<StatisticDescriptor> describe(const IndexSet& set) {
  using Kind = StatisticDescriptor::Kind;
  std::vector<StatisticDescriptor> out;
  out.reserve(set.layout.count() + set.entries.size() + set.lowpass.size());
  for (int p = 0; p < set.layout.count(); ++p) {
    const Gamma g = set.layout.gamma(p);
    out.push_back({Kind::mean, g, g, {0, 0}});
  }
  for (const auto& e : set.entries) out.push_back({Kind::covariance, e.first, e.second, set.shifts.shifts[e.shift]});
  for (const auto& l : set.lowpass) {
    Gamma a{set.layout.scales, 0, 0, l.c};
    Gamma b{set.layout.scales, 0, 0, l.c2};
    out.push_back({Kind::lowpass, a, b, set.shifts.shifts[l.shift]});
  }
  return out;
}

std::uint64_t layout_hash(const IndexSet& set) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](long long v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<std::uint64_t>(v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<int>(set.variant));
  mix(set.layout.scales);
  mix(set.layout.orientations);
  mix(set.layout.alphas);
  mix(set.layout.channels);
  for (const auto& s : set.shifts.shifts) {
    mix(s.dx);
    mix(s.dy);
  }
  for (const auto& e : set.entries) {
    mix(set.layout.index(e.first));
    mix(set.layout.index(e.second));
    mix(e.shift);
  }
  for (const auto& l : set.lowpass) {
    mix(l.c);
    mix(l.c2);
    mix(l.shift);
  }
  return h;
}

namespace {

void check_inputs(std::span<const ImagePlane> channels, const FilterBank& bank, const IndexSet& set) {
  if (static_cast<int>(channels.size()) != set.layout.channels) {
    throw Error("image has " + std::to_string(channels.size()) + " channel(s), model expects " +
                std::to_string(set.layout.channels));
  }
  if (bank.scales() != set.layout.scales || bank.orientations() != set.layout.orientations) {
    throw Error("filter bank does not match the index set");
  }
  for (const auto& c : channels)
    if (c.size() != bank.size()) throw Error("image size does not match filter bank size");
}

}  // namespace

PlaneMeans observation_means(std::span<const ImagePlane> channels, const FilterBank& bank,
                             const IndexSet& set, Boundary boundary) {
  check_inputs(channels, bank, set);
  return compute_representation(channels, bank, set.layout.alphas, boundary).means;
}

StatisticsVector compute_statistics(std::span<const ImagePlane> channels, const FilterBank& bank,
                                    const IndexSet& set, const std::optional<PlaneMeans>& means,
                                    Boundary boundary, int jobs) {
  check_inputs(channels, bank, set);
  std::vector<WaveletCoefficients> coeffs;
  coeffs.reserve(channels.size());
  for (const auto& c : channels) coeffs.push_back(wavelet_transform(c, bank));
  const RectifiedStack stack = rectify_coefficients(coeffs, set.layout.alphas, boundary, means);

  std::vector<std::vector<double>> lowpass(coeffs.size());
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    lowpass[c].resize(coeffs[c].low.size());
    for (std::size_t i = 0; i < coeffs[c].low.size(); ++i) lowpass[c][i] = coeffs[c].low[i].real();
  }

  CovarianceEngine engine(set, bank.size(), boundary);
  StatisticsVector out;
  out.values.resize(engine.statistic_count());
  engine.forward(stack, lowpass, out.values, jobs);
  out.mean_count = engine.mean_count();
  out.covariance_count = engine.covariance_count();
  out.lowpass_count = engine.lowpass_count();
  out.layout_hash = layout_hash(set);
  return out;
}

double statistics_distance(const StatisticsVector& a, const StatisticsVector& b) {
  if (a.size() != b.size() || a.layout_hash != b.layout_hash || a.mean_count != b.mean_count ||
      a.covariance_count != b.covariance_count) {
    throw Error("statistics vectors have different layouts");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double norm(const StatisticsVector& a) {
  double acc = 0.0;
  for (double v : a.values) acc += v * v;
  return std::sqrt(acc);
}

std::int64_t count_alpha_statistics(Variant variant, int scales, int orientations, int alphas,
                                    int shift_count) {
  const std::int64_t J = scales, L = orientations, A = alphas, T = shift_count;
  const std::int64_t scale_pairs = J * (J + 1) / 2;
  switch (variant) {
    case Variant::S: return L * L * A * (2 * J - 1) + J * L * A * T;
    case Variant::I: return scale_pairs * L * L * A * T;
    case Variant::L: return scale_pairs * L * L * A * A * T;
    case Variant::C: return 9 * scale_pairs * L * L * A * T;
    case Variant::C_reduced: return 9 * scale_pairs * L * L * A + 3 * scale_pairs * L * L * A * (T - 1);
  }
  return 0;
}

PsCount count_ps_statistics(bool color, int scales, int orientations, int delta) {
  const std::int64_t J = scales, L = orientations;
  const std::int64_t Na = 2 * static_cast<std::int64_t>(delta) + 1;
  const std::int64_t half = (Na * Na + 1) / 2;
  PsCount out;
  if (!color) {
    out.categories = {
        {"marginal statistics of x", 6, false},
        {"marginal statistics of wavelet coefficients", 2 * (J + 1) + 1, false},
        {"raw coefficient auto-correlation", (J + 1) * half, false},
        {"coefficient magnitude statistics", J * L * half + J * L * (L - 1) / 2 + (J - 1) * L * L, false},
        {"mean of coefficient magnitudes", J * L + 2, true},
        {"cross-scale phase statistics", 2 * (J - 1) * L * L, false},
        {"real cousin cross-correlation", J * L * L, true},
    };
  } else {
    const std::int64_t L3 = 3 * L;
    out.categories = {
        {"marginal statistics of x and its PCA", 6 * 3 + 3 * 4, false},
        {"marginal statistics of wavelet coefficients", 6 * (J + 1) + 9, false},
        {"raw coefficient auto-correlation", 3 * (J + 2) * half, false},
        {"coefficient magnitude statistics", 3 * J * L * half + J * L3 * (L3 - 1) / 2 + (J - 1) * L3 * L3,
         false},
        {"mean of coefficient magnitudes", 3 * (J * L + 2), true},
        {"cross-scale phase statistics", (J - 1) * L3 * 2 * L3, false},
        {"real cousin cross-correlation", J * L3 * L3, true},
    };
  }
  for (const auto& c : out.categories) {
    out.total += c.count;
    if (!c.software_only) out.published_count += c.count;
  }
  return out;
}

}  // namespace alphatex
