#pragma once

#include <optional>
#include <vector>

#include "alphatex/fft.hpp"
#include "alphatex/image.hpp"
#include "alphatex/wavelets.hpp"

namespace alphatex {

/// Phase-shifted rectifier: max(0, Re(e^{i alpha} z)).
inline double rectifier_input(Complex z, double alpha) {
  return std::cos(alpha) * z.real() - std::sin(alpha) * z.imag();
}
double rectify(Complex z, double alpha);

/// rho_0(z) - rho_pi(z) - i (rho_{pi/2}(z) - rho_{3pi/2}(z)); equals z.
Complex rectifier_decomposition_check(Complex z);

/// [z]^k = |z| e^{i k arg z}, with arg 0 = 0.
Complex phase_harmonic(Complex z, int k);

/// Fourier coefficient c_k = (1/2pi) int max(0, cos a) e^{-ika} da.
///
/// The integrand vanishes off [-pi/2, pi/2], so the integral is taken over
/// that interval by the trapezoidal rule with Euler-Maclaurin endpoint
/// corrections; `quadrature_points` (>= 4|k| + 64) is the panel count.
Complex rectifier_fourier_coefficient(int k, int quadrature_points);

/// Uniform phase grid (2 pi / A) {0, ..., A-1}.
std::vector<double> phase_grid(int count);

/// Index of a rectified plane: gamma = (j, theta, alpha, c).
struct Gamma {
  int j = 0;
  int theta = 0;
  int alpha = 0;
  int c = 0;
  auto operator<=>(const Gamma&) const = default;
};

/// Dense numbering of rectified planes for a given layout.
struct PlaneLayout {
  int scales = 0;
  int orientations = 0;
  int alphas = 0;
  int channels = 1;

  int count() const { return channels * scales * orientations * alphas; }
  int index(const Gamma& g) const {
    return ((g.c * scales + g.j) * orientations + g.theta) * alphas + g.alpha;
  }
  Gamma gamma(int index) const;
  bool contains(const Gamma& g) const {
    return g.j >= 0 && g.j < scales && g.theta >= 0 && g.theta < orientations && g.alpha >= 0 &&
           g.alpha < alphas && g.c >= 0 && g.c < channels;
  }
};

/// Averaging region. Periodic: the whole torus. Windowed: the interior
/// square [2^level, n - 2^level)^2 for the given scale level.
enum class Boundary { periodic, windowed };

/// Per-plane spatial means, one value per window level 0..J-1 (all equal in
/// periodic mode).
class PlaneMeans {
 public:
  PlaneMeans() = default;
  PlaneMeans(int planes, int levels) : levels_(levels), values_(static_cast<std::size_t>(planes) * levels, 0.0) {}

  int planes() const { return levels_ == 0 ? 0 : static_cast<int>(values_.size()) / levels_; }
  int levels() const { return levels_; }
  double at(int plane, int level) const { return values_[static_cast<std::size_t>(plane) * levels_ + level]; }
  double& at(int plane, int level) { return values_[static_cast<std::size_t>(plane) * levels_ + level]; }
  bool operator==(const PlaneMeans&) const = default;

  /// All means zero; used to compare uncentered covariances.
  static PlaneMeans zeros(int planes, int levels) { return PlaneMeans(planes, levels); }

 private:
  int levels_ = 0;
  std::vector<double> values_;
};

/// Raw rectified planes rho_alpha(x^c * psi_{j,theta}) plus centering means.
/// Centering is applied when covariances are formed.
struct RectifiedStack {
  int n = 0;
  PlaneLayout layout;
  Boundary boundary = Boundary::periodic;
  std::vector<std::vector<double>> planes;  // indexed by layout.index
  PlaneMeans means;
};

/// Mean of a plane over the averaging region of `level`.
double region_mean(std::span<const double> plane, int n, Boundary boundary, int level);

/// Window margin for a level: 0 for periodic, 2^level for windowed.
int window_margin(Boundary boundary, int level);

/// Rectified representation of every channel. If `means` is empty the means
/// are computed from x itself (observation pass); otherwise they are copied.
RectifiedStack compute_representation(std::span<const ImagePlane> channels, const FilterBank& bank,
                                      int alpha_count, Boundary boundary,
                                      const std::optional<PlaneMeans>& means = std::nullopt);

/// Same, reusing precomputed wavelet coefficients (one per channel).
RectifiedStack rectify_coefficients(std::span<const WaveletCoefficients> coeffs, int alpha_count,
                                    Boundary boundary, const std::optional<PlaneMeans>& means);

}  // namespace alphatex
