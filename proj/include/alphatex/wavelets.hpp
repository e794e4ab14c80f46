#pragma once

#include <string>
#include <vector>

#include "alphatex/fft.hpp"
#include "alphatex/image.hpp"

namespace alphatex {

enum class WaveletFamily { morlet };

std::string to_string(WaveletFamily f);
WaveletFamily parse_wavelet_family(const std::string& name);

/// Parameters of the Morlet mother wavelet
///   psi(u) = (exp(i xi u_1) - beta) exp(-(u_1^2 + slant^2 u_2^2) / (2 sigma^2)).
struct MorletParameters {
  double xi = 0.75 * 3.14159265358979323846;
  double sigma = 0.8;
  /// Envelope aspect ratio; <= 0 selects the default 4 / L.
  double slant = 0.0;
};

/// Oriented band-pass filters psi_{j,theta} (j < J, theta = l pi / L) plus the
/// Gaussian low-pass phi_J, sampled on the periodic n x n grid.
///
/// Filters are built in space (centered grid, periodized onto the torus), then
/// Fourier transformed. Every band-pass filter has exactly zero mean and unit
/// L1 norm; the low-pass has unit DC gain.
class FilterBank {
 public:
  int size() const { return n_; }
  int scales() const { return scales_; }
  int orientations() const { return orientations_; }
  WaveletFamily family() const { return family_; }
  int band_count() const { return scales_ * orientations_; }

  int band_index(int j, int theta) const { return j * orientations_ + theta; }
  double angle(int theta) const;

  const ComplexPlane& band_pass_hat(int j, int theta) const { return band_hat_[band_index(j, theta)]; }
  const ComplexPlane& band_pass_spatial(int j, int theta) const {
    return band_space_[band_index(j, theta)];
  }
  const ComplexPlane& low_pass_hat() const { return low_hat_; }
  const ComplexPlane& low_pass_spatial() const { return low_space_; }

  const Fft2d& fft() const { return fft_; }

 private:
  friend FilterBank build_filter_bank(int, int, int, WaveletFamily, const MorletParameters&);
  FilterBank(int n) : fft_(n) {}

  int n_ = 0;
  int scales_ = 0;
  int orientations_ = 0;
  WaveletFamily family_ = WaveletFamily::morlet;
  std::vector<ComplexPlane> band_hat_;
  std::vector<ComplexPlane> band_space_;
  ComplexPlane low_hat_;
  ComplexPlane low_space_;
  Fft2d fft_;
};

/// Throws if n is not a power of two, scales < 1, orientations < 1, or
/// 2^scales > n / 4.
FilterBank build_filter_bank(int n, int scales, int orientations,
                             WaveletFamily family = WaveletFamily::morlet,
                             const MorletParameters& params = {});

/// x * psi_{j,theta} for every band plus x * phi_J.
struct WaveletCoefficients {
  int n = 0;
  int scales = 0;
  int orientations = 0;
  std::vector<ComplexPlane> band;  // indexed by FilterBank::band_index
  ComplexPlane low;

  const ComplexPlane& at(int j, int theta) const { return band[j * orientations + theta]; }
  ComplexPlane& at(int j, int theta) { return band[j * orientations + theta]; }
};

/// Circular convolution with every filter, via FFT.
WaveletCoefficients wavelet_transform(const ImagePlane& x, const FilterBank& bank);
/// Same for a raw n*n row-major buffer (values are not checked for finiteness).
WaveletCoefficients wavelet_transform(std::span<const double> x, const FilterBank& bank);

/// Adjoint of wavelet_transform for real images under Re<a, b>:
/// Re<W x, y> == <x, W^* y> for all real x.
ImagePlane adjoint_wavelet_transform(const WaveletCoefficients& coeffs, const FilterBank& bank);

/// Littlewood-Paley sum A(w) = sum (|psi(w)|^2 + |psi(-w)|^2) / 2 + |phi(w)|^2 on the grid.
std::vector<double> littlewood_paley_sum(const FilterBank& bank);

}  // namespace alphatex
