#pragma once

#include <complex>
#include <span>
#include <vector>

namespace alphatex {

using Complex = std::complex<double>;
using ComplexPlane = std::vector<Complex>;

/// Unnormalized 2-D DFT on an n x n periodic grid, backed by FFTW.
///
/// Plans are created once per side length with FFTW_ESTIMATE (deterministic,
/// no timing-based planner decisions) and shared; execution is thread-safe.
class Fft2d {
 public:
  explicit Fft2d(int n);

  int size() const { return n_; }

  /// out(w) = sum_u in(u) exp(-2 pi i w.u / n). In-place allowed.
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  /// out(u) = (1/n^2) sum_w in(w) exp(+2 pi i w.u / n). In-place allowed.
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

  ComplexPlane forward_real(std::span<const double> in) const;

 private:
  struct Plans;
  int n_;
  const Plans* plans_;
};

}  // namespace alphatex
