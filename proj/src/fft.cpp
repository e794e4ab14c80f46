#include "alphatex/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "alphatex/image.hpp"

namespace alphatex {

struct Fft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
  if (!is_power_of_two(n)) throw Error("FFT size must be a power of two");
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<Plans>();
    const std::size_t np = static_cast<std::size_t>(n) * n;
    ComplexPlane buf(np);
    // In-place plans only; execution copies into the output buffer first.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->forward = fftw_plan_dft_2d(n, n, as_fftw(buf.data()), as_fftw(buf.data()), FFTW_FORWARD, flags);
    slot->inverse = fftw_plan_dft_2d(n, n, as_fftw(buf.data()), as_fftw(buf.data()), FFTW_BACKWARD, flags);
    if (!slot->forward || !slot->inverse) {
      throw Error("FFTW planning failed");
    }
  }
  plans_ = slot.get();
}

void Fft2d::forward(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t np = static_cast<std::size_t>(n_) * n_;
  if (in.size() != np || out.size() != np) throw Error("FFT buffer size mismatch");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_dft(plans_->forward, as_fftw(out.data()), as_fftw(out.data()));
}

void Fft2d::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t np = static_cast<std::size_t>(n_) * n_;
  if (in.size() != np || out.size() != np) throw Error("FFT buffer size mismatch");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_dft(plans_->inverse, as_fftw(out.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(np);
  for (auto& v : out) v *= scale;
}

ComplexPlane Fft2d::forward_real(std::span<const double> in) const {
  ComplexPlane out(in.begin(), in.end());
  forward(out, out);
  return out;
}

}  // namespace alphatex
