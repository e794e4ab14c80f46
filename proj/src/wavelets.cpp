#include "alphatex/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace alphatex {

std::string to_string(WaveletFamily f) {
  switch (f) {
    case WaveletFamily::morlet: return "morlet";
  }
  return "unknown";
}

WaveletFamily parse_wavelet_family(const std::string& name) {
  if (name == "morlet") return WaveletFamily::morlet;
  throw Error("unsupported wavelet family: " + name + " (available: morlet)");
}

double FilterBank::angle(int theta) const {
  return std::numbers::pi * theta / orientations_;
}

namespace {

// Exponents below this are treated as zero contribution.
constexpr double kMaxExponent = 60.0;

/// Sum f over every lattice point congruent to each grid pixel, within a box
/// that covers `extent` pixels around the origin.
template <class F>
ComplexPlane periodize(int n, double extent, F&& f) {
  const int periods = static_cast<int>(std::ceil(extent / n)) + 1;
  ComplexPlane out(static_cast<std::size_t>(n) * n);
  for (int b = -periods; b <= periods; ++b) {
    for (int y = 0; y < n; ++y) {
      const double u2 = y + static_cast<double>(b) * n;
      if (std::abs(u2) > extent + n) continue;
      for (int a = -periods; a <= periods; ++a) {
        for (int x = 0; x < n; ++x) {
          const double u1 = x + static_cast<double>(a) * n;
          out[static_cast<std::size_t>(y) * n + x] += f(u1, u2);
        }
      }
    }
  }
  return out;
}

ComplexPlane morlet_spatial(int n, int j, double theta, const MorletParameters& p, int orientations) {
  const double slant = p.slant > 0.0 ? p.slant : 4.0 / orientations;
  const double dilation = std::ldexp(1.0, j);
  const double c = std::cos(theta), s = std::sin(theta);
  const double inv2s2 = 1.0 / (2.0 * p.sigma * p.sigma);
  const double extent = 8.0 * p.sigma * dilation * std::max(1.0, 1.0 / slant);

  // Rotated, dilated coordinates v = 2^-j r_theta u.
  auto coords = [&](double u1, double u2) {
    const double v1 = (c * u1 - s * u2) / dilation;
    const double v2 = (s * u1 + c * u2) / dilation;
    return std::pair{v1, v2};
  };
  auto envelope = [&](double u1, double u2) -> Complex {
    auto [v1, v2] = coords(u1, u2);
    const double e = (v1 * v1 + slant * slant * v2 * v2) * inv2s2;
    return e > kMaxExponent ? 0.0 : std::exp(-e);
  };
  auto gabor = [&](double u1, double u2) -> Complex {
    auto [v1, v2] = coords(u1, u2);
    const double e = (v1 * v1 + slant * slant * v2 * v2) * inv2s2;
    if (e > kMaxExponent) return 0.0;
    return std::polar(std::exp(-e), p.xi * v1);
  };

  ComplexPlane g = periodize(n, extent, gabor);
  ComplexPlane env = periodize(n, extent, envelope);
  Complex sum_g = 0.0, sum_env = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum_g += g[i];
    sum_env += env[i];
  }
  // beta cancels the mean of the discretized filter.
  const Complex beta = sum_g / sum_env;
  ComplexPlane psi(g.size());
  Complex mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    psi[i] = g[i] - beta * env[i];
    mean += psi[i];
  }
  mean /= static_cast<double>(psi.size());
  double l1 = 0.0;
  for (auto& v : psi) {
    v -= mean;
    l1 += std::abs(v);
  }
  for (auto& v : psi) v /= l1;
  return psi;
}

ComplexPlane gaussian_spatial(int n, double sigma) {
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  ComplexPlane phi = periodize(n, 8.0 * sigma, [&](double u1, double u2) -> Complex {
    const double e = (u1 * u1 + u2 * u2) * inv2s2;
    return e > kMaxExponent ? 0.0 : std::exp(-e);
  });
  Complex total = 0.0;
  for (const auto& v : phi) total += v;
  for (auto& v : phi) v /= total;
  return phi;
}

void check_same_size(int a, int b) {
  if (a != b) throw Error("image size does not match filter bank size");
}

}  // namespace

FilterBank build_filter_bank(int n, int scales, int orientations, WaveletFamily family,
                             const MorletParameters& params) {
  if (n < 8 || !is_power_of_two(n)) throw Error("filter bank size must be a power of two >= 8");
  if (scales < 1) throw Error("number of scales must be >= 1");
  if (orientations < 1) throw Error("number of orientations must be >= 1");
  if ((1 << scales) > n / 4) {
    throw Error("scale too large for grid: 2^J = " + std::to_string(1 << scales) +
                " exceeds n/4 = " + std::to_string(n / 4));
  }

  FilterBank bank(n);
  bank.n_ = n;
  bank.scales_ = scales;
  bank.orientations_ = orientations;
  bank.family_ = family;
  for (int j = 0; j < scales; ++j) {
    for (int t = 0; t < orientations; ++t) {
      ComplexPlane psi = morlet_spatial(n, j, bank.angle(t), params, orientations);
      ComplexPlane hat(psi.size());
      bank.fft_.forward(psi, hat);
      hat[0] = 0.0;
      bank.band_space_.push_back(std::move(psi));
      bank.band_hat_.push_back(std::move(hat));
    }
  }
  bank.low_space_ = gaussian_spatial(n, params.sigma * std::ldexp(1.0, scales));
  bank.low_hat_.resize(bank.low_space_.size());
  bank.fft_.forward(bank.low_space_, bank.low_hat_);
  return bank;
}

WaveletCoefficients wavelet_transform(const ImagePlane& x, const FilterBank& bank) {
  check_same_size(x.size(), bank.size());
  return wavelet_transform(x.data(), bank);
}

WaveletCoefficients wavelet_transform(std::span<const double> x, const FilterBank& bank) {
  if (x.size() != static_cast<std::size_t>(bank.size()) * bank.size()) {
    throw Error("image size does not match filter bank size");
  }
  const auto& fft = bank.fft();
  const ComplexPlane xhat = fft.forward_real(x);

  WaveletCoefficients out;
  out.n = bank.size();
  out.scales = bank.scales();
  out.orientations = bank.orientations();
  out.band.resize(bank.band_count());
  auto filter = [&](const ComplexPlane& h, ComplexPlane& dst) {
    dst.resize(xhat.size());
    for (std::size_t i = 0; i < xhat.size(); ++i) dst[i] = xhat[i] * h[i];
    fft.inverse(dst, dst);
  };
  for (int j = 0; j < bank.scales(); ++j)
    for (int t = 0; t < bank.orientations(); ++t) filter(bank.band_pass_hat(j, t), out.at(j, t));
  filter(bank.low_pass_hat(), out.low);
  return out;
}

ImagePlane adjoint_wavelet_transform(const WaveletCoefficients& coeffs, const FilterBank& bank) {
  check_same_size(coeffs.n, bank.size());
  if (coeffs.scales != bank.scales() || coeffs.orientations != bank.orientations() ||
      coeffs.band.size() != static_cast<std::size_t>(bank.band_count())) {
    throw Error("coefficients do not match filter bank layout");
  }
  const auto& fft = bank.fft();
  const std::size_t np = static_cast<std::size_t>(bank.size()) * bank.size();
  ComplexPlane acc(np), tmp(np);
  auto accumulate = [&](const ComplexPlane& y, const ComplexPlane& h) {
    if (y.size() != np) throw Error("coefficient plane size mismatch");
    fft.forward(y, tmp);
    for (std::size_t i = 0; i < np; ++i) acc[i] += tmp[i] * std::conj(h[i]);
  };
  for (int j = 0; j < bank.scales(); ++j)
    for (int t = 0; t < bank.orientations(); ++t) accumulate(coeffs.at(j, t), bank.band_pass_hat(j, t));
  accumulate(coeffs.low, bank.low_pass_hat());
  fft.inverse(acc, acc);
  ImagePlane out(bank.size());
  for (std::size_t i = 0; i < np; ++i) out.data()[i] = acc[i].real();
  return out;
}

std::vector<double> littlewood_paley_sum(const FilterBank& bank) {
  const int n = bank.size();
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      const std::size_t i = static_cast<std::size_t>(ky) * n + kx;
      const std::size_t m = static_cast<std::size_t>((n - ky) % n) * n + (n - kx) % n;
      double v = std::norm(bank.low_pass_hat()[i]);
      for (int j = 0; j < bank.scales(); ++j)
        for (int t = 0; t < bank.orientations(); ++t) {
          const auto& h = bank.band_pass_hat(j, t);
          v += 0.5 * (std::norm(h[i]) + std::norm(h[m]));
        }
      a[i] = v;
    }
  }
  return a;
}

}  // namespace alphatex
