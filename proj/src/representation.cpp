#include "alphatex/representation.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace alphatex {

double rectify(Complex z, double alpha) { return std::max(0.0, rectifier_input(z, alpha)); }

Complex rectifier_decomposition_check(Complex z) {
  constexpr double pi = std::numbers::pi;
  const double r0 = rectify(z, 0.0);
  const double r1 = rectify(z, 0.5 * pi);
  const double r2 = rectify(z, pi);
  const double r3 = rectify(z, 1.5 * pi);
  return Complex(r0 - r2, 0.0) - Complex(0.0, 1.0) * (r1 - r3);
}

Complex phase_harmonic(Complex z, int k) {
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  if (k == 1) return z;
  return std::polar(r, k * std::arg(z));
}

Complex rectifier_fourier_coefficient(int k, int quadrature_points) {
  if (quadrature_points < 4 * std::abs(k) + 64) {
    throw Error("rectifier_fourier_coefficient: need at least 4|k| + 64 quadrature points");
  }
  constexpr double pi = std::numbers::pi;
  const int panels = quadrature_points;
  const double h = pi / panels;
  const double kd = k;

  // f(a) = cos(a) e^{-ika} on [-pi/2, pi/2]; zero elsewhere.
  auto f = [&](double a) { return std::cos(a) * std::polar(1.0, -kd * a); };
  Complex sum = 0.5 * (f(-0.5 * pi) + f(0.5 * pi));
  for (int i = 1; i < panels; ++i) sum += f(-0.5 * pi + i * h);
  Complex integral = h * sum;

  // Euler-Maclaurin endpoint corrections. With
  // f = (e^{i(1-k)a} + e^{-i(1+k)a}) / 2 the odd derivatives are closed form.
  auto derivative = [&](int order, double a) {
    const Complex w1(0.0, 1.0 - kd), w2(0.0, -(1.0 + kd));
    return 0.5 * (std::pow(w1, order) * std::exp(w1 * a) + std::pow(w2, order) * std::exp(w2 * a));
  };
  static constexpr std::array<double, 6> bernoulli{1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                                   -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
  double h_power = 1.0;
  double factorial = 1.0;
  for (int m = 1; m <= static_cast<int>(bernoulli.size()); ++m) {
    h_power *= h * h;
    factorial *= (2.0 * m - 1.0) * (2.0 * m);
    const int order = 2 * m - 1;
    integral -= bernoulli[m - 1] * h_power / factorial *
                (derivative(order, 0.5 * pi) - derivative(order, -0.5 * pi));
  }
  return integral / (2.0 * pi);
}

std::vector<double> phase_grid(int count) {
  if (count < 1) throw Error("phase grid needs at least one phase");
  std::vector<double> out(count);
  for (int a = 0; a < count; ++a) out[a] = 2.0 * std::numbers::pi * a / count;
  return out;
}

Gamma PlaneLayout::gamma(int index) const {
  Gamma g;
  g.alpha = index % alphas;
  index /= alphas;
  g.theta = index % orientations;
  index /= orientations;
  g.j = index % scales;
  g.c = index / scales;
  return g;
}

int window_margin(Boundary boundary, int level) {
  return boundary == Boundary::periodic ? 0 : (1 << level);
}

double region_mean(std::span<const double> plane, int n, Boundary boundary, int level) {
  const int m = window_margin(boundary, level);
  if (n - 2 * m <= 0) throw Error("averaging window is empty at this scale");
  double acc = 0.0;
  for (int y = m; y < n - m; ++y) {
    const double* row = plane.data() + static_cast<std::size_t>(y) * n;
    double row_acc = 0.0;
    for (int x = m; x < n - m; ++x) row_acc += row[x];
    acc += row_acc;
  }
  const double side = n - 2 * m;
  return acc / (side * side);
}

RectifiedStack rectify_coefficients(std::span<const WaveletCoefficients> coeffs, int alpha_count,
                                    Boundary boundary, const std::optional<PlaneMeans>& means) {
  if (coeffs.empty()) throw Error("no channels to rectify");
  RectifiedStack stack;
  stack.n = coeffs[0].n;
  stack.boundary = boundary;
  stack.layout = {coeffs[0].scales, coeffs[0].orientations, alpha_count,
                  static_cast<int>(coeffs.size())};
  const auto alphas = phase_grid(alpha_count);
  const std::size_t np = static_cast<std::size_t>(stack.n) * stack.n;
  stack.planes.resize(stack.layout.count());
  for (int p = 0; p < stack.layout.count(); ++p) {
    const Gamma g = stack.layout.gamma(p);
    const auto& wc = coeffs[g.c];
    if (wc.n != stack.n || wc.scales != stack.layout.scales ||
        wc.orientations != stack.layout.orientations) {
      throw Error("channel coefficients have inconsistent layouts");
    }
    const auto& z = wc.at(g.j, g.theta);
    const double ca = std::cos(alphas[g.alpha]), sa = std::sin(alphas[g.alpha]);
    auto& plane = stack.planes[p];
    plane.resize(np);
    for (std::size_t i = 0; i < np; ++i) plane[i] = std::max(0.0, ca * z[i].real() - sa * z[i].imag());
  }

  const int levels = stack.layout.scales;
  if (means) {
    if (means->planes() != stack.layout.count() || means->levels() != levels) {
      throw Error("supplied means do not match the representation layout");
    }
    stack.means = *means;
  } else {
    stack.means = PlaneMeans(stack.layout.count(), levels);
    for (int p = 0; p < stack.layout.count(); ++p) {
      for (int level = 0; level < levels; ++level) {
        stack.means.at(p, level) = boundary == Boundary::periodic && level > 0
                                       ? stack.means.at(p, 0)
                                       : region_mean(stack.planes[p], stack.n, boundary, level);
      }
    }
  }
  return stack;
}

RectifiedStack compute_representation(std::span<const ImagePlane> channels, const FilterBank& bank,
                                      int alpha_count, Boundary boundary,
                                      const std::optional<PlaneMeans>& means) {
  std::vector<WaveletCoefficients> coeffs;
  coeffs.reserve(channels.size());
  for (const auto& c : channels) coeffs.push_back(wavelet_transform(c, bank));
  return rectify_coefficients(coeffs, alpha_count, boundary, means);
}

}  // namespace alphatex
