#include "alphatex/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "alphatex/rng.hpp"

namespace alphatex {

namespace {

constexpr double pi = std::numbers::pi;

void check_oracle_size(int n) {
  if (n > kOracleMaxSize) throw Error("oracle inputs are limited to 32 x 32");
}

int wrap(int v, int n) {
  v %= n;
  return v < 0 ? v + n : v;
}

ImagePlane random_plane(int n, std::uint64_t seed) { return sample_gaussian_image(n, 0.0, 1.0, Seed{seed}); }

double rho(Complex z, double alpha) { return std::max(0.0, (std::polar(1.0, alpha) * z).real()); }

/// Literal windowed/periodic covariance: sum over u in the window with
/// u - tau (mod n) also in the window, divided by the window area.
double covariance_loop(const std::vector<double>& a, const std::vector<double>& b, double mu_a, double mu_b,
                       int n, int margin, Shift tau) {
  double acc = 0.0;
  for (int y = margin; y < n - margin; ++y) {
    for (int x = margin; x < n - margin; ++x) {
      const int xs = wrap(x - tau.dx, n), ys = wrap(y - tau.dy, n);
      if (xs < margin || xs >= n - margin || ys < margin || ys >= n - margin) continue;
      acc += (a[y * n + x] - mu_a) * (b[ys * n + xs] - mu_b);
    }
  }
  const double side = n - 2 * margin;
  return acc / (side * side);
}

double window_average(const std::vector<double>& a, int n, int margin) {
  double acc = 0.0;
  for (int y = margin; y < n - margin; ++y)
    for (int x = margin; x < n - margin; ++x) acc += a[y * n + x];
  const double side = n - 2 * margin;
  return acc / (side * side);
}

OracleReport finish(OracleReport r, bool use_relative) {
  const double err = use_relative ? r.max_rel_err : r.max_abs_err;
  r.passed = std::isfinite(err) && err <= r.tolerance;
  return r;
}

}  // namespace

nlohmann::json to_json(const OracleReport& r) {
  return {{"name", r.name},           {"max_abs_err", r.max_abs_err}, {"max_rel_err", r.max_rel_err},
          {"tolerance", r.tolerance}, {"passed", r.passed},           {"detail", r.detail}};
}

ComplexPlane naive_convolution(std::span<const double> x, const ComplexPlane& filter, int n) {
  check_oracle_size(n);
  const std::size_t np = static_cast<std::size_t>(n) * n;
  if (x.size() != np || filter.size() != np) throw Error("naive_convolution: size mismatch");
  ComplexPlane out(np);
  for (int uy = 0; uy < n; ++uy)
    for (int ux = 0; ux < n; ++ux) {
      Complex acc = 0.0;
      for (int vy = 0; vy < n; ++vy)
        for (int vx = 0; vx < n; ++vx)
          acc += x[wrap(uy - vy, n) * n + wrap(ux - vx, n)] * filter[vy * n + vx];
      out[uy * n + ux] = acc;
    }
  return out;
}

double naive_covariance(const RectifiedStack& stack, const CovarianceEntry& e, const ShiftSet& shifts) {
  check_oracle_size(stack.n);
  const int level = std::max(e.first.j, e.second.j);
  const int p = stack.layout.index(e.first), q = stack.layout.index(e.second);
  const int margin = stack.boundary == Boundary::periodic ? 0 : (1 << level);
  return covariance_loop(stack.planes[p], stack.planes[q], stack.means.at(p, level), stack.means.at(q, level),
                         stack.n, margin, shifts.shifts.at(e.shift));
}

std::vector<double> naive_statistics(std::span<const ImagePlane> channels, const FilterBank& bank,
                                     const IndexSet& set, const std::optional<PlaneMeans>& means,
                                     Boundary boundary) {
  const int n = bank.size();
  check_oracle_size(n);
  const PlaneLayout& layout = set.layout;
  const auto phases = phase_grid(layout.alphas);
  const int J = layout.scales;
  auto margin = [&](int level) { return boundary == Boundary::periodic ? 0 : (1 << level); };

  RectifiedStack stack;
  stack.n = n;
  stack.layout = layout;
  stack.boundary = boundary;
  stack.planes.resize(layout.count());
  std::vector<std::vector<double>> low(layout.channels);
  for (int c = 0; c < layout.channels; ++c) {
    const auto x = channels[c].data();
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < layout.orientations; ++t) {
        const ComplexPlane z = naive_convolution(x, bank.band_pass_spatial(j, t), n);
        for (int a = 0; a < layout.alphas; ++a) {
          auto& plane = stack.planes[layout.index({j, t, a, c})];
          plane.resize(z.size());
          for (std::size_t i = 0; i < z.size(); ++i) plane[i] = rho(z[i], phases[a]);
        }
      }
    const ComplexPlane l = naive_convolution(x, bank.low_pass_spatial(), n);
    for (const auto& v : l) low[c].push_back(v.real());
  }
  if (means) {
    stack.means = *means;
  } else {
    stack.means = PlaneMeans(layout.count(), J);
    for (int p = 0; p < layout.count(); ++p)
      for (int level = 0; level < J; ++level) stack.means.at(p, level) = window_average(stack.planes[p], n, margin(level));
  }

  std::vector<double> out;
  for (int p = 0; p < layout.count(); ++p) out.push_back(window_average(stack.planes[p], n, margin(layout.gamma(p).j)));
  for (const auto& e : set.entries) out.push_back(naive_covariance(stack, e, set.shifts));
  for (const auto& l : set.lowpass) {
    out.push_back(covariance_loop(low[l.c], low[l.c2], 0.0, 0.0, n, margin(J), set.shifts.shifts[l.shift]));
  }
  return out;
}

Complex rectifier_coefficient_closed_form(int k) {
  k = std::abs(k);
  if (k == 1) return 0.25;
  if (k % 2 == 1) return 0.0;
  return std::cos(k * pi / 2) / (pi * (1.0 - static_cast<double>(k) * k));
}

OracleReport prop1_check(const ImagePlane& x, const FilterBank& bank, int j, int theta, int j2, int theta2,
                         Shift tau, double alpha, double alpha2, int K, double tolerance) {
  const int n = x.size();
  check_oracle_size(n);
  const ComplexPlane z = naive_convolution(x.data(), bank.band_pass_spatial(j, theta), n);
  const ComplexPlane z2 = naive_convolution(x.data(), bank.band_pass_spatial(j2, theta2), n);
  const double area = static_cast<double>(n) * n;

  double lhs = 0.0, var1 = 0.0, var2 = 0.0;
  for (int y = 0; y < n; ++y)
    for (int u = 0; u < n; ++u) {
      const double r1 = rho(z[y * n + u], alpha);
      lhs += r1 * rho(z2[wrap(y - tau.dy, n) * n + wrap(u - tau.dx, n)], alpha2);
      var1 += r1 * r1;
      var2 += rho(z2[y * n + u], alpha2) * rho(z2[y * n + u], alpha2);
    }
  lhs /= area;
  const double scale = std::sqrt((var1 / area) * (var2 / area));

  std::vector<Complex> c(2 * K + 1);
  for (int k = -K; k <= K; ++k) c[k + K] = rectifier_fourier_coefficient(k, 4 * std::abs(k) + 64);
  std::vector<ComplexPlane> h1(2 * K + 1), h2(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    if (c[k + K] == 0.0) continue;
    h1[k + K].resize(z.size());
    h2[k + K].resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      h1[k + K][i] = phase_harmonic(z[i], k);
      h2[k + K][i] = phase_harmonic(z2[i], k);
    }
  }
  Complex rhs = 0.0;
  for (int k = -K; k <= K; ++k) {
    if (c[k + K] == 0.0) continue;
    for (int k2 = -K; k2 <= K; ++k2) {
      if (c[k2 + K] == 0.0) continue;
      Complex wph = 0.0;
      for (int y = 0; y < n; ++y)
        for (int u = 0; u < n; ++u)
          wph += h1[k + K][y * n + u] * std::conj(h2[k2 + K][wrap(y - tau.dy, n) * n + wrap(u - tau.dx, n)]);
      wph /= area;
      rhs += c[k + K] * std::conj(c[k2 + K]) * wph * std::polar(1.0, k * alpha - k2 * alpha2);
    }
  }

  OracleReport r;
  r.name = "prop1";
  r.tolerance = tolerance;
  r.max_abs_err = std::abs(lhs - rhs);
  r.max_rel_err = scale > 0.0 ? r.max_abs_err / scale : r.max_abs_err;
  r.detail = "K=" + std::to_string(K) + " lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs.real());
  return finish(r, true);
}

OracleReport prop2_check(const ImagePlane& x, const FilterBank& bank, double tolerance) {
  const int n = x.size();
  const int J = bank.scales(), L = bank.orientations();
  // Coefficients of z = sum_alpha a_alpha rho_alpha(z) on {0, pi/2, pi, 3pi/2}.
  const std::array<Complex, 4> a{Complex(1, 0), Complex(0, -1), Complex(-1, 0), Complex(0, 1)};

  IndexSet set;
  set.variant = Variant::L;
  set.layout = {J, L, 4, 1};
  set.shifts = build_shift_set(J, L);
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < L; ++t)
      for (int j2 = 0; j2 < J; ++j2)
        for (int t2 = 0; t2 < L; ++t2)
          for (int s = 0; s < static_cast<int>(set.shifts.size()); ++s)
            for (int al = 0; al < 4; ++al)
              for (int al2 = 0; al2 < 4; ++al2) set.entries.push_back({{j, t, al, 0}, {j2, t2, al2, 0}, s});

  const ImagePlane planes[1] = {x};
  const PlaneMeans zeros = PlaneMeans::zeros(set.layout.count(), J);
  const StatisticsVector stats = compute_statistics(planes, bank, set, zeros, Boundary::periodic);
  const WaveletCoefficients w = wavelet_transform(x, bank);
  const double area = static_cast<double>(n) * n;

  OracleReport r;
  r.name = "prop2";
  r.tolerance = tolerance;
  std::size_t e = stats.mean_count;
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < L; ++t)
      for (int j2 = 0; j2 < J; ++j2)
        for (int t2 = 0; t2 < L; ++t2)
          for (const Shift tau : set.shifts.shifts) {
            Complex lhs = 0.0;
            for (int al = 0; al < 4; ++al)
              for (int al2 = 0; al2 < 4; ++al2) lhs += a[al] * std::conj(a[al2]) * area * stats.values[e++];
            const auto& z = w.at(j, t);
            const auto& z2 = w.at(j2, t2);
            Complex rhs = 0.0;
            for (int y = 0; y < n; ++y)
              for (int u = 0; u < n; ++u)
                rhs += z[y * n + u] * std::conj(z2[wrap(y - tau.dy, n) * n + wrap(u - tau.dx, n)]);
            const double err = std::abs(lhs - rhs);
            r.max_abs_err = std::max(r.max_abs_err, err);
            r.max_rel_err = std::max(r.max_rel_err, err / std::abs(rhs));
          }
  r.detail = std::to_string(J * L * J * L * set.shifts.size()) + " correlations";
  return finish(r, true);
}

OracleReport rectifier_decomposition_report(int samples, Seed seed, double tolerance) {
  NormalSampler rng(seed);
  OracleReport r;
  r.name = "eq9";
  r.tolerance = tolerance;
  for (int i = 0; i < samples; ++i) {
    const double scale = std::exp(4.0 * rng.normal());
    const Complex z(scale * rng.normal(), scale * rng.normal());
    const double err = std::abs(rectifier_decomposition_check(z) - z);
    r.max_abs_err = std::max(r.max_abs_err, err);
    if (std::abs(z) > 0.0) r.max_rel_err = std::max(r.max_rel_err, err / std::abs(z));
  }
  r.detail = std::to_string(samples) + " samples";
  return finish(r, true);
}

OracleReport rectifier_series_report(const ImagePlane& x, const FilterBank& bank, int alpha_count, int K) {
  const auto phases = phase_grid(alpha_count);
  std::vector<Complex> c(2 * K + 1);
  for (int k = -K; k <= K; ++k) c[k + K] = rectifier_coefficient_closed_form(k);
  // sum_{|k| > K} |c_k|: the +-1 terms if K = 0, plus 2 sum_{even k > K} 1 / (pi (k^2 - 1)).
  const int m = K % 2 == 0 ? K + 2 : K + 1;
  const double tail = (K < 1 ? 0.5 : 0.0) + 1.0 / (pi * (m - 1));

  const WaveletCoefficients w = wavelet_transform(x, bank);
  OracleReport r;
  r.name = "series";
  r.tolerance = tail;
  double max_modulus = 0.0, worst_ratio = 0.0;
  for (const auto& z : w.band) {
    for (const Complex v : z) {
      max_modulus = std::max(max_modulus, std::abs(v));
      for (const double alpha : phases) {
        Complex s = 0.0;
        for (int k = -K; k <= K; ++k)
          if (c[k + K] != 0.0) s += c[k + K] * phase_harmonic(v, k) * std::polar(1.0, k * alpha);
        const double err = std::abs(s - rho(v, alpha));
        r.max_abs_err = std::max(r.max_abs_err, err);
        if (std::abs(v) > 0.0) worst_ratio = std::max(worst_ratio, err / std::abs(v));
      }
    }
  }
  r.max_rel_err = r.max_abs_err / max_modulus;
  r.passed = worst_ratio <= tail * (1.0 + 1e-9);
  r.detail = "max err / |z| = " + std::to_string(worst_ratio) + ", tail bound = " + std::to_string(tail);
  return r;
}

OracleReport convolution_report(const ImagePlane& x, const FilterBank& bank, double tolerance) {
  const WaveletCoefficients w = wavelet_transform(x, bank);
  OracleReport r;
  r.name = "convolution";
  r.tolerance = tolerance;
  double max_ref = 0.0;
  auto compare = [&](const ComplexPlane& fast, const ComplexPlane& filter) {
    const ComplexPlane ref = naive_convolution(x.data(), filter, x.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      r.max_abs_err = std::max(r.max_abs_err, std::abs(fast[i] - ref[i]));
      max_ref = std::max(max_ref, std::abs(ref[i]));
    }
  };
  for (int j = 0; j < bank.scales(); ++j)
    for (int t = 0; t < bank.orientations(); ++t) compare(w.at(j, t), bank.band_pass_spatial(j, t));
  compare(w.low, bank.low_pass_spatial());
  r.max_rel_err = max_ref > 0.0 ? r.max_abs_err / max_ref : r.max_abs_err;
  r.detail = std::to_string(bank.band_count() + 1) + " filters at n=" + std::to_string(x.size());
  return finish(r, false);
}

OracleReport covariance_report(std::span<const ImagePlane> channels, const ModelConfig& config, double tolerance) {
  const int n = channels[0].size();
  const FilterBank bank = build_filter_bank(n, config.scales, config.orientations, config.family);
  const IndexSet set = build_index_set(config.variant, config.scales, config.orientations, config.alphas);
  const StatisticsVector fast = compute_statistics(channels, bank, set, std::nullopt, config.boundary);
  const std::vector<double> ref = naive_statistics(channels, bank, set, std::nullopt, config.boundary);
  OracleReport r;
  r.name = "covariance";
  r.tolerance = tolerance;
  double max_ref = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    r.max_abs_err = std::max(r.max_abs_err, std::abs(fast.values[i] - ref[i]));
    max_ref = std::max(max_ref, std::abs(ref[i]));
  }
  r.max_rel_err = max_ref > 0.0 ? r.max_abs_err / max_ref : r.max_abs_err;
  r.detail = std::to_string(ref.size()) + " statistics, variant " + to_string(config.variant) + ", " +
             to_string(config.boundary);
  return finish(r, false);
}

OracleReport adjoint_report(const FilterBank& bank, Seed seed, double tolerance) {
  const int n = bank.size();
  const std::size_t np = static_cast<std::size_t>(n) * n;
  NormalSampler rng(seed);
  ImagePlane x(n);
  for (auto& v : x.data()) v = rng.normal();
  WaveletCoefficients y;
  y.n = n;
  y.scales = bank.scales();
  y.orientations = bank.orientations();
  y.band.resize(bank.band_count());
  auto fill = [&](ComplexPlane& p) {
    p.resize(np);
    for (auto& v : p) v = Complex(rng.normal(), rng.normal());
  };
  for (auto& b : y.band) fill(b);
  fill(y.low);

  const WaveletCoefficients wx = wavelet_transform(x, bank);
  double lhs = 0.0;
  for (std::size_t b = 0; b < wx.band.size(); ++b)
    for (std::size_t i = 0; i < np; ++i) lhs += (wx.band[b][i] * std::conj(y.band[b][i])).real();
  for (std::size_t i = 0; i < np; ++i) lhs += (wx.low[i] * std::conj(y.low[i])).real();
  const ImagePlane adj = adjoint_wavelet_transform(y, bank);
  double rhs = 0.0;
  for (std::size_t i = 0; i < np; ++i) rhs += x.data()[i] * adj.data()[i];

  OracleReport r;
  r.name = "adjoint";
  r.tolerance = tolerance;
  r.max_abs_err = std::abs(lhs - rhs);
  r.max_rel_err = r.max_abs_err / std::max(std::abs(lhs), std::abs(rhs));
  r.detail = "<Wx,y>=" + std::to_string(lhs);
  return finish(r, true);
}

OracleReport gradient_report(Objective& objective, std::span<const double> x, int pixel_count, double h,
                             Seed seed, double tolerance) {
  const int n = objective.size();
  const std::size_t np = static_cast<std::size_t>(n) * n;
  const FilterBank& bank = objective.bank();
  const auto phases = phase_grid(objective.index_set().layout.alphas);
  std::vector<double> grad(x.size());
  objective.evaluate(x, grad);

  std::vector<WaveletCoefficients> coeffs;
  for (int c = 0; c < objective.channels(); ++c) coeffs.push_back(wavelet_transform(x.subspan(c * np, np), bank));

  // Could moving x(u0) by h push some rectifier input through zero?
  auto near_kink = [&](int c, int ux, int uy) {
    for (int j = 0; j < bank.scales(); ++j)
      for (int t = 0; t < bank.orientations(); ++t) {
        const auto& z = coeffs[c].at(j, t);
        const auto& psi = bank.band_pass_spatial(j, t);
        for (int y = 0; y < n; ++y)
          for (int u = 0; u < n; ++u) {
            const Complex dz = h * psi[wrap(y - uy, n) * n + wrap(u - ux, n)];
            for (double alpha : phases) {
              const double r = (std::polar(1.0, alpha) * z[y * n + u]).real();
              const double dr = std::abs((std::polar(1.0, alpha) * dz).real());
              if (std::abs(r) <= 2.0 * dr) return true;
            }
          }
      }
    return false;
  };

  NormalSampler rng(seed);
  std::set<std::size_t> tried;
  std::vector<double> probe(x.begin(), x.end());
  OracleReport r;
  r.name = "gradient";
  r.tolerance = tolerance;
  int used = 0, skipped = 0;
  while (used < pixel_count && tried.size() < x.size()) {
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform() * x.size()), x.size() - 1);
    if (!tried.insert(idx).second) continue;
    const int c = static_cast<int>(idx / np);
    const int ux = static_cast<int>(idx % np) % n, uy = static_cast<int>(idx % np) / n;
    if (near_kink(c, ux, uy)) {
      ++skipped;
      continue;
    }
    probe[idx] = x[idx] + h;
    const double fp = objective.loss(probe);
    probe[idx] = x[idx] - h;
    const double fm = objective.loss(probe);
    probe[idx] = x[idx];
    const double fd = (fp - fm) / (2.0 * h);
    const double err = std::abs(grad[idx] - fd);
    const double denom = std::max(std::abs(grad[idx]), std::abs(fd));
    r.max_abs_err = std::max(r.max_abs_err, err);
    r.max_rel_err = std::max(r.max_rel_err, denom > 0.0 ? err / denom : 0.0);
    ++used;
  }
  r.detail = std::to_string(used) + " pixels checked, " + std::to_string(skipped) + " near a kink skipped";
  r = finish(r, true);
  if (used < pixel_count) r.passed = false;
  return r;
}

std::vector<std::string> oracle_names() {
  return {"convolution", "covariance", "adjoint", "eq9", "series", "prop1", "prop2", "gradient"};
}

std::vector<OracleReport> run_oracle_suite(const std::optional<std::string>& only) {
  if (only) {
    const auto names = oracle_names();
    if (std::find(names.begin(), names.end(), *only) == names.end()) throw Error("unknown check: " + *only);
  }
  auto wanted = [&](const char* name) { return !only || *only == name; };
  std::vector<OracleReport> out;

  if (wanted("convolution")) {
    OracleReport worst;
    for (int n : {8, 16}) {
      const FilterBank bank = build_filter_bank(n, n == 8 ? 1 : 2, 4);
      OracleReport r = convolution_report(random_plane(n, 11 + n), bank);
      if (worst.name.empty() || r.max_abs_err > worst.max_abs_err) worst = r;
    }
    out.push_back(worst);
  }
  if (wanted("covariance")) {
    OracleReport worst;
    for (Boundary b : {Boundary::periodic, Boundary::windowed}) {
      ModelConfig config;
      config.variant = Variant::I;
      config.scales = 2;
      config.orientations = 2;
      config.boundary = b;
      const ImagePlane planes[1] = {random_plane(16, 21)};
      OracleReport r = covariance_report(planes, config);
      if (worst.name.empty() || r.max_abs_err > worst.max_abs_err) worst = r;
    }
    out.push_back(worst);
  }
  if (wanted("adjoint")) out.push_back(adjoint_report(build_filter_bank(16, 2, 4), Seed{31}));
  if (wanted("eq9")) out.push_back(rectifier_decomposition_report(10000, Seed{41}));
  if (wanted("series")) out.push_back(rectifier_series_report(random_plane(32, 51), build_filter_bank(32, 2, 4), 16, 64));
  if (wanted("prop1")) {
    const FilterBank bank = build_filter_bank(16, 2, 2);
    const ImagePlane x = random_plane(16, 61);
    OracleReport worst;
    const double a = pi / 2;
    for (const auto& [j, t, j2, t2, dx, dy, al, al2] :
         std::vector<std::tuple<int, int, int, int, int, int, double, double>>{
             {0, 0, 0, 0, 0, 0, 0.0, 0.0}, {0, 0, 1, 1, 1, 0, a, 0.0}, {1, 1, 1, 0, 0, 2, 3 * a, 2 * a}}) {
      OracleReport r = prop1_check(x, bank, j, t, j2, t2, {dx, dy}, al, al2, 64);
      if (worst.name.empty() || r.max_rel_err > worst.max_rel_err) worst = r;
    }
    out.push_back(worst);
  }
  if (wanted("prop2")) out.push_back(prop2_check(random_plane(32, 71), build_filter_bank(32, 3, 2)));
  if (wanted("gradient")) {
    OracleReport worst;
    for (Variant v : {Variant::S, Variant::I, Variant::L, Variant::C}) {
      ModelConfig config;
      config.variant = v;
      config.scales = 2;
      config.orientations = 2;
      config.boundary = Boundary::periodic;
      Texture obs = random_plane(16, 81);
      Texture start = random_plane(16, 82);
      if (is_color_variant(v)) {
        obs = ColorImage(random_plane(16, 83), random_plane(16, 84), random_plane(16, 85));
        start = ColorImage(random_plane(16, 86), random_plane(16, 87), random_plane(16, 88));
      }
      Objective objective(obs, config);
      OracleReport r = gradient_report(objective, flatten(start), 50, 1e-5, Seed{91});
      r.detail = "variant " + to_string(v) + ": " + r.detail;
      if (worst.name.empty() || !r.passed || r.max_rel_err > worst.max_rel_err) {
        if (worst.name.empty() || worst.passed) worst = r;
      }
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace alphatex
