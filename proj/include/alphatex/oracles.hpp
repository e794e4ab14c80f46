#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alphatex/config.hpp"
#include "alphatex/fft.hpp"
#include "alphatex/image.hpp"
#include "alphatex/representation.hpp"
#include "alphatex/statistics.hpp"
#include "alphatex/synthesis.hpp"
#include "alphatex/wavelets.hpp"
#include "json.hpp"

namespace alphatex {

/// Slow reference implementations. None of them share convolution or
/// covariance code with the fast path. Inputs are capped at 32 x 32.
constexpr int kOracleMaxSize = 32;

struct OracleReport {
  std::string name;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

nlohmann::json to_json(const OracleReport& r);

/// out(u) = sum_v x(u - v) filter(v), circular indices.
ComplexPlane naive_convolution(std::span<const double> x, const ComplexPlane& filter, int n);

/// Literal covariance loop over u: mean over the window of
/// (R_g(u) - mu_g)(R_g'(u - tau) - mu_g'), using the stack's means at level max(j, j').
double naive_covariance(const RectifiedStack& stack, const CovarianceEntry& entry, const ShiftSet& shifts);

/// Whole statistics vector from direct convolutions and literal loops.
std::vector<double> naive_statistics(std::span<const ImagePlane> channels, const FilterBank& bank,
                                     const IndexSet& set, const std::optional<PlaneMeans>& means,
                                     Boundary boundary);

/// Truncated expansion of the rectified covariance in phase-harmonic
/// covariances, against the direct value (means zero).
///
/// Error is normalized by sqrt(C_aa C_a'a'), the Cauchy-Schwarz scale of the
/// entry, since cross-phase covariances can vanish identically.
OracleReport prop1_check(const ImagePlane& x, const FilterBank& bank, int j, int theta, int j2, int theta2,
                         Shift tau, double alpha, double alpha2, int K, double tolerance = 1e-3);

/// Four-phase recombination of rectified covariances against the raw complex
/// wavelet correlation, for every band pair and every shift.
OracleReport prop2_check(const ImagePlane& x, const FilterBank& bank, double tolerance = 1e-8);

/// rho_0 - rho_pi - i (rho_pi/2 - rho_3pi/2) == z on random samples.
OracleReport rectifier_decomposition_report(int samples, Seed seed, double tolerance = 1e-14);

/// Fourier-series reconstruction of rho_alpha(x * psi) from phase harmonics.
/// Reports the error relative to max |x * psi|; passes if every point is
/// within the analytic tail bound sum_{|k|>K} |c_k| |z|.
OracleReport rectifier_series_report(const ImagePlane& x, const FilterBank& bank, int alpha_count, int K);

/// FFT transform vs direct spatial sum, every band.
OracleReport convolution_report(const ImagePlane& x, const FilterBank& bank, double tolerance = 1e-10);

/// Fast statistics vs naive_statistics.
OracleReport covariance_report(std::span<const ImagePlane> channels, const ModelConfig& config,
                               double tolerance = 1e-10);

/// Re<W x, y> vs <x, W* y> for random x, y.
OracleReport adjoint_report(const FilterBank& bank, Seed seed, double tolerance = 1e-10);

/// Analytic gradient vs central differences on sampled pixels. Pixels whose
/// perturbation by +-h could move any rectifier input across zero are skipped.
OracleReport gradient_report(Objective& objective, std::span<const double> x, int pixel_count, double h,
                             Seed seed, double tolerance = 1e-4);

/// Exact closed form of c_k for max(0, cos a).
Complex rectifier_coefficient_closed_form(int k);

/// The suite behind `verify`; `only` selects a single check by name.
std::vector<OracleReport> run_oracle_suite(const std::optional<std::string>& only = std::nullopt);
std::vector<std::string> oracle_names();

}  // namespace alphatex
