#pragma once

// Time correlations G(t) = Omega(X alpha_t(Y)) and their energy support.

#include "tglab/series.hpp"
#include "tglab/states.hpp"

#include <stdexcept>
#include <variant>
#include <vector>

namespace tglab {

class NotQuasiPolynomial : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// G sampled at t_j = t0 + j dt.
struct SampledSeries {
  double t0 = 0.0;
  double dt = 0.125;
  std::vector<Complex> values;
  /// Largest spatial momentum involved, for the relativistic flag.
  double momentum = 0.0;
};

using CorrelationSeries = std::variant<QuasiPolynomialSeries, SampledSeries>;

struct SamplingOptions {
  double dt = 0.125;
  std::size_t points = 2048;
};

/// Exact: two_point_series shifted by t_Y - t_X.
QuasiPolynomialSeries correlation_series(const StateSpec& state, const FieldLabel& x,
                                         const FieldLabel& y);

/// Exact when possible, otherwise sampled on a window centred at t = 0.
CorrelationSeries correlation_series(const StateSpec& state, const WeylElement& x,
                                     const WeylElement& y, const SamplingOptions& sampling = {});

/// Positive state only, and only when X or Y has no transverse part. Then
/// either the A-smearing of X alpha_t(Y) is non-observable for every t (the
/// zero series) or G(t) = G(0) exp(i w t) with
///     w = -(f_X, f_Y)_l / 2 + L^3 theta.m_{f_Y},
/// where ( , )_l pairs the longitudinal and mean parts. Throws
/// NotQuasiPolynomial otherwise.
QuasiPolynomialSeries exact_weyl_series(const StateSpec& state, const WeylElement& x,
                                        const WeylElement& y, double tol = 1e-12);

/// Direct evaluation Omega(X alpha_t(Y)).
Complex weyl_correlation(const StateSpec& state, const WeylElement& x, const WeylElement& y,
                         double t);

SampledSeries sample_weyl_correlation(const StateSpec& state, const WeylElement& x,
                                      const WeylElement& y, const SamplingOptions& sampling = {});

// ---------------------------------------------------------------------------

struct SupportPoint {
  double omega;
  double weight;
  /// 0 for a delta, 1 for a delta derivative.
  int order;
  double momentum;
};

struct SpectralVerdict {
  std::vector<SupportPoint> support;
  bool energy_positive = true;
  bool relativistic = true;
  double negative_mass_fraction = 0.0;
  bool sampled = false;
  /// Tolerance used for the support comparisons.
  double tol = 1e-9;
};

struct SampledAnalysisOptions {
  /// Multiples of the frequency resolution 2 pi / T.
  double resolution_factor = 5.0;
  /// Peaks below this fraction of the largest one are not reported.
  double peak_floor = 1e-3;
  double negative_mass_threshold = 1e-3;
};

SpectralVerdict support_analysis(const QuasiPolynomialSeries& series, double tol = 1e-9);
SpectralVerdict support_analysis(const SampledSeries& series,
                                 const SampledAnalysisOptions& options = {});
SpectralVerdict support_analysis(const CorrelationSeries& series, double tol = 1e-9);

/// G(t) = Omega_theta(W(u0, 0) alpha_t(W(-u0, 0))) for a mean-only smearing
/// u0, with frequency (u0, u0)/2 - L^3 theta.m. Throws std::invalid_argument
/// if u0 has dynamical coefficients.
QuasiPolynomialSeries theta_violation_series(const Vec3& theta, const VectorFunction& u0);
SpectralVerdict theta_violation_demo(const Vec3& theta, const VectorFunction& u0,
                                     double tol = 1e-9);

}  // namespace tglab
