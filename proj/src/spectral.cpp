#include "tglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tglab {

namespace {

bool transverse_free(const VectorFunction& f, double tol) {
  const auto tr = transverse_project(f.with_mean(Vec3::Zero()));
  return tr.is_zero(tol, f.max_abs());
}

bool transverse_free(const WeylElement& w, double tol) {
  return transverse_free(w.f(), tol) && transverse_free(w.g(), tol);
}

double max_momentum(const WeylElement& w) {
  const auto& grid = *w.grid();
  double out = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (w.f()[i].norm() > 0.0 || w.g()[i].norm() > 0.0) out = std::max(out, grid.kmag(i));
  }
  return out;
}

}  // namespace

QuasiPolynomialSeries correlation_series(const StateSpec& state, const FieldLabel& x,
                                         const FieldLabel& y) {
  return two_point_series(state, x, y).shifted(y.t - x.t);
}

Complex weyl_correlation(const StateSpec& state, const WeylElement& x, const WeylElement& y,
                         double t) {
  return eval_weyl(state, multiply(x, apply_automorphism(TimeShift{t}, y)));
}

QuasiPolynomialSeries exact_weyl_series(const StateSpec& state, const WeylElement& x,
                                        const WeylElement& y, double tol) {
  if (!state.is_positive()) {
    throw NotQuasiPolynomial("Weyl correlations of the indefinite state are not quasi-polynomial");
  }
  if (!transverse_free(x, tol) && !transverse_free(y, tol)) {
    throw NotQuasiPolynomial("both Weyl elements carry transverse parts");
  }
  QuasiPolynomialSeries out;
  // The longitudinal part and the mean of the A-smearing do not evolve.
  const auto total = x.f() + y.f();
  if (!divergence_free(total, tol) || total.mean().norm() > tol * total.max_abs()) return out;

  const auto fx = longitudinal_and_mean(x.f());
  const auto fy = longitudinal_and_mean(y.f());
  double omega = -0.5 * inner(fx, fy);
  if (state.theta()) omega += x.grid()->volume() * state.theta()->dot(y.f().mean());
  out.add_term(omega, eval_weyl(state, multiply(x, y), tol), 0.0);
  return out;
}

SampledSeries sample_weyl_correlation(const StateSpec& state, const WeylElement& x,
                                      const WeylElement& y, const SamplingOptions& sampling) {
  if (sampling.points < 2 || !(sampling.dt > 0.0)) {
    throw std::invalid_argument("sample_weyl_correlation: need dt > 0 and at least 2 points");
  }
  SampledSeries out;
  out.dt = sampling.dt;
  out.t0 = -0.5 * sampling.dt * static_cast<double>(sampling.points);
  out.momentum = std::max(max_momentum(x), max_momentum(y));
  out.values.reserve(sampling.points);
  for (std::size_t j = 0; j < sampling.points; ++j) {
    out.values.push_back(weyl_correlation(state, x, y, out.t0 + out.dt * static_cast<double>(j)));
  }
  return out;
}

CorrelationSeries correlation_series(const StateSpec& state, const WeylElement& x,
                                     const WeylElement& y, const SamplingOptions& sampling) {
  try {
    return exact_weyl_series(state, x, y);
  } catch (const NotQuasiPolynomial&) {
    return sample_weyl_correlation(state, x, y, sampling);
  }
}

// ---------------------------------------------------------------------------

namespace {

void finalize_flags(SpectralVerdict& v) {
  v.energy_positive = true;
  v.relativistic = true;
  for (const auto& p : v.support) {
    if (p.omega < -v.tol) v.energy_positive = false;
    if (p.omega < p.momentum - v.tol) v.relativistic = false;
  }
}

}  // namespace

SpectralVerdict support_analysis(const QuasiPolynomialSeries& series, double tol) {
  SpectralVerdict v;
  v.tol = tol;
  double largest = std::abs(series.b0());
  largest = std::max(largest, std::abs(series.b1()));
  for (const auto& t : series.terms()) largest = std::max(largest, std::abs(t.coeff));
  // Rounding residue from cancelling mode sums is not support.
  const double floor = 1e-13 * largest;

  for (const auto& t : series.terms()) {
    if (std::abs(t.coeff) > floor) v.support.push_back({t.omega, std::abs(t.coeff), 0, t.momentum});
  }
  if (std::abs(series.b0()) > floor) {
    v.support.push_back({0.0, std::abs(series.b0()), 0, series.linear_momentum()});
  }
  if (std::abs(series.b1()) > floor) {
    v.support.push_back({0.0, std::abs(series.b1()), 1, series.linear_momentum()});
  }
  finalize_flags(v);
  return v;
}

SpectralVerdict support_analysis(const SampledSeries& series,
                                 const SampledAnalysisOptions& options) {
  SpectralVerdict v;
  v.sampled = true;
  const std::size_t n = series.values.size();
  if (n < 2) return v;

  // 4-term Blackman-Harris window.
  constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> window(n);
  double gain = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = two_pi * static_cast<double>(j) / static_cast<double>(n - 1);
    window[j] = a0 - a1 * std::cos(x) + a2 * std::cos(2 * x) - a3 * std::cos(3 * x);
    gain += window[j];
  }

  const double span = series.dt * static_cast<double>(n);
  const double dw = two_pi / span;
  v.tol = options.resolution_factor * dw;

  // G~(w_m) = sum_j w_j G(t_j) exp(-i w_m t_j) on w_m = m dw, |m| <= n/2.
  const long half = static_cast<long>(n / 2);
  std::vector<double> freq;
  std::vector<double> mag;
  for (long m = -half; m < half; ++m) {
    const double w = dw * static_cast<double>(m);
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double t = series.t0 + series.dt * static_cast<double>(j);
      acc += window[j] * series.values[j] * std::polar(1.0, -w * t);
    }
    freq.push_back(w);
    mag.push_back(std::abs(acc) / gain);
  }

  double total = 0.0;
  double negative = 0.0;
  for (std::size_t m = 0; m < mag.size(); ++m) {
    const double power = mag[m] * mag[m];
    total += power;
    if (freq[m] < -v.tol) negative += power;
  }
  v.negative_mass_fraction = total > 0.0 ? negative / total : 0.0;

  const double peak = mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
  for (std::size_t m = 0; m < mag.size(); ++m) {
    const bool left = m == 0 || mag[m] > mag[m - 1];
    const bool right = m + 1 == mag.size() || mag[m] >= mag[m + 1];
    if (left && right && mag[m] > options.peak_floor * peak && peak > 0.0) {
      v.support.push_back({freq[m], mag[m], 0, series.momentum});
    }
  }
  finalize_flags(v);
  if (v.negative_mass_fraction > options.negative_mass_threshold) v.energy_positive = false;
  return v;
}

SpectralVerdict support_analysis(const CorrelationSeries& series, double tol) {
  if (const auto* exact = std::get_if<QuasiPolynomialSeries>(&series)) {
    return support_analysis(*exact, tol);
  }
  return support_analysis(std::get<SampledSeries>(series));
}

// ---------------------------------------------------------------------------

QuasiPolynomialSeries theta_violation_series(const Vec3& theta, const VectorFunction& u0) {
  if (!u0.with_mean(Vec3::Zero()).is_zero(0.0)) {
    throw std::invalid_argument("theta_violation_demo: u0 must be a mean-only A-smearing");
  }
  const auto zero = VectorFunction::zero(u0.grid());
  const auto state = StateSpec::positive_non_regular().theta_composed(theta);
  return exact_weyl_series(state, WeylElement(u0, zero), WeylElement(-u0, zero));
}

SpectralVerdict theta_violation_demo(const Vec3& theta, const VectorFunction& u0, double tol) {
  return support_analysis(theta_violation_series(theta, u0), tol);
}

}  // namespace tglab
