#pragma once

// Euclidean two-point functions and the Gaussian ensemble behind them.
//
// Each dynamical mode k carries, in units where a smeared field reads
// L^(3/2) sum_k conj(fhat(k)) . var_k:
//   a_k(tau)   circular complex OU pair on the two transverse polarizations,
//              <a a*> = exp(-w |tau - sigma|) / (2 w);
//   xi_k(tau)  circular complex two-sided Brownian motion from xi(0) = 0,
//              <xi xi*> = min(|tau|, |sigma|) / k^2 for same-sign times, else 0;
//   z = z1 + i z2 with z1, z2 independent real fields, <|z1_k|^2> = 1/(4 k^2).
// The composite potential is A~(f, tau) = A^tr(f, tau) - phi(div f, tau),
// phi = xi + z - zbar |tau|.

#include "tglab/mode_space.hpp"
#include "tglab/series.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace tglab {

struct EuclideanConfig {
  GridPtr grid;
  std::vector<double> taus;
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
  std::size_t batches = 20;
  unsigned threads = 1;
};

/// Throws std::invalid_argument for a null grid, repeated taus, zero
/// samples, or fewer than two batches.
void validate(const EuclideanConfig& config);

struct EuclideanLabel {
  VectorFunction f;
  double tau;
};

// ---------------------------------------------------------------------------
// Analytic kernels.

/// Transverse L^3 sum conj(f).P^tr.g exp(-|k||dtau|)/(2|k|) plus longitudinal
/// -(|dtau|/2) L^3 sum conj(div f)(div g)/|k|^2. Throws MeanModeUnsupported.
Complex schwinger_two_point(const VectorFunction& f, double tau1, const VectorFunction& g,
                            double tau2);
Complex schwinger_transverse(const VectorFunction& f, double tau1, const VectorFunction& g,
                             double tau2);

/// Mode-by-mode substitution |dtau| -> -i y0 in the Euclidean kernel, as a
/// series in y0. exp(-w|dtau|) becomes exp(i w y0).
QuasiPolynomialSeries continued_schwinger_series(const VectorFunction& f,
                                                 const VectorFunction& g);
QuasiPolynomialSeries continued_transverse_series(const VectorFunction& f,
                                                  const VectorFunction& g);

/// Pairing sum of schwinger_two_point over the labels.
Complex schwinger_wick(std::span<const EuclideanLabel> labels);

// ---------------------------------------------------------------------------
// Ensemble.

class FieldSample {
 public:
  FieldSample(GridPtr grid, std::shared_ptr<const std::vector<double>> taus);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& taus() const { return *taus_; }
  /// Throws std::out_of_range if tau is not one of the sampled times.
  std::size_t tau_index(double tau) const;

  /// Per-mode variables; entries at -k are the conjugates required by
  /// reality (z and zbar follow from z1 and z2).
  const CVec3& a(std::size_t mode, std::size_t tau) const { return a_[tau * modes_ + mode]; }
  const Complex& xi(std::size_t mode, std::size_t tau) const { return xi_[tau * modes_ + mode]; }
  const Complex& z1(std::size_t mode) const { return z1_[mode]; }
  const Complex& z2(std::size_t mode) const { return z2_[mode]; }
  Complex z(std::size_t mode) const { return z1_[mode] + Complex(0.0, 1.0) * z2_[mode]; }
  Complex zbar(std::size_t mode) const { return z1_[mode] - Complex(0.0, 1.0) * z2_[mode]; }
  Complex phi(std::size_t mode, std::size_t tau) const;

  /// Smeared fields; real except for the z contributions.
  double transverse(const VectorFunction& f, std::size_t tau) const;
  double xi_smeared(const ScalarFunction& h, std::size_t tau) const;
  Complex phi_smeared(const ScalarFunction& h, std::size_t tau) const;
  Complex composite(const VectorFunction& f, std::size_t tau) const;

 private:
  friend FieldSample draw_sample(const EuclideanConfig& config, std::uint64_t index);

  GridPtr grid_;
  std::shared_ptr<const std::vector<double>> taus_;
  std::size_t modes_;
  std::vector<CVec3> a_;
  std::vector<Complex> xi_;
  std::vector<Complex> z1_;
  std::vector<Complex> z2_;
};

/// Sample `index` of the ensemble. Depends only on (seed, index, grid, taus).
/// config.taus need not be sorted.
FieldSample draw_sample(const EuclideanConfig& config, std::uint64_t index);
std::vector<FieldSample> sample_ensemble(const EuclideanConfig& config);

/// Two real unit vectors spanning the plane orthogonal to k.
std::pair<Vec3, Vec3> polarization_basis(const Vec3& k);

// ---------------------------------------------------------------------------
// Monte Carlo.

struct McEstimate {
  Complex estimate;
  /// sqrt(se_re^2 + se_im^2) from contiguous batch means.
  double stderr_ = 0.0;
  double se_re = 0.0;
  double se_im = 0.0;
  std::size_t samples = 0;
};

/// Averages observable(sample) over config.samples draws. Per-sample values
/// are computed on config.threads workers and reduced in index order.
McEstimate mc_average(const EuclideanConfig& config,
                      const std::function<Complex(const FieldSample&)>& observable);

/// The label times are added to config.taus. Throws MeanModeUnsupported.
McEstimate mc_moment(EuclideanConfig config, std::span<const EuclideanLabel> labels);

// ---------------------------------------------------------------------------
// Exponential correlations E[prod_j exp i X_j].

/// True when sum_j div f_j and sum_j mean(f_j) vanish to tol (relative to
/// the factors' own scale).
bool charge_neutral(std::span<const EuclideanLabel> factors, double tol = 1e-12);

/// Positive case: 0 unless charge_neutral, else exp(-Var/2) of
/// sum_j [A^tr(f_j, tau_j) - xi(div f_j, tau_j)]. Means are dropped.
Complex positive_exponential_correlation(std::span<const EuclideanLabel> factors,
                                         double tol = 1e-12);
/// Same functional estimated on the ensemble (exact 0 when not neutral).
McEstimate mc_positive_exponential(EuclideanConfig config, std::span<const EuclideanLabel> factors,
                                   double tol = 1e-12);

/// Indefinite case: exp(-1/2 sum_jl S(f_j tau_j, f_l tau_l)) with the full
/// Schwinger kernel. Throws MeanModeUnsupported.
Complex indefinite_exponential_correlation(std::span<const EuclideanLabel> factors);
McEstimate mc_indefinite_exponential(EuclideanConfig config,
                                     std::span<const EuclideanLabel> factors);

/// M_ab = E[Theta(F_a) F_b] for F = prod exp i[A^tr(f, tau) - xi(div f, tau)],
/// where Theta reflects tau -> -tau and conjugates.
Eigen::MatrixXcd reflection_gram(const std::vector<std::vector<EuclideanLabel>>& functionals,
                                 double tol = 1e-12);

}  // namespace tglab
