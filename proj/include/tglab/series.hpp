#pragma once

// Exact time-correlation representation
//
//     G(t) = sum_a c_a exp(+i omega_a t) + b0 + b1 t.
//
// A term with omega_a > 0 is a positive-energy contribution under the Fourier
// convention G~(w) = (2 pi)^(-1/2) int dt G(t) exp(-i w t) (docs/conventions.md).
// Every term carries the largest spatial momentum |k| that fed it; the linear
// part carries one momentum for b0 and b1 together.

#include <complex>
#include <vector>

namespace tglab {

struct SeriesTerm {
  double omega;
  std::complex<double> coeff;
  double momentum;
};

class QuasiPolynomialSeries {
 public:
  using Complex = std::complex<double>;

  /// Terms whose frequencies agree to 1e-12 (relative) are merged. A zero
  /// coefficient is ignored.
  void add_term(double omega, Complex coeff, double momentum = 0.0);
  void add_linear(Complex b0, Complex b1, double momentum = 0.0);

  const std::vector<SeriesTerm>& terms() const { return terms_; }
  Complex b0() const { return b0_; }
  Complex b1() const { return b1_; }
  double linear_momentum() const { return linear_momentum_; }

  Complex eval(double t) const;
  QuasiPolynomialSeries derivative() const;
  /// t -> G(t + s).
  QuasiPolynomialSeries shifted(double s) const;
  QuasiPolynomialSeries scaled(Complex factor) const;
  QuasiPolynomialSeries& operator+=(const QuasiPolynomialSeries& other);

  bool empty() const { return terms_.empty() && b0_ == Complex{} && b1_ == Complex{}; }

 private:
  std::vector<SeriesTerm> terms_;  // sorted by omega
  Complex b0_{};
  Complex b1_{};
  double linear_momentum_ = 0.0;
};

}  // namespace tglab
