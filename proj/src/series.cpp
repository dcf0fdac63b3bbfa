#include "tglab/series.hpp"

#include <algorithm>
#include <cmath>

namespace tglab {

void QuasiPolynomialSeries::add_term(double omega, Complex coeff, double momentum) {
  if (coeff == Complex{}) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), omega,
                             [](const SeriesTerm& t, double w) { return t.omega < w; });
  const double tol = 1e-12 * std::max(1.0, std::abs(omega));
  auto match = terms_.end();
  if (it != terms_.end() && std::abs(it->omega - omega) <= tol) match = it;
  if (match == terms_.end() && it != terms_.begin() && std::abs((it - 1)->omega - omega) <= tol) {
    match = it - 1;
  }
  if (match != terms_.end()) {
    match->coeff += coeff;
    match->momentum = std::max(match->momentum, momentum);
    return;
  }
  terms_.insert(it, SeriesTerm{omega, coeff, momentum});
}

void QuasiPolynomialSeries::add_linear(Complex b0, Complex b1, double momentum) {
  if (b0 == Complex{} && b1 == Complex{}) return;
  b0_ += b0;
  b1_ += b1;
  linear_momentum_ = std::max(linear_momentum_, momentum);
}

std::complex<double> QuasiPolynomialSeries::eval(double t) const {
  Complex acc = b0_ + b1_ * t;
  for (const auto& term : terms_) acc += term.coeff * std::polar(1.0, term.omega * t);
  return acc;
}

QuasiPolynomialSeries QuasiPolynomialSeries::derivative() const {
  QuasiPolynomialSeries out;
  for (const auto& term : terms_) {
    out.add_term(term.omega, Complex(0.0, term.omega) * term.coeff, term.momentum);
  }
  out.add_linear(b1_, Complex{}, linear_momentum_);
  return out;
}

QuasiPolynomialSeries QuasiPolynomialSeries::shifted(double s) const {
  QuasiPolynomialSeries out;
  for (const auto& term : terms_) {
    out.add_term(term.omega, term.coeff * std::polar(1.0, term.omega * s), term.momentum);
  }
  out.add_linear(b0_ + b1_ * s, b1_, linear_momentum_);
  return out;
}

QuasiPolynomialSeries QuasiPolynomialSeries::scaled(Complex factor) const {
  QuasiPolynomialSeries out;
  for (const auto& term : terms_) out.add_term(term.omega, term.coeff * factor, term.momentum);
  out.add_linear(b0_ * factor, b1_ * factor, linear_momentum_);
  return out;
}

QuasiPolynomialSeries& QuasiPolynomialSeries::operator+=(const QuasiPolynomialSeries& other) {
  for (const auto& term : other.terms_) add_term(term.omega, term.coeff, term.momentum);
  add_linear(other.b0_, other.b1_, other.linear_momentum_);
  return *this;
}

}  // namespace tglab
