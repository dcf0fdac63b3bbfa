#pragma once

// Weyl elements phase * exp i[A(f) + E(g)] and the automorphisms that act on
// them. Multiplication follows the CCR [A(f), E(g)] = i (f, g):
//
//     W(f1, g1) W(f2, g2) = exp(-i sigma / 2) W(f1 + f2, g1 + g2),
//     sigma = (f1, g2) - (g1, f2).
//
// See docs/conventions.md for every sign choice made here.

#include "tglab/mode_space.hpp"

#include <utility>
#include <variant>

namespace tglab {

class WeylElement {
 public:
  /// Throws std::invalid_argument if f and g use different grids or |phase|
  /// differs from 1 by more than 1e-12.
  WeylElement(VectorFunction f, VectorFunction g, Complex phase = 1.0);

  static WeylElement identity(const GridPtr& grid);

  const VectorFunction& f() const { return f_; }
  const VectorFunction& g() const { return g_; }
  const Complex& phase() const { return phase_; }
  const GridPtr& grid() const { return f_.grid(); }

  WeylElement with_phase(Complex phase) const { return WeylElement(f_, g_, phase); }

 private:
  VectorFunction f_;
  VectorFunction g_;
  Complex phase_;
};

double symplectic(const VectorFunction& f1, const VectorFunction& g1, const VectorFunction& f2,
                  const VectorFunction& g2);
double symplectic(const WeylElement& a, const WeylElement& b);

WeylElement multiply(const WeylElement& a, const WeylElement& b);
WeylElement adjoint(const WeylElement& w);
/// v w v^*, which equals exp(-i sigma(v, w)) w.
WeylElement conjugate_by(const WeylElement& v, const WeylElement& w);

/// Coefficientwise and phase comparison.
bool approx_equal(const WeylElement& a, const WeylElement& b, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Automorphisms.

/// gamma^Lambda: A(f) -> A(f) - (Lambda, div f).
struct SmallGauge {
  ScalarFunction lambda;
};
/// Lambda = alpha . x. Only the gradient and the integrated-by-parts phase
/// exp(+i L^3 alpha . m_f) are used; Lambda itself is not periodic.
struct LargeGauge {
  Vec3 alpha;
};
/// beta^theta: E(g) -> E(g) + theta . integral(g).
struct Theta {
  Vec3 theta;
};
/// Free time evolution alpha_t.
struct TimeShift {
  double t;
};

using AutomorphismSpec = std::variant<SmallGauge, LargeGauge, Theta, TimeShift>;

WeylElement apply_automorphism(const AutomorphismSpec& spec, const WeylElement& w);

/// Free evolution of the smearing pair: alpha_t(A(f) + E(g)) = A(f_t) + E(g_t).
/// Transverse modes rotate with frequency |k|; longitudinal modes and the
/// mean shear, (f, g) -> (f, g + t f).
std::pair<VectorFunction, VectorFunction> evolve_smearings(const VectorFunction& f,
                                                           const VectorFunction& g, double t);

// ---------------------------------------------------------------------------
// Gauss operator G = div E. With G(g) = -E(grad g), exp(i G(g)) = W(0, -grad g).

/// Phase acquired by exp(i A(grad h)) under conjugation by exp(i G(g)),
/// computed through the symplectic form. Throws MeanModeUnsupported unless
/// h and g have zero mean.
Complex gauss_conjugation_phase(const ScalarFunction& h, const ScalarFunction& g);
/// The same phase from the direct pairing exp(i (laplacian h, g)).
Complex gauss_pairing_phase(const ScalarFunction& h, const ScalarFunction& g);

/// V = W(0, grad Lambda) = exp(-i G(Lambda)). Conjugation by V reproduces
/// SmallGauge(Lambda). Throws MeanModeUnsupported unless Lambda has zero mean.
WeylElement gauge_implementer(const ScalarFunction& lambda);

}  // namespace tglab
