#pragma once

// State evaluators on the gauge field algebra.
//
//   * PositiveNonRegular: the positive, time-invariant, gauge-invariant Weyl
//     state. It vanishes on W(f, g) unless div f = 0 and f has no mean; on the
//     transverse remainder it is the Fock vacuum, and the E-mean is classical.
//   * IndefiniteQuasiFree: the regular, non-positive quasi-free state whose
//     two-point function has a Kallen-Lehmann form over a spectral measure
//     with atoms, plus a linear-in-time longitudinal term.
//   * Either one composed with the theta automorphism (at most once).

#include "tglab/mode_space.hpp"
#include "tglab/series.hpp"
#include "tglab/weyl_algebra.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tglab {

class UnsupportedState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DegreeUnsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SpectralAtom {
  double mass_sq;
  double weight;
};

class SpectralMeasure {
 public:
  /// Throws std::invalid_argument unless atoms are nonempty with distinct
  /// masses m^2 >= 0, positive weights, and Z >= 0.
  explicit SpectralMeasure(std::vector<SpectralAtom> atoms, double contact = 0.0);

  /// Single massless atom of unit weight with Z = 0, which reproduces the
  /// free two-point function.
  static SpectralMeasure free_case();

  const std::vector<SpectralAtom>& atoms() const { return atoms_; }
  double contact() const { return contact_; }
  double total_weight() const;

  /// The equal-time commutator is i (f, g) exactly when the weights sum to
  /// one and Z vanishes: massive atoms cancel between the transverse kernel
  /// and the linear-in-time term, while Z adds i Z (div f, div g).
  bool canonical(double tol = 1e-12) const;

 private:
  std::vector<SpectralAtom> atoms_;
  double contact_;
};

enum class Species { A, E };

/// A(f) or E(f), evolved to time t by the free dynamics.
struct FieldLabel {
  Species species;
  VectorFunction f;
  double t = 0.0;
};

struct PositiveNonRegular {};
struct IndefiniteQuasiFree {
  SpectralMeasure rho;
};

class StateSpec {
 public:
  static StateSpec positive_non_regular() { return StateSpec(PositiveNonRegular{}); }
  static StateSpec indefinite(SpectralMeasure rho = SpectralMeasure::free_case()) {
    return StateSpec(IndefiniteQuasiFree{std::move(rho)});
  }

  /// beta^theta* applied to this state. Throws std::invalid_argument when the
  /// state is already theta-composed.
  StateSpec theta_composed(const Vec3& theta) const;

  bool is_positive() const { return std::holds_alternative<PositiveNonRegular>(base_); }
  bool is_indefinite() const { return std::holds_alternative<IndefiniteQuasiFree>(base_); }
  /// Throws UnsupportedState for the positive state.
  const SpectralMeasure& measure() const;
  const std::optional<Vec3>& theta() const { return theta_; }
  /// Base state without the theta composition.
  StateSpec inner() const { return StateSpec(base_); }

  std::string name() const;

 private:
  explicit StateSpec(std::variant<PositiveNonRegular, IndefiniteQuasiFree> base)
      : base_(std::move(base)) {}

  std::variant<PositiveNonRegular, IndefiniteQuasiFree> base_;
  std::optional<Vec3> theta_;
};

// ---------------------------------------------------------------------------
// Weyl evaluation.

struct EvalFlags {
  /// Value of a non-positive linear functional (indefinite state).
  bool formal = false;
  /// The k = 0 sector of f or g was dropped from the quadratic form.
  bool mean_sector_ignored = false;
  /// Zero because the A-smearing has a longitudinal part or a mean.
  bool nonregular_zero = false;
};

/// Total function; never throws for a valid W on the state's terms.
Complex eval_weyl(const StateSpec& state, const WeylElement& w, double tol = 1e-12);
EvalFlags eval_flags(const StateSpec& state, const WeylElement& w, double tol = 1e-12);

/// Fock-vacuum exponent (f_tr, f_tr/w)/4 + (g_tr, w g_tr)/4 of the transverse
/// parts; the longitudinal part of g and every mean are discarded.
double transverse_exponent(const VectorFunction& f, const VectorFunction& g);

// ---------------------------------------------------------------------------
// Two-point and n-point functions of the indefinite state.

/// <X Y> as an exact series in y0 = t_Y - t_X. Throws UnsupportedState for
/// the positive state and MeanModeUnsupported if either smearing has a mean.
QuasiPolynomialSeries two_point_series(const StateSpec& state, const FieldLabel& x,
                                       const FieldLabel& y);
Complex two_point(const StateSpec& state, const FieldLabel& x, const FieldLabel& y);

/// Massless free kernel written out directly: transverse projector times
/// exp(i|k| y0)/(2|k|) plus (i y0 / 2) k_i k_j / |k|^2, with explicit time
/// derivatives for E labels. Reference for the spectral-measure evaluator.
Complex free_two_point_reference(const FieldLabel& x, const FieldLabel& y);

/// <A(f) E(g)> - <E(g) A(f)> at equal times.
Complex equal_time_commutator(const StateSpec& state, const VectorFunction& f,
                              const VectorFunction& g);

/// Sum over perfect matchings of two-point functions (pairs keep label
/// order). For a theta-composed state every label also carries the classical
/// one-point shift L^3 theta.m_f (E) or t L^3 theta.m_f (A), and the pairings
/// use the smearings with their means removed.
Complex n_point_wick(const StateSpec& state, std::span<const FieldLabel> labels);

/// One-point shift of a label in the theta-composed state.
double theta_one_point(const Vec3& theta, const FieldLabel& label);

// ---------------------------------------------------------------------------
// Single longitudinal mode: q = div A(f_n), p = div E(f_n), [q, p] = i, with
// equal-time kernel <qq> = <pp> = 0, <qp> = i/2, <pq> = -i/2.

/// q^a p^b for a + b <= maxdeg, ordered by total degree and then by
/// decreasing power of q: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<std::pair<int, int>> longitudinal_monomials(int maxdeg);

/// Polynomial in q-then-p ordered monomials: (a, b) -> coefficient of q^a p^b.
using OrderedPolynomial = std::map<std::pair<int, int>, Complex>;

/// (q^a p^b)(q^c p^d) brought to q-then-p order with [q, p] = i.
OrderedPolynomial ordered_product(int a, int b, int c, int d);
/// State value on q^a p^b: a! (i/2)^a if a == b, else 0.
Complex ordered_expectation(int a, int b);

/// Gram matrix <q^a p^b Psi0, q^c p^d Psi0> = Omega(p^b q^a q^c p^d) over
/// longitudinal_monomials(maxdeg). Throws DegreeUnsupported unless maxdeg is
/// 1, 2 or 3.
Eigen::MatrixXcd gram_longitudinal_mode(int maxdeg);

}  // namespace tglab
