#pragma once

// Finite-volume momentum-space substrate.
//
// All fields live on the cubic torus of side L. A smearing function is stored
// as its Fourier coefficients on the modes k = (2 pi / L) n, 0 < |n|_inf <= N,
// plus a separately carried mean (the k = 0 sector):
//
//     f(x) = mean + sum_k fhat(k) exp(i k.x),     fhat(-k) = conj(fhat(k)).

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tglab {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using IVec3 = Eigen::Vector3i;

/// Raised when an operation is singular on the k = 0 sector.
class MeanModeUnsupported : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ModeGrid;
using GridPtr = std::shared_ptr<const ModeGrid>;

class ModeGrid {
 public:
  static GridPtr make(double L, int N);

  double L() const { return L_; }
  int N() const { return N_; }
  double volume() const { return L_ * L_ * L_; }
  std::size_t size() const { return n_.size(); }

  const IVec3& n(std::size_t i) const { return n_[i]; }
  const Vec3& k(std::size_t i) const { return k_[i]; }
  double kmag(std::size_t i) const { return kmag_[i]; }
  double kmag2(std::size_t i) const { return kmag_[i] * kmag_[i]; }

  /// Index of the mode -k. Modes are stored in lexicographic order of n, so
  /// this is size() - 1 - i.
  std::size_t partner(std::size_t i) const { return n_.size() - 1 - i; }
  /// True for exactly one member of every (k, -k) pair.
  bool is_representative(std::size_t i) const { return i < partner(i); }

  std::optional<std::size_t> index_of(const IVec3& n) const;

  bool same_as(const ModeGrid& other) const {
    return L_ == other.L_ && N_ == other.N_;
  }

 private:
  ModeGrid(double L, int N);

  double L_;
  int N_;
  std::vector<IVec3> n_;
  std::vector<Vec3> k_;
  std::vector<double> kmag_;
};

void require_same_grid(const ModeGrid& a, const ModeGrid& b);

namespace detail {
inline double coeff_abs(const Complex& c) { return std::abs(c); }
inline double coeff_abs(const CVec3& c) { return c.norm(); }
inline Complex coeff_conj(const Complex& c) { return std::conj(c); }
inline CVec3 coeff_conj(const CVec3& c) { return c.conjugate(); }
inline double mean_abs(double m) { return std::abs(m); }
inline double mean_abs(const Vec3& m) { return m.norm(); }
template <typename Mean>
Mean zero_mean();
template <>
inline double zero_mean<double>() { return 0.0; }
template <>
inline Vec3 zero_mean<Vec3>() { return Vec3::Zero(); }
template <typename Coeff>
Coeff zero_coeff();
template <>
inline Complex zero_coeff<Complex>() { return Complex{}; }
template <>
inline CVec3 zero_coeff<CVec3>() { return CVec3::Zero(); }
}  // namespace detail

/// Real test function (scalar or vector valued) in mode space. Immutable
/// value type: every operation returns a new function.
template <typename Coeff, typename Mean>
class TestFunction {
 public:
  using coeff_type = Coeff;
  using mean_type = Mean;

  /// Validates the reality condition fhat(-k) = conj(fhat(k)) to 1e-12
  /// relative to the largest coefficient. Throws std::invalid_argument.
  TestFunction(GridPtr grid, std::vector<Coeff> coeffs, Mean mean);

  static TestFunction zero(GridPtr grid) {
    return TestFunction(grid, std::vector<Coeff>(grid->size(), detail::zero_coeff<Coeff>()),
                        detail::zero_mean<Mean>());
  }
  static TestFunction constant(GridPtr grid, const Mean& mean) {
    return zero(grid).with_mean(mean);
  }

  /// Sets fhat(n) = c and fhat(-n) = conj(c).
  TestFunction with_mode(const IVec3& n, const Coeff& c) const;
  TestFunction with_mean(const Mean& m) const {
    TestFunction out = *this;
    out.mean_ = m;
    return out;
  }

  const GridPtr& grid() const { return grid_; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }
  const Coeff& operator[](std::size_t i) const { return coeffs_[i]; }
  const Mean& mean() const { return mean_; }

  bool has_zero_mean(double tol = 0.0) const { return detail::mean_abs(mean_) <= tol; }
  /// Largest coefficient magnitude, mean sector included.
  double max_abs() const;
  /// True when every coefficient and the mean are below tol * max(1, scale).
  bool is_zero(double tol, double scale = 0.0) const;

  TestFunction operator-() const;
  friend TestFunction operator+(TestFunction a, const TestFunction& b) {
    require_same_grid(*a.grid_, *b.grid_);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    a.mean_ += b.mean_;
    return a;
  }
  friend TestFunction operator-(const TestFunction& a, const TestFunction& b) { return a + (-b); }
  friend TestFunction operator*(double s, TestFunction a) {
    for (auto& c : a.coeffs_) c *= s;
    a.mean_ *= s;
    return a;
  }

 private:
  GridPtr grid_;
  std::vector<Coeff> coeffs_;
  Mean mean_;
};

using ScalarFunction = TestFunction<Complex, double>;
using VectorFunction = TestFunction<CVec3, Vec3>;

extern template class TestFunction<Complex, double>;
extern template class TestFunction<CVec3, Vec3>;

// ---------------------------------------------------------------------------
// Differential operators and projections (all per-mode multipliers).

/// (div f)^(k) = i k . fhat(k); the mean of the result is 0.
ScalarFunction divergence(const VectorFunction& f);
/// (grad h)^(k) = i k hhat(k); the mean of the result is 0.
VectorFunction gradient(const ScalarFunction& h);
/// -|k|^2 hhat(k); the mean of the result is 0.
ScalarFunction laplacian(const ScalarFunction& h);
/// -hhat(k) / |k|^2. Throws MeanModeUnsupported unless h.mean() == 0.
ScalarFunction inverse_laplacian(const ScalarFunction& h);
/// P^tr_ij(k) = delta_ij - k_i k_j / |k|^2 on every mode; mean copied.
VectorFunction transverse_project(const VectorFunction& f);
/// k_i k_j / |k|^2 on every mode; mean dropped.
VectorFunction longitudinal_project(const VectorFunction& f);
/// Component along k only, mean kept: the sector that evolves like a free
/// particle under the free dynamics.
VectorFunction longitudinal_and_mean(const VectorFunction& f);

/// f_x(y) = f(y - x), i.e. fhat(k) -> exp(-i k.x) fhat(k).
ScalarFunction translate(const ScalarFunction& f, const Vec3& x);
VectorFunction translate(const VectorFunction& f, const Vec3& x);

// ---------------------------------------------------------------------------
// Inner products.

/// Parseval pairing (f, g) = L^3 sum_k conj(fhat).ghat + L^3 m_f.m_g.
double inner(const ScalarFunction& f, const ScalarFunction& g);
double inner(const VectorFunction& f, const VectorFunction& g);
/// Dynamical-mode pairing L^3 sum_k conj(fhat).ghat |k|^p (mean excluded).
double omega_inner(const VectorFunction& f, const VectorFunction& g, int p);
double omega_inner(const ScalarFunction& f, const ScalarFunction& g, int p);

/// max_k |k.fhat(k)| <= tol * max_k |k||fhat(k)|. The scale is the
/// function's own, so s*f gets the same verdict for every s != 0.
bool divergence_free(const VectorFunction& f, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Position space (quadrature cross-checks only).

double evaluate(const ScalarFunction& f, const Vec3& x);
Vec3 evaluate(const VectorFunction& f, const Vec3& x);
/// Integral of f.g by the (2N+1)^3-point trapezoidal rule, which is exact
/// for products of band-limited functions on this grid.
double quadrature_inner(const ScalarFunction& f, const ScalarFunction& g);
double quadrature_inner(const VectorFunction& f, const VectorFunction& g);

}  // namespace tglab
