#include "tglab/mode_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tglab {

ModeGrid::ModeGrid(double L, int N) : L_(L), N_(N) {
  const double unit = 2.0 * std::numbers::pi / L;
  for (int a = -N; a <= N; ++a) {
    for (int b = -N; b <= N; ++b) {
      for (int c = -N; c <= N; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        IVec3 n(a, b, c);
        n_.push_back(n);
        k_.push_back(unit * n.cast<double>());
        kmag_.push_back(k_.back().norm());
      }
    }
  }
}

GridPtr ModeGrid::make(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("ModeGrid: L must be positive, got " + std::to_string(L));
  }
  if (N < 1) {
    throw std::invalid_argument("ModeGrid: N must be >= 1, got " + std::to_string(N));
  }
  return GridPtr(new ModeGrid(L, N));
}

std::optional<std::size_t> ModeGrid::index_of(const IVec3& n) const {
  if (n.cwiseAbs().maxCoeff() > N_ || n.isZero()) return std::nullopt;
  const int side = 2 * N_ + 1;
  const std::size_t cube = static_cast<std::size_t>(((n[0] + N_) * side + (n[1] + N_)) * side +
                                                    (n[2] + N_));
  const std::size_t center = (static_cast<std::size_t>(side) * side * side - 1) / 2;
  return cube < center ? cube : cube - 1;
}

void require_same_grid(const ModeGrid& a, const ModeGrid& b) {
  if (!a.same_as(b)) {
    throw std::invalid_argument("test functions live on different mode grids");
  }
}

// ---------------------------------------------------------------------------

template <typename Coeff, typename Mean>
TestFunction<Coeff, Mean>::TestFunction(GridPtr grid, std::vector<Coeff> coeffs, Mean mean)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)), mean_(std::move(mean)) {
  if (!grid_) throw std::invalid_argument("TestFunction: null grid");
  if (coeffs_.size() != grid_->size()) {
    throw std::invalid_argument("TestFunction: coefficient count does not match grid");
  }
  if (detail::mean_abs(mean_) != detail::mean_abs(mean_)) {
    throw std::invalid_argument("TestFunction: mean is NaN");
  }
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, detail::coeff_abs(c));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& c = coeffs_[i];
    const auto& p = coeffs_[grid_->partner(i)];
    if (detail::coeff_abs(Coeff(p - detail::coeff_conj(c))) > tol) {
      throw std::invalid_argument("TestFunction: reality condition fhat(-k) = conj(fhat(k)) violated");
    }
  }
}

template <typename Coeff, typename Mean>
TestFunction<Coeff, Mean> TestFunction<Coeff, Mean>::with_mode(const IVec3& n,
                                                               const Coeff& c) const {
  const auto idx = grid_->index_of(n);
  if (!idx) throw std::invalid_argument("with_mode: mode outside the grid (or zero mode)");
  TestFunction out = *this;
  out.coeffs_[*idx] = c;
  out.coeffs_[grid_->partner(*idx)] = detail::coeff_conj(c);
  return out;
}

template <typename Coeff, typename Mean>
double TestFunction<Coeff, Mean>::max_abs() const {
  double m = detail::mean_abs(mean_);
  for (const auto& c : coeffs_) m = std::max(m, detail::coeff_abs(c));
  return m;
}

template <typename Coeff, typename Mean>
bool TestFunction<Coeff, Mean>::is_zero(double tol, double scale) const {
  return max_abs() <= tol * std::max(1.0, scale);
}

template <typename Coeff, typename Mean>
TestFunction<Coeff, Mean> TestFunction<Coeff, Mean>::operator-() const {
  return -1.0 * (*this);
}

template class TestFunction<Complex, double>;
template class TestFunction<CVec3, Vec3>;

// ---------------------------------------------------------------------------

namespace {
constexpr Complex kI{0.0, 1.0};
}

ScalarFunction divergence(const VectorFunction& f) {
  const auto& grid = *f.grid();
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = kI * grid.k(i).cast<Complex>().dot(f[i]);
  }
  return ScalarFunction(f.grid(), std::move(out), 0.0);
}

VectorFunction gradient(const ScalarFunction& h) {
  const auto& grid = *h.grid();
  std::vector<CVec3> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = kI * h[i] * grid.k(i).cast<Complex>();
  return VectorFunction(h.grid(), std::move(out), Vec3::Zero());
}

ScalarFunction laplacian(const ScalarFunction& h) {
  const auto& grid = *h.grid();
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = -grid.kmag2(i) * h[i];
  return ScalarFunction(h.grid(), std::move(out), 0.0);
}

ScalarFunction inverse_laplacian(const ScalarFunction& h) {
  if (h.mean() != 0.0) {
    throw MeanModeUnsupported("inverse_laplacian: function has nonzero mean " +
                              std::to_string(h.mean()));
  }
  const auto& grid = *h.grid();
  std::vector<Complex> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = -h[i] / grid.kmag2(i);
  return ScalarFunction(h.grid(), std::move(out), 0.0);
}

namespace {
CVec3 longitudinal_part(const Vec3& k, double k2, const CVec3& c) {
  const Eigen::Vector3cd kc = k.cast<Complex>();
  return kc * (kc.dot(c) / k2);  // Eigen's dot conjugates the left argument; k is real
}
}  // namespace

VectorFunction transverse_project(const VectorFunction& f) {
  const auto& grid = *f.grid();
  std::vector<CVec3> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = f[i] - longitudinal_part(grid.k(i), grid.kmag2(i), f[i]);
  }
  return VectorFunction(f.grid(), std::move(out), f.mean());
}

VectorFunction longitudinal_project(const VectorFunction& f) {
  const auto& grid = *f.grid();
  std::vector<CVec3> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = longitudinal_part(grid.k(i), grid.kmag2(i), f[i]);
  }
  return VectorFunction(f.grid(), std::move(out), Vec3::Zero());
}

VectorFunction longitudinal_and_mean(const VectorFunction& f) {
  return longitudinal_project(f).with_mean(f.mean());
}

namespace {
template <typename Fn>
Fn translate_impl(const Fn& f, const Vec3& x) {
  const auto& grid = *f.grid();
  std::vector<typename Fn::coeff_type> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = f[i] * std::polar(1.0, -grid.k(i).dot(x));
  }
  return Fn(f.grid(), std::move(out), f.mean());
}

inline Complex pair(const Complex& a, const Complex& b) { return std::conj(a) * b; }
inline Complex pair(const CVec3& a, const CVec3& b) { return a.dot(b); }
inline double pair_mean(double a, double b) { return a * b; }
inline double pair_mean(const Vec3& a, const Vec3& b) { return a.dot(b); }

template <typename Fn>
double inner_impl(const Fn& f, const Fn& g) {
  require_same_grid(*f.grid(), *g.grid());
  Complex acc{};
  for (std::size_t i = 0; i < f.grid()->size(); ++i) acc += pair(f[i], g[i]);
  return f.grid()->volume() * (acc.real() + pair_mean(f.mean(), g.mean()));
}

template <typename Fn>
double omega_inner_impl(const Fn& f, const Fn& g, int p) {
  require_same_grid(*f.grid(), *g.grid());
  const auto& grid = *f.grid();
  Complex acc{};
  for (std::size_t i = 0; i < grid.size(); ++i) acc += pair(f[i], g[i]) * std::pow(grid.kmag(i), p);
  return grid.volume() * acc.real();
}
}  // namespace

ScalarFunction translate(const ScalarFunction& f, const Vec3& x) { return translate_impl(f, x); }
VectorFunction translate(const VectorFunction& f, const Vec3& x) { return translate_impl(f, x); }

double inner(const ScalarFunction& f, const ScalarFunction& g) { return inner_impl(f, g); }
double inner(const VectorFunction& f, const VectorFunction& g) { return inner_impl(f, g); }
double omega_inner(const VectorFunction& f, const VectorFunction& g, int p) {
  return omega_inner_impl(f, g, p);
}
double omega_inner(const ScalarFunction& f, const ScalarFunction& g, int p) {
  return omega_inner_impl(f, g, p);
}

bool divergence_free(const VectorFunction& f, double tol) {
  const auto& grid = *f.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(grid.k(i).cast<Complex>().dot(f[i])));
    scale = std::max(scale, grid.kmag(i) * f[i].norm());
  }
  return worst <= tol * scale;
}

// ---------------------------------------------------------------------------

double evaluate(const ScalarFunction& f, const Vec3& x) {
  const auto& grid = *f.grid();
  Complex acc = f.mean();
  for (std::size_t i = 0; i < grid.size(); ++i) acc += f[i] * std::polar(1.0, grid.k(i).dot(x));
  return acc.real();
}

Vec3 evaluate(const VectorFunction& f, const Vec3& x) {
  const auto& grid = *f.grid();
  CVec3 acc = f.mean().cast<Complex>();
  for (std::size_t i = 0; i < grid.size(); ++i) acc += f[i] * std::polar(1.0, grid.k(i).dot(x));
  return acc.real();
}

namespace {
template <typename Fn, typename Dot>
double quadrature_impl(const Fn& f, const Fn& g, Dot dot) {
  require_same_grid(*f.grid(), *g.grid());
  const auto& grid = *f.grid();
  const int m = 2 * grid.N() + 1;
  const double h = grid.L() / m;
  double acc = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        const Vec3 x(a * h, b * h, c * h);
        acc += dot(evaluate(f, x), evaluate(g, x));
      }
    }
  }
  return acc * h * h * h;
}
}  // namespace

double quadrature_inner(const ScalarFunction& f, const ScalarFunction& g) {
  return quadrature_impl(f, g, [](double a, double b) { return a * b; });
}
double quadrature_inner(const VectorFunction& f, const VectorFunction& g) {
  return quadrature_impl(f, g, [](const Vec3& a, const Vec3& b) { return a.dot(b); });
}

}  // namespace tglab
