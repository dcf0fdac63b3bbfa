#include "tglab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tglab {

namespace {
constexpr Complex kI{0.0, 1.0};

Complex unit_phase(double angle) { return std::polar(1.0, angle); }
}  // namespace

// ---------------------------------------------------------------------------

SpectralMeasure::SpectralMeasure(std::vector<SpectralAtom> atoms, double contact)
    : atoms_(std::move(atoms)), contact_(contact) {
  if (atoms_.empty()) throw std::invalid_argument("SpectralMeasure: no atoms");
  if (!(contact_ >= 0.0)) throw std::invalid_argument("SpectralMeasure: Z must be >= 0");
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (!(atoms_[a].mass_sq >= 0.0)) {
      throw std::invalid_argument("SpectralMeasure: m^2 must be >= 0");
    }
    if (!(atoms_[a].weight > 0.0)) {
      throw std::invalid_argument("SpectralMeasure: weights must be positive");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (atoms_[a].mass_sq == atoms_[b].mass_sq) {
        throw std::invalid_argument("SpectralMeasure: masses must be distinct");
      }
    }
  }
}

SpectralMeasure SpectralMeasure::free_case() { return SpectralMeasure({{0.0, 1.0}}, 0.0); }

double SpectralMeasure::total_weight() const {
  return std::accumulate(atoms_.begin(), atoms_.end(), 0.0,
                         [](double acc, const SpectralAtom& a) { return acc + a.weight; });
}

bool SpectralMeasure::canonical(double tol) const {
  return std::abs(total_weight() - 1.0) <= tol && contact_ == 0.0;
}

StateSpec StateSpec::theta_composed(const Vec3& theta) const {
  if (theta_) throw std::invalid_argument("theta composition may be applied only once");
  StateSpec out = *this;
  out.theta_ = theta;
  return out;
}

const SpectralMeasure& StateSpec::measure() const {
  if (const auto* s = std::get_if<IndefiniteQuasiFree>(&base_)) return s->rho;
  throw UnsupportedState("the positive non-regular state has no field correlation functions");
}

std::string StateSpec::name() const {
  std::ostringstream os;
  os << (is_positive() ? "positive-nonregular" : "indefinite-quasifree");
  if (theta_) os << "+theta(" << (*theta_)[0] << "," << (*theta_)[1] << "," << (*theta_)[2] << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

double transverse_exponent(const VectorFunction& f, const VectorFunction& g) {
  const auto ftr = transverse_project(f);
  const auto gtr = transverse_project(g);
  return 0.25 * (omega_inner(ftr, ftr, -1) + omega_inner(gtr, gtr, +1));
}

namespace {

bool mean_negligible(const VectorFunction& f, double tol) {
  return f.mean().norm() <= tol * f.max_abs();
}

bool nonregular_vanishes(const WeylElement& w, double tol) {
  return !divergence_free(w.f(), tol) || !mean_negligible(w.f(), tol);
}

Complex theta_character(const StateSpec& state, const WeylElement& w) {
  if (!state.theta()) return 1.0;
  return unit_phase(w.grid()->volume() * state.theta()->dot(w.g().mean()));
}

Complex indefinite_weyl(const StateSpec& state, const WeylElement& w) {
  const auto base = state.inner();
  const auto f = w.f().with_mean(Vec3::Zero());
  const auto g = w.g().with_mean(Vec3::Zero());
  const FieldLabel af{Species::A, f, 0.0};
  const FieldLabel eg{Species::E, g, 0.0};
  const Complex q = two_point(base, af, af) + two_point(base, af, eg) + two_point(base, eg, af) +
                    two_point(base, eg, eg);
  return w.phase() * std::exp(-0.5 * q);
}

}  // namespace

Complex eval_weyl(const StateSpec& state, const WeylElement& w, double tol) {
  if (state.is_positive()) {
    if (nonregular_vanishes(w, tol)) return 0.0;
    return w.phase() * std::exp(-transverse_exponent(w.f(), w.g())) * theta_character(state, w);
  }
  return indefinite_weyl(state, w) * theta_character(state, w);
}

EvalFlags eval_flags(const StateSpec& state, const WeylElement& w, double tol) {
  EvalFlags flags;
  if (state.is_positive()) {
    flags.nonregular_zero = nonregular_vanishes(w, tol);
  } else {
    flags.formal = true;
    flags.mean_sector_ignored = !w.f().has_zero_mean() || !w.g().has_zero_mean();
  }
  return flags;
}

// ---------------------------------------------------------------------------

namespace {

void require_dynamical(const FieldLabel& x) {
  if (!x.f.has_zero_mean()) {
    std::ostringstream os;
    os << "two_point: smearing has mean (" << x.f.mean().transpose()
       << "); the massless kernel is undefined on the k = 0 sector";
    throw MeanModeUnsupported(os.str());
  }
}

/// <A(f1, t_X) A(f2, t_Y)> as a series in y0 = t_Y - t_X.
QuasiPolynomialSeries kernel_aa(const SpectralMeasure& rho, const VectorFunction& f1,
                                const VectorFunction& f2) {
  require_same_grid(*f1.grid(), *f2.grid());
  const auto& grid = *f1.grid();
  const double vol = grid.volume();
  QuasiPolynomialSeries out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3cd kc = grid.k(i).cast<Complex>();
    const double k2 = grid.kmag2(i);
    const Complex plain = f1[i].dot(f2[i]);
    const Complex along = std::conj(kc.dot(f1[i])) * kc.dot(f2[i]);
    if (plain == Complex{} && along == Complex{}) continue;
    double longitudinal = rho.contact();
    for (const auto& atom : rho.atoms()) {
      const double shell = k2 + atom.mass_sq;
      const double omega = std::sqrt(shell);
      Complex cross = plain - along / shell;
      // Cancellation residue of a longitudinal pair on a massless shell.
      if (std::abs(cross) <= 1e-14 * std::abs(plain)) cross = 0.0;
      out.add_term(omega, vol * atom.weight * cross / (2.0 * omega), grid.kmag(i));
      longitudinal += atom.weight / shell;
    }
    out.add_linear(Complex{}, 0.5 * kI * vol * along * longitudinal, grid.kmag(i));
  }
  return out;
}

}  // namespace

QuasiPolynomialSeries two_point_series(const StateSpec& state, const FieldLabel& x,
                                       const FieldLabel& y) {
  const auto& rho = state.measure();
  require_dynamical(x);
  require_dynamical(y);
  // Zero-mean labels carry no theta shift, so the composed state agrees with
  // its base state here.
  auto series = kernel_aa(rho, x.f, y.f);
  if (y.species == Species::E) series = series.derivative();
  if (x.species == Species::E) series = series.derivative().scaled(-1.0);
  return series;
}

Complex two_point(const StateSpec& state, const FieldLabel& x, const FieldLabel& y) {
  return two_point_series(state, x, y).eval(y.t - x.t);
}

Complex free_two_point_reference(const FieldLabel& x, const FieldLabel& y) {
  require_dynamical(x);
  require_dynamical(y);
  require_same_grid(*x.f.grid(), *y.f.grid());
  const auto& grid = *x.f.grid();
  const double y0 = y.t - x.t;
  const auto px = transverse_project(x.f);
  const auto py = transverse_project(y.f);
  const auto dx = divergence(x.f);
  const auto dy = divergence(y.f);

  Complex transverse{};
  Complex longitudinal{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.kmag(i);
    Complex factor = std::exp(kI * w * y0) / (2.0 * w);
    if (y.species == Species::E) factor *= kI * w;
    if (x.species == Species::E) factor *= -kI * w;
    transverse += px[i].dot(py[i]) * factor;
    longitudinal += std::conj(dx[i]) * dy[i] / grid.kmag2(i);
  }
  // (f, d_i d_j laplacian^-1 g) = -(div f, laplacian^-1 div g).
  double time_factor = 0.0;
  if (x.species == Species::A && y.species == Species::A) time_factor = y0;
  if (x.species == Species::A && y.species == Species::E) time_factor = 1.0;
  if (x.species == Species::E && y.species == Species::A) time_factor = -1.0;
  return grid.volume() * (transverse + 0.5 * kI * time_factor * longitudinal);
}

Complex equal_time_commutator(const StateSpec& state, const VectorFunction& f,
                              const VectorFunction& g) {
  const FieldLabel af{Species::A, f, 0.0};
  const FieldLabel eg{Species::E, g, 0.0};
  return two_point(state, af, eg) - two_point(state, eg, af);
}

double theta_one_point(const Vec3& theta, const FieldLabel& label) {
  const double base = label.f.grid()->volume() * theta.dot(label.f.mean());
  return label.species == Species::E ? base : label.t * base;
}

namespace {

Complex wick_recursive(const StateSpec& state, std::span<const FieldLabel> labels,
                       std::vector<std::size_t>& open) {
  if (open.empty()) return 1.0;
  if (open.size() % 2 == 1) return 0.0;
  const std::size_t first = open.front();
  Complex total{};
  for (std::size_t j = 1; j < open.size(); ++j) {
    const std::size_t partner = open[j];
    std::vector<std::size_t> rest;
    rest.reserve(open.size() - 2);
    for (std::size_t m = 1; m < open.size(); ++m) {
      if (m != j) rest.push_back(open[m]);
    }
    const Complex pairing = two_point(state, labels[first], labels[partner]);
    if (pairing == Complex{}) continue;
    total += pairing * wick_recursive(state, labels, rest);
  }
  return total;
}

}  // namespace

Complex n_point_wick(const StateSpec& state, std::span<const FieldLabel> labels) {
  if (state.is_positive()) {
    throw UnsupportedState("n_point_wick: the positive non-regular state has no field moments");
  }
  const auto base = state.inner();
  const std::size_t n = labels.size();
  if (n > 20) throw std::invalid_argument("n_point_wick: too many labels");

  // Under theta the mean of a smearing is carried by the classical shift; the
  // pairings see only its dynamical part.
  std::vector<double> shift(n, 0.0);
  std::vector<FieldLabel> stripped(labels.begin(), labels.end());
  if (!state.theta()) {
    for (const auto& l : labels) require_dynamical(l);
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      shift[j] = theta_one_point(*state.theta(), labels[j]);
      stripped[j].f = labels[j].f.with_mean(Vec3::Zero());
    }
  }

  // Omega_theta(prod (X_j + s_j)) = sum over kept subsets S of
  // prod_{j not in S} s_j * Omega(prod_{j in S} X_j).
  Complex total{};
  const std::size_t subsets = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::size_t> kept;
    double classical = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) {
        kept.push_back(j);
      } else {
        classical *= shift[j];
      }
    }
    if (classical == 0.0 || kept.size() % 2 == 1) continue;
    total += classical * wick_recursive(base, stripped, kept);
  }
  return total;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<int, int>> longitudinal_monomials(int maxdeg) {
  std::vector<std::pair<int, int>> out;
  for (int deg = 0; deg <= maxdeg; ++deg) {
    for (int a = deg; a >= 0; --a) out.emplace_back(a, deg - a);
  }
  return out;
}

namespace {
double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}
double factorial(int n) {
  double r = 1.0;
  for (int j = 2; j <= n; ++j) r *= j;
  return r;
}
}  // namespace

OrderedPolynomial ordered_product(int a, int b, int c, int d) {
  // p^b q^c = sum_j C(b,j) C(c,j) j! (-i)^j q^(c-j) p^(b-j), from [p, q] = -i.
  OrderedPolynomial out;
  Complex minus_i_pow = 1.0;
  for (int j = 0; j <= std::min(b, c); ++j) {
    const Complex coeff = binomial(b, j) * binomial(c, j) * factorial(j) * minus_i_pow;
    out[{a + c - j, b - j + d}] += coeff;
    minus_i_pow *= -kI;
  }
  return out;
}

Complex ordered_expectation(int a, int b) {
  if (a != b) return 0.0;
  return factorial(a) * std::pow(0.5 * kI, a);
}

Eigen::MatrixXcd gram_longitudinal_mode(int maxdeg) {
  if (maxdeg < 1 || maxdeg > 3) {
    throw DegreeUnsupported("gram_longitudinal_mode: maxdeg must be 1, 2 or 3, got " +
                            std::to_string(maxdeg));
  }
  const auto basis = longitudinal_monomials(maxdeg);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd gram(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto [a, b] = basis[r];
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto [cq, dp] = basis[c];
      // (q^a p^b)^* q^c p^d = p^b q^(a+c) p^d = (q^0 p^b)(q^(a+c) p^d).
      Complex value{};
      for (const auto& [mono, coeff] : ordered_product(0, b, a + cq, dp)) {
        value += coeff * ordered_expectation(mono.first, mono.second);
      }
      gram(r, c) = value;
    }
  }
  return gram;
}

}  // namespace tglab
