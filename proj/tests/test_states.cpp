#include "tglab/states.hpp"

#include "test_support.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace tglab;
using tglab::testing::Sampler;
using tglab::testing::single_mode;
using tglab::testing::torus;
using tglab::testing::unit_transverse;

namespace {

constexpr Complex kI{0.0, 1.0};

const StateSpec kPositive = StateSpec::positive_non_regular();

VectorFunction zero_v(const GridPtr& g) { return VectorFunction::zero(g); }

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().minCoeff();
}

SpectralMeasure random_admissible(Sampler& s) {
  const int count = s.integer(1, 3);
  std::vector<SpectralAtom> atoms;
  double total = 0.0;
  for (int a = 0; a < count; ++a) {
    atoms.push_back({a == 0 ? 0.0 : s.uniform(0.1, 4.0) + a, s.uniform(0.1, 1.0)});
    total += atoms.back().weight;
  }
  for (auto& a : atoms) a.weight /= total;
  return SpectralMeasure(atoms, 0.0);
}

FieldLabel random_label(Sampler& s, const GridPtr& grid) {
  return {s.integer(0, 1) ? Species::A : Species::E, s.vector(grid), 2.0 * s.normal()};
}

/// Ground-state expectation of cos(q) for H = (p^2 + w^2 q^2)/2 by quadrature.
double oscillator_cos_expectation(double w) {
  const int n = 20000;
  const double a = 12.0 / std::sqrt(w);
  const double h = 2.0 * a / n;
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double q = -a + j * h;
    const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
    sum += weight * std::sqrt(w / M_PI) * std::exp(-w * q * q) * std::cos(q);
  }
  return sum * h;
}

/// Perfect matchings enumerated as permutations with ordered pairs and
/// increasing pair leaders.
Complex brute_force_wick(const Eigen::MatrixXcd& pair) {
  const int n = static_cast<int>(pair.rows());
  if (n % 2 == 1) return 0.0;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Complex total{};
  do {
    bool ok = true;
    for (int j = 0; j + 1 < n && ok; j += 2) {
      ok = p[j] < p[j + 1] && (j == 0 || p[j - 2] < p[j]);
    }
    if (!ok) continue;
    Complex term = 1.0;
    for (int j = 0; j < n; j += 2) term *= pair(p[j], p[j + 1]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

/// Omega of a word in q and p from the equal-time pair kernel.
Complex word_expectation(const std::string& word) {
  const int n = static_cast<int>(word.size());
  Eigen::MatrixXcd pair = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (word[i] == 'q' && word[j] == 'p') pair(i, j) = 0.5 * kI;
      if (word[i] == 'p' && word[j] == 'q') pair(i, j) = -0.5 * kI;
    }
  }
  return n == 0 ? Complex(1.0) : brute_force_wick(pair);
}

}  // namespace

// ---------------------------------------------------------------------------
// Positive non-regular state.

TEST(PositiveState, VanishesOnLongitudinalA) {
  const auto grid = torus();
  const auto dh = gradient(single_mode(grid));
  EXPECT_EQ(eval_weyl(kPositive, WeylElement(dh, zero_v(grid))), Complex(0.0));
  EXPECT_TRUE(eval_flags(kPositive, WeylElement(dh, zero_v(grid))).nonregular_zero);
  Sampler s(201);
  for (int r = 0; r < 100; ++r) {
    const WeylElement w(s.vector(grid), s.vector(grid, true));
    ASSERT_FALSE(divergence_free(w.f()));
    EXPECT_EQ(eval_weyl(kPositive, w), Complex(0.0));
  }
}

TEST(PositiveState, VanishesOnAMean) {
  const auto grid = torus();
  Sampler s(203);
  const auto f = s.transverse(grid).with_mean(Vec3(0.0, 0.0, 1e-3));
  EXPECT_EQ(eval_weyl(kPositive, WeylElement(f, zero_v(grid))), Complex(0.0));
}

TEST(PositiveState, GaugeElementOfEIsOne) {
  const auto grid = torus();
  const auto dk = gradient(single_mode(grid, Complex(0.4, -0.9)));
  EXPECT_NEAR(std::abs(eval_weyl(kPositive, WeylElement(zero_v(grid), dk)) - 1.0), 0.0, 1e-15);
}

TEST(PositiveState, UnitModeMatchesOscillatorGroundState) {
  const auto grid = torus();
  const auto u = unit_transverse(grid);
  const Complex v = eval_weyl(kPositive, WeylElement(u, zero_v(grid)));
  EXPECT_NEAR(v.real(), std::exp(-0.25), 1e-15);
  EXPECT_NEAR(v.real(), oscillator_cos_expectation(1.0), 1e-12);
  EXPECT_EQ(v.imag(), 0.0);
  // E(u) has variance (u, w u)/2 = 1/2 as well.
  EXPECT_NEAR(eval_weyl(kPositive, WeylElement(zero_v(grid), u)).real(), oscillator_cos_expectation(1.0), 1e-12);
}

TEST(PositiveState, InvariantUnderLongitudinalShiftOfG) {
  Sampler s(205);
  const auto grid = torus(2);
  for (int r = 0; r < 50; ++r) {
    const WeylElement w(s.transverse(grid), s.vector(grid, true), std::polar(1.0, s.uniform(-3, 3)));
    const WeylElement shifted(w.f(), w.g() + gradient(s.scalar(grid)), w.phase());
    EXPECT_LE(std::abs(eval_weyl(kPositive, w) - eval_weyl(kPositive, shifted)), 1e-12);
  }
}

TEST(PositiveState, TimeInvariance) {
  Sampler s(207);
  const auto grid = torus(2);
  for (int r = 0; r < 20; ++r) {
    const WeylElement obs(s.transverse(grid), s.vector(grid, true), std::polar(1.0, s.uniform(-3, 3)));
    const WeylElement any = s.weyl(grid);
    const double t = 4.0 * s.normal();
    for (const auto& w : {obs, any}) {
      EXPECT_LE(std::abs(eval_weyl(kPositive, apply_automorphism(TimeShift{t}, w)) - eval_weyl(kPositive, w)), 1e-12);
    }
  }
}

TEST(PositiveState, GaugeInvariance) {
  Sampler s(209);
  const auto grid = torus();
  for (int r = 0; r < 20; ++r) {
    const WeylElement obs(s.transverse(grid), s.vector(grid, true), std::polar(1.0, s.uniform(-3, 3)));
    const WeylElement any = s.weyl(grid);
    for (const auto& w : {obs, any}) {
      const Complex v = eval_weyl(kPositive, w);
      EXPECT_LE(std::abs(eval_weyl(kPositive, apply_automorphism(SmallGauge{s.scalar(grid)}, w)) - v), 1e-12);
      EXPECT_LE(std::abs(eval_weyl(kPositive, apply_automorphism(LargeGauge{s.vec3()}, w)) - v), 1e-12);
    }
  }
}

TEST(PositiveState, PositiveGramMatrices) {
  Sampler s(211);
  const auto grid = torus();
  const std::vector<VectorFunction> longitudinal = {zero_v(grid), s.gradient_field(grid)};
  double worst = 1.0;
  for (int r = 0; r < 50; ++r) {
    const int n = s.integer(2, 6);
    std::vector<WeylElement> family;
    for (int i = 0; i < n; ++i) {
      family.emplace_back(0.7 * s.transverse(grid) + longitudinal[s.integer(0, 1)],
                          s.vector(grid, true), std::polar(1.0, s.uniform(-3, 3)));
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = eval_weyl(kPositive, multiply(adjoint(family[i]), family[j]));
    }
    ASSERT_LE((m - m.adjoint()).norm(), 1e-12);
    worst = std::min(worst, min_eigenvalue(m));
  }
  EXPECT_GE(worst, -1e-10);
}

TEST(PositiveState, GaussLawOnVacuum) {
  Sampler s(213);
  const auto grid = torus();
  const auto dk = gradient(s.scalar(grid));
  const double ds = 1e-3;
  auto value = [&](double x) { return eval_weyl(kPositive, WeylElement(zero_v(grid), -x * dk)); };
  const Complex second = (value(ds) - 2.0 * value(0.0) + value(-ds)) / (ds * ds);
  EXPECT_EQ(second, Complex(0.0));
}

TEST(PositiveState, NonRegularStepFunction) {
  Sampler s(215);
  const auto grid = torus();
  const auto dh = gradient(s.scalar(grid));
  EXPECT_EQ(eval_weyl(kPositive, WeylElement(0.0 * dh, zero_v(grid))), Complex(1.0));
  for (double x : {-10.0, -1.0, -1e-3, -1e-9, 1e-12, 1e-6, 0.5, 3.0}) {
    EXPECT_EQ(eval_weyl(kPositive, WeylElement(x * dh, zero_v(grid))), Complex(0.0)) << x;
  }
}

TEST(PositiveState, TranslationOverlapDiscontinuity) {
  Sampler s(217);
  const auto grid = torus();
  const auto dh = gradient(s.scalar(grid));
  const double L = grid->L();
  EXPECT_EQ(eval_weyl(kPositive, WeylElement(dh - translate(dh, Vec3::Zero()), zero_v(grid))), Complex(1.0));
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      for (int c = 0; c < 5; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const Vec3 x = Vec3(a, b, c) * (L / 5.0) + Vec3(1e-6, 0, 0);
        EXPECT_EQ(eval_weyl(kPositive, WeylElement(dh - translate(dh, x), zero_v(grid))), Complex(0.0));
      }
    }
  }
}

TEST(PositiveState, ThetaCharacters) {
  const auto grid = torus();
  const Vec3 m(0.0, 0.0, 1.0 / grid->volume());
  const Vec3 theta(0.0, 0.0, 0.37);
  const auto composed = kPositive.theta_composed(theta);
  for (double x : {-2.0, -0.5, 0.0, 0.25, 1.0, 4.0}) {
    const WeylElement w(zero_v(grid), VectorFunction::constant(grid, x * m));
    const Complex plain = eval_weyl(kPositive, w);
    const Complex shifted = eval_weyl(composed, w);
    EXPECT_EQ(plain, Complex(1.0));
    EXPECT_LE(std::abs(shifted - std::polar(1.0, x * theta.dot(m) * grid->volume())), 1e-15);
    EXPECT_NEAR(std::abs(plain - shifted), std::abs(1.0 - std::polar(1.0, x * 0.37)), 1e-15);
  }
  EXPECT_THROW(composed.theta_composed(theta), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Indefinite state: two-point functions.

TEST(SpectralMeasureTest, Validation) {
  EXPECT_THROW(SpectralMeasure({}), std::invalid_argument);
  EXPECT_THROW(SpectralMeasure({{-1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SpectralMeasure({{0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(SpectralMeasure({{1.0, 0.5}, {1.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(SpectralMeasure({{0.0, 1.0}}, -1.0), std::invalid_argument);
  EXPECT_TRUE(SpectralMeasure::free_case().canonical());
  EXPECT_FALSE(SpectralMeasure({{0.0, 1.0}}, 0.5).canonical());
  EXPECT_FALSE(SpectralMeasure({{0.0, 0.7}}).canonical());
}

TEST(TwoPoint, UnitTransverseEqualTime) {
  const auto grid = torus();
  const auto u = unit_transverse(grid);
  const auto free = StateSpec::indefinite();
  for (double t : {0.0, 1.3}) {
    const Complex v = two_point(free, {Species::A, u, t}, {Species::A, u, t});
    EXPECT_NEAR(v.real(), 0.5, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
  // Direct mode sum: 2 L^3 |uhat|^2 exp(i y0) / 2.
  const Complex v = two_point(free, {Species::A, u, 0.0}, {Species::A, u, 0.8});
  EXPECT_LE(std::abs(v - 0.5 * std::exp(kI * 0.8)), 1e-15);
}

TEST(TwoPoint, LongitudinalEqualTimeVanishes) {
  const auto grid = torus();
  const auto dh = gradient(single_mode(grid));
  const auto free = StateSpec::indefinite();
  EXPECT_EQ(two_point(free, {Species::A, dh, 0.4}, {Species::A, dh, 0.4}), Complex(0.0));
  // Linear growth (i y0 / 2) (dh, dh).
  const Complex v = two_point(free, {Species::A, dh, 0.0}, {Species::A, dh, 2.0});
  EXPECT_LE(std::abs(v - kI * quadrature_inner(dh, dh)), 1e-12);
}

TEST(TwoPoint, LongitudinalEEVanishesAtAllTimes) {
  Sampler s(219);
  const auto grid = torus(2);
  const auto free = StateSpec::indefinite();
  for (int r = 0; r < 10; ++r) {
    const auto g1 = gradient(s.scalar(grid));
    const auto g2 = gradient(s.scalar(grid));
    EXPECT_LE(std::abs(two_point(free, {Species::E, g1, s.normal()}, {Species::E, g2, s.normal()})), 1e-13);
  }
}

TEST(TwoPoint, UnsupportedForPositiveAndMeans) {
  const auto grid = torus();
  const auto u = unit_transverse(grid);
  EXPECT_THROW(two_point(kPositive, {Species::A, u, 0.0}, {Species::A, u, 0.0}), UnsupportedState);
  EXPECT_THROW(StateSpec::positive_non_regular().measure(), UnsupportedState);
  const auto m = u.with_mean(Vec3(1.0, 0, 0));
  EXPECT_THROW(two_point(StateSpec::indefinite(), {Species::A, m, 0.0}, {Species::A, u, 0.0}),
               MeanModeUnsupported);
}

TEST(TwoPoint, FreeCaseMatchesReferenceKernel) {
  Sampler s(221);
  for (int N : {1, 2}) {
    const auto grid = torus(N);
    const auto free = StateSpec::indefinite(SpectralMeasure::free_case());
    for (int r = 0; r < 50; ++r) {
      const auto x = random_label(s, grid);
      const auto y = random_label(s, grid);
      const Complex got = two_point(free, x, y);
      const Complex want = free_two_point_reference(x, y);
      EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(TwoPoint, SeriesDerivativesMatchFiniteDifferences) {
  Sampler s(223);
  const auto grid = torus();
  const auto state = StateSpec::indefinite(SpectralMeasure({{0.0, 0.6}, {2.0, 0.4}}, 0.3));
  const auto f = s.vector(grid);
  const auto g = s.vector(grid);
  const double t = 0.4, dt = 1e-5;
  const Complex ae = two_point(state, {Species::A, f, 0.0}, {Species::E, g, t});
  const Complex fd = (two_point(state, {Species::A, f, 0.0}, {Species::A, g, t + dt}) -
                      two_point(state, {Species::A, f, 0.0}, {Species::A, g, t - dt})) /
                     (2.0 * dt);
  EXPECT_LE(std::abs(ae - fd), 1e-8);
  const Complex ea = two_point(state, {Species::E, f, t}, {Species::A, g, 0.0});
  const Complex fd2 = (two_point(state, {Species::A, f, t + dt}, {Species::A, g, 0.0}) -
                       two_point(state, {Species::A, f, t - dt}, {Species::A, g, 0.0})) /
                      (2.0 * dt);
  EXPECT_LE(std::abs(ea - fd2), 1e-8);
}

TEST(TwoPoint, HermiticityOfTheKernel) {
  Sampler s(225);
  const auto grid = torus();
  const auto state = StateSpec::indefinite(random_admissible(s));
  for (int r = 0; r < 20; ++r) {
    const auto x = random_label(s, grid);
    const auto y = random_label(s, grid);
    EXPECT_LE(std::abs(two_point(state, x, y) - std::conj(two_point(state, y, x))), 1e-12);
  }
}

TEST(Commutator, CanonicalForAdmissibleMeasures) {
  Sampler s(227);
  const auto grid = torus(2);
  for (int r = 0; r < 10; ++r) {
    const auto state = StateSpec::indefinite(random_admissible(s));
    const auto f = s.vector(grid);
    const auto g = s.vector(grid);
    const Complex want = kI * quadrature_inner(f, g);
    EXPECT_LE(std::abs(equal_time_commutator(state, f, g) - want), 1e-10);
    // Same thing as a y0-derivative of <A(f, 0) A(g, y0)> - <A(g, y0) A(f, 0)>.
    const auto aa = two_point_series(state, {Species::A, f, 0.0}, {Species::A, g, 0.0});
    const auto ba = two_point_series(state, {Species::A, g, 0.0}, {Species::A, f, 0.0});
    const Complex d = aa.derivative().eval(0.0) + ba.derivative().eval(0.0);
    EXPECT_LE(std::abs(d - want), 1e-10);
  }
}

TEST(Commutator, ContactTermShiftsLongitudinalPart) {
  Sampler s(229);
  const auto grid = torus();
  const auto f = s.vector(grid);
  const auto g = s.vector(grid);
  const double Z = 0.7;
  const auto state = StateSpec::indefinite(SpectralMeasure({{0.0, 1.0}}, Z));
  const Complex want = kI * (quadrature_inner(f, g) + Z * quadrature_inner(divergence(f), divergence(g)));
  EXPECT_LE(std::abs(equal_time_commutator(state, f, g) - want), 1e-10);
}

TEST(IndefiniteWeyl, FlaggedFormal) {
  const auto grid = torus();
  const auto u = unit_transverse(grid);
  const auto free = StateSpec::indefinite();
  const WeylElement w(u, zero_v(grid));
  EXPECT_TRUE(eval_flags(free, w).formal);
  EXPECT_FALSE(eval_flags(free, w).mean_sector_ignored);
  EXPECT_TRUE(eval_flags(free, WeylElement(u.with_mean(Vec3(1, 0, 0)), zero_v(grid))).mean_sector_ignored);
  // On a transverse element it agrees with the positive state.
  EXPECT_LE(std::abs(eval_weyl(free, w) - std::exp(-0.25)), 1e-14);
  // On W(dh, 0) it is 1, since <A(dh)^2> = 0 at equal times.
  EXPECT_LE(std::abs(eval_weyl(free, WeylElement(gradient(single_mode(grid)), zero_v(grid))) - 1.0), 1e-14);
}

// ---------------------------------------------------------------------------
// Wick n-point functions.

TEST(Wick, TwoPointReduction) {
  Sampler s(231);
  const auto grid = torus();
  const auto free = StateSpec::indefinite();
  const std::vector<FieldLabel> labels = {random_label(s, grid), random_label(s, grid)};
  EXPECT_EQ(n_point_wick(free, labels), two_point(free, labels[0], labels[1]));
}

TEST(Wick, FourUnitLabels) {
  const auto grid = torus();
  const auto u = unit_transverse(grid);
  const std::vector<FieldLabel> labels(4, FieldLabel{Species::A, u, 0.0});
  EXPECT_NEAR(std::abs(n_point_wick(StateSpec::indefinite(), labels) - 0.75), 0.0, 1e-14);
}

TEST(Wick, OddCountVanishes) {
  Sampler s(233);
  const auto grid = torus();
  std::vector<FieldLabel> labels;
  for (int j = 0; j < 5; ++j) labels.push_back(random_label(s, grid));
  EXPECT_EQ(n_point_wick(StateSpec::indefinite(), std::span(labels).first(1)), Complex(0.0));
  EXPECT_EQ(n_point_wick(StateSpec::indefinite(), std::span(labels).first(3)), Complex(0.0));
  EXPECT_EQ(n_point_wick(StateSpec::indefinite(), labels), Complex(0.0));
}

TEST(Wick, SixLabelsAgainstPermutationEnumeration) {
  Sampler s(235);
  const auto grid = torus();
  const auto state = StateSpec::indefinite(random_admissible(s));
  for (int r = 0; r < 5; ++r) {
    std::vector<FieldLabel> labels;
    for (int j = 0; j < 6; ++j) labels.push_back(random_label(s, grid));
    Eigen::MatrixXcd pair(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) pair(i, j) = two_point(state, labels[i], labels[j]);
    }
    const Complex want = brute_force_wick(pair);
    EXPECT_LE(std::abs(n_point_wick(state, labels) - want), 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(Wick, ThetaOnePointShifts) {
  const auto grid = torus();
  const Vec3 theta(0.3, 0.0, -0.2);
  const auto state = StateSpec::indefinite().theta_composed(theta);
  const Vec3 m(1.0, 0.5, 2.0);
  const auto f = VectorFunction::constant(grid, m);
  const double L3 = grid->volume();
  for (double t : {0.0, 1.0, -2.5}) {
    const std::vector<FieldLabel> a = {{Species::A, f, t}};
    EXPECT_NEAR(n_point_wick(state, a).real(), t * theta.dot(m) * L3, 1e-10);
    const std::vector<FieldLabel> e = {{Species::E, f, t}};
    EXPECT_NEAR(n_point_wick(state, e).real(), theta.dot(m) * L3, 1e-10);
  }
  const std::vector<FieldLabel> orthogonal = {{Species::A, VectorFunction::constant(grid, Vec3(0, 1, 0)), 3.0}};
  EXPECT_EQ(n_point_wick(state, orthogonal), Complex(0.0));
}

TEST(Wick, ThetaShiftsCombineWithPairings) {
  Sampler s(237);
  const auto grid = torus();
  const Vec3 theta(0.1, -0.4, 0.25);
  const auto base = StateSpec::indefinite();
  const auto state = base.theta_composed(theta);
  std::vector<FieldLabel> labels;
  for (int j = 0; j < 3; ++j) {
    auto l = random_label(s, grid);
    l.f = l.f.with_mean(s.vec3());
    labels.push_back(l);
  }
  std::vector<double> shift;
  std::vector<FieldLabel> bare;
  for (const auto& l : labels) {
    shift.push_back(theta_one_point(theta, l));
    bare.push_back({l.species, l.f.with_mean(Vec3::Zero()), l.t});
  }
  auto tp = [&](int i, int j) { return two_point(base, bare[i], bare[j]); };
  const Complex want = shift[0] * shift[1] * shift[2] + shift[0] * tp(1, 2) + shift[1] * tp(0, 2) +
                       shift[2] * tp(0, 1);
  EXPECT_LE(std::abs(n_point_wick(state, labels) - want), 1e-10 * std::max(1.0, std::abs(want)));
  EXPECT_THROW(n_point_wick(base, labels), MeanModeUnsupported);
  EXPECT_THROW(n_point_wick(kPositive, labels), UnsupportedState);
}

// ---------------------------------------------------------------------------
// Null vectors and the longitudinal Gram matrix.

TEST(NullVectors, DivergenceFieldsAreNull) {
  Sampler s(239);
  const auto grid = torus(2);
  const auto free = StateSpec::indefinite();
  for (int r = 0; r < 20; ++r) {
    const auto f = s.scalar(grid);
    const auto g = s.scalar(grid);
    // div A(f) = -A(grad f) and div E(g) = -E(grad g).
    const FieldLabel qa{Species::A, -1.0 * gradient(f), 0.0};
    const FieldLabel pe{Species::E, -1.0 * gradient(g), 0.0};
    const FieldLabel pf{Species::E, -1.0 * gradient(f), 0.0};
    EXPECT_LE(std::abs(two_point(free, qa, qa)), 1e-12);
    EXPECT_LE(std::abs(two_point(free, pf, pf)), 1e-12);
    const Complex want = 0.5 * kI * quadrature_inner(gradient(f), gradient(g));
    EXPECT_GT(std::abs(want), 1e-3);
    EXPECT_LE(std::abs(two_point(free, qa, pe) - want), 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(Gram, MaxDegreeOneExact) {
  const auto m = gram_longitudinal_mode(1);
  Eigen::Matrix3cd want;
  want << 1.0, 0.0, 0.0, 0.0, 0.0, 0.5 * kI, 0.0, -0.5 * kI, 0.0;
  ASSERT_EQ(m.rows(), 3);
  EXPECT_EQ(Eigen::MatrixXcd(want), m);
  EXPECT_LE(std::abs(Eigen::Matrix3cd(m).determinant() - Complex(-0.25)), 0.0);
  EXPECT_LT(min_eigenvalue(m), -0.4);
}

TEST(Gram, HigherDegreesMatchWickWords) {
  for (int maxdeg : {2, 3}) {
    const auto basis = longitudinal_monomials(maxdeg);
    const auto m = gram_longitudinal_mode(maxdeg);
    ASSERT_EQ(static_cast<std::size_t>(m.rows()), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto [a, b] = basis[i];
        const auto [c, d] = basis[j];
        const std::string word = std::string(b, 'p') + std::string(a, 'q') + std::string(c, 'q') + std::string(d, 'p');
        EXPECT_LE(std::abs(m(i, j) - word_expectation(word)), 1e-12) << i << "," << j;
      }
    }
    EXPECT_LE((m - m.adjoint()).norm(), 1e-12);
    EXPECT_GT(std::abs(m.determinant()), 1e-6);
    EXPECT_LT(min_eigenvalue(m), 0.0);
  }
}

TEST(Gram, OrderedProductAndExpectation) {
  // p q = q p - i.
  const auto pq = ordered_product(0, 1, 1, 0);
  EXPECT_EQ(pq.size(), 2u);
  EXPECT_EQ(pq.at({1, 1}), Complex(1.0));
  EXPECT_EQ(pq.at({0, 0}), Complex(0.0, -1.0));
  EXPECT_EQ(ordered_expectation(1, 1), 0.5 * kI);
  EXPECT_EQ(ordered_expectation(2, 1), Complex(0.0));
  EXPECT_LE(std::abs(ordered_expectation(2, 2) - 2.0 * (0.5 * kI) * (0.5 * kI)), 1e-15);
}

TEST(Gram, DegreeUnsupported) {
  EXPECT_THROW(gram_longitudinal_mode(0), DegreeUnsupported);
  EXPECT_THROW(gram_longitudinal_mode(4), DegreeUnsupported);
}

TEST(Gram, ModeKernelFromFieldTwoPoint) {
  Sampler s(241);
  const auto grid = torus();
  const auto free = StateSpec::indefinite();
  const auto q = s.gradient_field(grid);  // (q, q) = 1
  const FieldLabel a{Species::A, q, 0.0};
  const FieldLabel e{Species::E, q, 0.0};
  EXPECT_LE(std::abs(two_point(free, a, a)), 1e-14);
  EXPECT_LE(std::abs(two_point(free, e, e)), 1e-14);
  EXPECT_LE(std::abs(two_point(free, a, e) - 0.5 * kI), 1e-14);
  EXPECT_LE(std::abs(two_point(free, e, a) + 0.5 * kI), 1e-14);
  for (double t : {-1.0, 0.5, 2.0}) {
    EXPECT_LE(std::abs(two_point(free, a, {Species::A, q, t}) - 0.5 * kI * t), 1e-14);
  }
}
