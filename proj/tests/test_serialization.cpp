#include "tglab/serialization.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace tglab {
namespace {

using testing::Sampler;
using testing::torus;

template <class F>
void expect_same_function(const F& a, const F& b) {
  ASSERT_TRUE(a.grid()->same_as(*b.grid()));
  ASSERT_EQ(a.coeffs().size(), b.coeffs().size());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) EXPECT_EQ(a[i], b[i]) << "mode " << i;
  EXPECT_EQ(a.mean(), b.mean());
}

TEST(Serialization, VectorFunctionRoundTripIsExact) {
  Sampler s(11);
  for (int N : {1, 2}) {
    const auto grid = torus(N);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = s.vector(grid, trial % 2 == 1);
      const Json j = to_json(f);
      expect_same_function(f, vector_function_from_json(j));
      expect_same_function(f, vector_function_from_json(Json::parse(j.dump()), grid));
    }
  }
}

TEST(Serialization, ScalarFunctionRoundTripIsExact) {
  Sampler s(12);
  const auto grid = torus(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = s.scalar(grid, true);
    expect_same_function(h, scalar_function_from_json(Json::parse(to_json(h).dump())));
  }
}

TEST(Serialization, HalfListedEntriesCompletedByConjugation) {
  const auto grid = torus(1);
  const Json j = {{"L", grid->L()},
                  {"N", 1},
                  {"entries", {{{"n", {0, 0, 1}}, {"re", {1.0, 0.0, 0.0}}, {"im", {0.0, 2.0, 0.0}}}}},
                  {"mean", {0.0, 0.0, 0.0}}};
  const auto f = vector_function_from_json(j, grid);
  const auto i = *grid->index_of(IVec3(0, 0, 1));
  const auto p = *grid->index_of(IVec3(0, 0, -1));
  EXPECT_EQ(f[i], CVec3(Complex(1, 0), Complex(0, 2), 0));
  EXPECT_EQ(f[p], CVec3(Complex(1, 0), Complex(0, -2), 0));
}

TEST(Serialization, ScalarAcceptsPlainNumbers) {
  const auto grid = torus(1);
  const Json j = {{"L", grid->L()},
                  {"N", 1},
                  {"entries", {{{"n", {1, 0, 0}}, {"re", 0.5}, {"im", -0.25}}}},
                  {"mean", 3.0}};
  const auto h = scalar_function_from_json(j);
  EXPECT_EQ(h[*grid->index_of(IVec3(1, 0, 0))], Complex(0.5, -0.25));
  EXPECT_EQ(h.mean(), 3.0);
}

TEST(Serialization, FunctionErrors) {
  const auto grid = torus(1);
  const Json ok = to_json(VectorFunction::zero(grid).with_mode(IVec3(1, 0, 0), CVec3(1, 0, 0)));
  auto broken = [&](auto edit) {
    Json j = ok;
    edit(j);
    return j;
  };
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j.erase("entries"); })), JsonFormatError);
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j["N"] = 1.5; })), JsonFormatError);
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j["entries"][0]["n"] = {5, 0, 0}; })),
               JsonFormatError);
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j["entries"][0]["n"] = {0, 0, 0}; })),
               JsonFormatError);
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j["entries"][0]["n"] = {0.5, 0, 0}; })),
               JsonFormatError);
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j["entries"].push_back(j["entries"][0]); })),
               JsonFormatError);
  EXPECT_THROW(vector_function_from_json(broken([](Json& j) { j["entries"][0]["re"] = {1.0, 2.0}; })),
               JsonFormatError);
  EXPECT_THROW(vector_function_from_json(ok, torus(2)), JsonFormatError);
}

TEST(Serialization, WeylRoundTrip) {
  Sampler s(13);
  const auto grid = torus(1);
  for (int trial = 0; trial < 10; ++trial) {
    const WeylElement w(s.vector(grid, true), s.vector(grid, true), std::polar(1.0, s.uniform(-3, 3)));
    const auto back = weyl_from_json(Json::parse(to_json(w).dump()), grid);
    expect_same_function(w.f(), back.f());
    expect_same_function(w.g(), back.g());
    EXPECT_EQ(w.phase(), back.phase());
  }
}

TEST(Serialization, ComplexForm) {
  EXPECT_EQ(complex_to_json(Complex(1.5, -2.0)), Json::parse("[1.5, -2.0]"));
  EXPECT_EQ(complex_from_json(Json::parse("[0.25, 4]")), Complex(0.25, 4.0));
  EXPECT_THROW(complex_from_json(Json::parse("[1]")), JsonFormatError);
  EXPECT_THROW(complex_from_json(Json::parse("\"x\"")), JsonFormatError);
}

TEST(Serialization, SeriesRoundTrip) {
  QuasiPolynomialSeries s;
  s.add_term(0.5, Complex(0.25, -0.125), 1.0);
  s.add_term(-1.75, Complex(0.0, 3.0), 1.4142135623730951);
  s.add_linear(Complex(0.1, 0.2), Complex(0.0, -0.5), 1.0);
  const auto back = series_from_json(Json::parse(to_json(s).dump()));
  ASSERT_EQ(back.terms().size(), s.terms().size());
  for (std::size_t a = 0; a < s.terms().size(); ++a) {
    EXPECT_EQ(back.terms()[a].omega, s.terms()[a].omega);
    EXPECT_EQ(back.terms()[a].coeff, s.terms()[a].coeff);
    EXPECT_EQ(back.terms()[a].momentum, s.terms()[a].momentum);
  }
  EXPECT_EQ(back.b0(), s.b0());
  EXPECT_EQ(back.b1(), s.b1());
  EXPECT_EQ(back.linear_momentum(), s.linear_momentum());
  EXPECT_THROW(series_from_json(Json::parse(R"({"terms": 3})")), JsonFormatError);
}

TEST(Serialization, SampledSeriesRoundTrip) {
  SampledSeries s;
  s.t0 = -4.0;
  s.dt = 0.25;
  s.momentum = 1.0;
  for (int m = 0; m < 32; ++m) s.values.push_back(std::polar(1.0, 0.3 * m));
  const auto back = sampled_series_from_json(Json::parse(to_json(s).dump()));
  EXPECT_EQ(back.t0, s.t0);
  EXPECT_EQ(back.dt, s.dt);
  EXPECT_EQ(back.momentum, s.momentum);
  EXPECT_EQ(back.values, s.values);
}

TEST(Serialization, VerdictRoundTrip) {
  SpectralVerdict v;
  v.support = {{-0.5, 0.25, 0, 1.0}, {0.0, 1.5, 1, 1.7320508075688772}};
  v.energy_positive = false;
  v.relativistic = false;
  v.negative_mass_fraction = 0.125;
  v.sampled = true;
  v.tol = 1e-7;
  const auto back = verdict_from_json(Json::parse(to_json(v).dump()));
  ASSERT_EQ(back.support.size(), 2u);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_EQ(back.support[a].omega, v.support[a].omega);
    EXPECT_EQ(back.support[a].weight, v.support[a].weight);
    EXPECT_EQ(back.support[a].order, v.support[a].order);
    EXPECT_EQ(back.support[a].momentum, v.support[a].momentum);
  }
  EXPECT_EQ(back.energy_positive, v.energy_positive);
  EXPECT_EQ(back.relativistic, v.relativistic);
  EXPECT_EQ(back.negative_mass_fraction, v.negative_mass_fraction);
  EXPECT_EQ(back.sampled, v.sampled);
  EXPECT_EQ(back.tol, v.tol);

  Json bad = to_json(v);
  bad["support"][0]["order"] = 0.5;
  EXPECT_THROW(verdict_from_json(bad), JsonFormatError);
  bad = to_json(v);
  bad["energy_positive"] = 1;
  EXPECT_THROW(verdict_from_json(bad), JsonFormatError);
}

TEST(Serialization, MeasureRoundTripAndValidation) {
  const SpectralMeasure m({{0.0, 0.5}, {2.0, 0.25}, {7.5, 0.25}}, 0.3);
  const auto back = measure_from_json(Json::parse(to_json(m).dump()));
  ASSERT_EQ(back.atoms().size(), 3u);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(back.atoms()[a].mass_sq, m.atoms()[a].mass_sq);
    EXPECT_EQ(back.atoms()[a].weight, m.atoms()[a].weight);
  }
  EXPECT_EQ(back.contact(), 0.3);
  EXPECT_THROW(measure_from_json(Json::parse(R"({"rho": [[1.0, -1.0]], "Z": 0})")), JsonFormatError);
  EXPECT_THROW(measure_from_json(Json::parse(R"({"rho": 1, "Z": 0})")), JsonFormatError);
}

TEST(Serialization, EstimateFields) {
  McEstimate e;
  e.estimate = Complex(0.5, -0.25);
  e.stderr_ = 0.01;
  e.se_re = 0.006;
  e.se_im = 0.008;
  e.samples = 20000;
  const Json j = Json::parse(to_json(e).dump());
  EXPECT_EQ(complex_from_json(j.at("estimate")), e.estimate);
  EXPECT_EQ(j.at("stderr").get<double>(), e.stderr_);
  EXPECT_EQ(j.at("samples").get<std::size_t>(), e.samples);
}

}  // namespace
}  // namespace tglab
