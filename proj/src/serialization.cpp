#include "tglab/serialization.hpp"

#include <string>

namespace tglab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw JsonFormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw JsonFormatError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, std::size_t count, const char* what) {
  if (j.is_number() && count == 1) return {j.get<double>()};
  if (!j.is_array() || j.size() != count) {
    throw JsonFormatError(std::string(what) + " must be an array of " + std::to_string(count) +
                          " numbers");
  }
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

GridPtr resolve_grid(const Json& j, const GridPtr& grid) {
  const double L = number(field(j, "L"), "L");
  const Json& nj = field(j, "N");
  if (!nj.is_number_integer()) throw JsonFormatError("N must be an integer");
  const int N = nj.get<int>();
  if (grid) {
    if (grid->L() != L || grid->N() != N) throw JsonFormatError("test function grid mismatch");
    return grid;
  }
  try {
    return ModeGrid::make(L, N);
  } catch (const std::invalid_argument& e) {
    throw JsonFormatError(e.what());
  }
}

template <typename Coeff>
Coeff coeff_from(const std::vector<double>& re, const std::vector<double>& im);

template <>
CVec3 coeff_from<CVec3>(const std::vector<double>& re, const std::vector<double>& im) {
  return CVec3(Complex(re[0], im[0]), Complex(re[1], im[1]), Complex(re[2], im[2]));
}

template <>
Complex coeff_from<Complex>(const std::vector<double>& re, const std::vector<double>& im) {
  return Complex(re[0], im[0]);
}

template <typename Coeff, typename Mean>
TestFunction<Coeff, Mean> function_from_json(const Json& j, const GridPtr& given,
                                             std::size_t width) {
  const GridPtr grid = resolve_grid(j, given);
  std::vector<Coeff> coeffs(grid->size(), detail::zero_coeff<Coeff>());
  std::vector<bool> set(grid->size(), false);
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) throw JsonFormatError("entries must be an array");
  for (const auto& e : entries) {
    const auto nv = numbers(field(e, "n"), 3, "n");
    const IVec3 n(static_cast<int>(nv[0]), static_cast<int>(nv[1]), static_cast<int>(nv[2]));
    if (n.cast<double>() != Vec3(nv[0], nv[1], nv[2])) throw JsonFormatError("n must be integral");
    const auto idx = grid->index_of(n);
    if (!idx) throw JsonFormatError("mode n is not on the grid (or is the zero mode)");
    if (set[*idx]) throw JsonFormatError("mode listed twice");
    coeffs[*idx] = coeff_from<Coeff>(numbers(field(e, "re"), width, "re"),
                                     numbers(field(e, "im"), width, "im"));
    set[*idx] = true;
  }
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const std::size_t p = grid->partner(i);
    if (set[i] && !set[p]) {
      coeffs[p] = detail::coeff_conj(coeffs[i]);
      set[p] = true;
    }
  }
  Mean mean = detail::zero_mean<Mean>();
  if (j.contains("mean")) {
    const auto m = numbers(j.at("mean"), width, "mean");
    if constexpr (std::is_same_v<Mean, double>) {
      mean = m[0];
    } else {
      mean = Vec3(m[0], m[1], m[2]);
    }
  }
  try {
    return TestFunction<Coeff, Mean>(grid, std::move(coeffs), mean);
  } catch (const std::invalid_argument& e) {
    throw JsonFormatError(e.what());
  }
}

Json coeff_parts(const CVec3& c, bool imag) {
  Json out = Json::array();
  for (int d = 0; d < 3; ++d) out.push_back(imag ? c[d].imag() : c[d].real());
  return out;
}

Json coeff_parts(const Complex& c, bool imag) { return Json::array({imag ? c.imag() : c.real()}); }

Json mean_json(const Vec3& m) { return Json::array({m[0], m[1], m[2]}); }
Json mean_json(double m) { return Json::array({m}); }

template <typename Coeff, typename Mean>
Json function_to_json(const TestFunction<Coeff, Mean>& f) {
  const auto& grid = *f.grid();
  Json entries = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_representative(i) || detail::coeff_abs(f[i]) == 0.0) continue;
    const IVec3& n = grid.n(i);
    entries.push_back({{"n", {n[0], n[1], n[2]}},
                       {"re", coeff_parts(f[i], false)},
                       {"im", coeff_parts(f[i], true)}});
  }
  return {{"L", grid.L()}, {"N", grid.N()}, {"entries", entries}, {"mean", mean_json(f.mean())}};
}

}  // namespace

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  const auto v = numbers(j, 2, "complex value");
  return {v[0], v[1]};
}

Json to_json(const VectorFunction& f) { return function_to_json(f); }
Json to_json(const ScalarFunction& f) { return function_to_json(f); }

VectorFunction vector_function_from_json(const Json& j, const GridPtr& grid) {
  return function_from_json<CVec3, Vec3>(j, grid, 3);
}

ScalarFunction scalar_function_from_json(const Json& j, const GridPtr& grid) {
  return function_from_json<Complex, double>(j, grid, 1);
}

Json to_json(const WeylElement& w) {
  return {{"f", to_json(w.f())}, {"g", to_json(w.g())}, {"phase", complex_to_json(w.phase())}};
}

WeylElement weyl_from_json(const Json& j, const GridPtr& grid) {
  auto f = vector_function_from_json(field(j, "f"), grid);
  auto g = vector_function_from_json(field(j, "g"), f.grid());
  const Complex phase = j.contains("phase") ? complex_from_json(j.at("phase")) : Complex(1.0);
  try {
    return WeylElement(std::move(f), std::move(g), phase);
  } catch (const std::invalid_argument& e) {
    throw JsonFormatError(e.what());
  }
}

Json to_json(const QuasiPolynomialSeries& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms()) {
    terms.push_back({{"omega", t.omega},
                     {"coeff", complex_to_json(t.coeff)},
                     {"momentum", t.momentum}});
  }
  return {{"terms", terms},
          {"b0", complex_to_json(s.b0())},
          {"b1", complex_to_json(s.b1())},
          {"linear_momentum", s.linear_momentum()}};
}

QuasiPolynomialSeries series_from_json(const Json& j) {
  QuasiPolynomialSeries out;
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw JsonFormatError("terms must be an array");
  for (const auto& t : terms) {
    out.add_term(number(field(t, "omega"), "omega"), complex_from_json(field(t, "coeff")),
                 t.contains("momentum") ? number(t.at("momentum"), "momentum") : 0.0);
  }
  out.add_linear(complex_from_json(field(j, "b0")), complex_from_json(field(j, "b1")),
                 j.contains("linear_momentum") ? number(j.at("linear_momentum"), "momentum")
                                               : 0.0);
  return out;
}

Json to_json(const SampledSeries& s) {
  Json values = Json::array();
  for (const auto& v : s.values) values.push_back(complex_to_json(v));
  return {{"t0", s.t0}, {"dt", s.dt}, {"momentum", s.momentum}, {"values", values}};
}

SampledSeries sampled_series_from_json(const Json& j) {
  SampledSeries s;
  s.t0 = number(field(j, "t0"), "t0");
  s.dt = number(field(j, "dt"), "dt");
  s.momentum = number(field(j, "momentum"), "momentum");
  const Json& values = field(j, "values");
  if (!values.is_array()) throw JsonFormatError("values must be an array");
  for (const auto& v : values) s.values.push_back(complex_from_json(v));
  return s;
}

Json to_json(const SupportPoint& p) {
  return {{"omega", p.omega}, {"weight", p.weight}, {"order", p.order}, {"momentum", p.momentum}};
}

Json to_json(const SpectralVerdict& v) {
  Json support = Json::array();
  for (const auto& p : v.support) support.push_back(to_json(p));
  return {{"support", support},
          {"energy_positive", v.energy_positive},
          {"relativistic", v.relativistic},
          {"negative_mass_fraction", v.negative_mass_fraction},
          {"sampled", v.sampled},
          {"tol", v.tol}};
}

SpectralVerdict verdict_from_json(const Json& j) {
  SpectralVerdict v;
  const Json& support = field(j, "support");
  if (!support.is_array()) throw JsonFormatError("support must be an array");
  for (const auto& p : support) {
    const Json& order = field(p, "order");
    if (!order.is_number_integer()) throw JsonFormatError("order must be an integer");
    v.support.push_back({number(field(p, "omega"), "omega"), number(field(p, "weight"), "weight"),
                         order.get<int>(), number(field(p, "momentum"), "momentum")});
  }
  auto flag = [&](const char* key) {
    const Json& b = field(j, key);
    if (!b.is_boolean()) throw JsonFormatError(std::string(key) + " must be a boolean");
    return b.get<bool>();
  };
  v.energy_positive = flag("energy_positive");
  v.relativistic = flag("relativistic");
  v.sampled = flag("sampled");
  v.negative_mass_fraction = number(field(j, "negative_mass_fraction"), "negative_mass_fraction");
  v.tol = number(field(j, "tol"), "tol");
  return v;
}

Json to_json(const SpectralMeasure& m) {
  Json rho = Json::array();
  for (const auto& a : m.atoms()) rho.push_back({a.mass_sq, a.weight});
  return {{"rho", rho}, {"Z", m.contact()}};
}

SpectralMeasure measure_from_json(const Json& j) {
  const Json& rho = field(j, "rho");
  if (!rho.is_array()) throw JsonFormatError("rho must be an array of [m2, w] pairs");
  std::vector<SpectralAtom> atoms;
  for (const auto& a : rho) {
    const auto v = numbers(a, 2, "rho atom");
    atoms.push_back({v[0], v[1]});
  }
  const double z = j.contains("Z") ? number(j.at("Z"), "Z") : 0.0;
  try {
    return SpectralMeasure(std::move(atoms), z);
  } catch (const std::invalid_argument& e) {
    throw JsonFormatError(e.what());
  }
}

Json to_json(const McEstimate& e) {
  return {{"estimate", complex_to_json(e.estimate)},
          {"stderr", e.stderr_},
          {"se_re", e.se_re},
          {"se_im", e.se_im},
          {"samples", e.samples}};
}

}  // namespace tglab
