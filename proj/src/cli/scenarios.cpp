#include "tglab/cli/scenarios.hpp"

#include "tglab/conventions.hpp"
#include "tglab/euclidean.hpp"
#include "tglab/philox.hpp"
#include "tglab/serialization.hpp"
#include "tglab/spectral.hpp"
#include "tglab/states.hpp"
#include "tglab/weyl_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tglab::cli {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool ScenarioResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Json ScenarioResult::to_json() const {
  Json out = record;
  out["scenario"] = scenario;
  out["name"] = name;
  out["ledger"] = ledger_hash();
  out["pass"] = pass();
  Json cj = Json::array();
  for (const auto& c : checks) cj.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  out["checks"] = cj;
  return out;
}

// ---------------------------------------------------------------------------

VectorFunction named_smearing(const std::string& name, const GridPtr& grid) {
  if (!name.empty() && name.front() == '-') return -named_smearing(name.substr(1), grid);
  const double c = 1.0 / std::sqrt(2.0 * grid->volume());
  const auto zero = VectorFunction::zero(grid);
  if (name == "zero") return zero;
  if (name == "u") return zero.with_mode(IVec3(0, 0, 1), CVec3(c, 0.0, 0.0));
  if (name == "v") return zero.with_mode(IVec3(1, 0, 0), CVec3(0.0, c, 0.0));
  if (name == "grad_h") {
    return gradient(ScalarFunction::zero(grid).with_mode(IVec3(0, 0, 1), Complex(c, 0.0)));
  }
  throw JsonFormatError("unknown named smearing '" + name + "' (known: u, v, grad_h, zero)");
}

VectorFunction smearing_from_json(const Json& j, const GridPtr& grid) {
  if (j.is_string()) return named_smearing(j.get<std::string>(), grid);
  return vector_function_from_json(j, grid);
}

namespace {

Json need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw JsonFormatError(std::string("missing field '") + key + "' in " + j.dump());
  }
  return j.at(key);
}

GridPtr grid_of(const Config& cfg) {
  return ModeGrid::make(cfg.number("grid.L"), static_cast<int>(cfg.integer("grid.N")));
}

Vec3 vec3(const Json& j) { return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

StateSpec state_of(const Config& cfg) {
  StateSpec state = StateSpec::positive_non_regular();
  if (cfg.string("state") == "indefinite") {
    if (cfg.has("rho")) {
      state = StateSpec::indefinite(measure_from_json({{"rho", cfg.get("rho")}, {"Z", cfg.get("Z")}}));
    } else {
      state = StateSpec::indefinite(
          SpectralMeasure(SpectralMeasure::free_case().atoms(), cfg.number("Z")));
    }
  }
  if (cfg.has("theta")) state = state.theta_composed(vec3(cfg.get("theta")));
  return state;
}

WeylElement weyl_of(const Json& j, const GridPtr& grid) {
  const auto f = j.contains("f") ? smearing_from_json(j.at("f"), grid) : VectorFunction::zero(grid);
  const auto g = j.contains("g") ? smearing_from_json(j.at("g"), grid) : VectorFunction::zero(grid);
  const Complex phase = j.contains("phase") ? complex_from_json(j.at("phase")) : Complex(1.0);
  return WeylElement(f, g, phase);
}

FieldLabel label_of(const Json& j, const GridPtr& grid) {
  const std::string species = need(j, "species").get<std::string>();
  if (species != "A" && species != "E") throw JsonFormatError("species must be \"A\" or \"E\"");
  return {species == "A" ? Species::A : Species::E, smearing_from_json(need(j, "f"), grid),
          j.contains("t") ? j.at("t").get<double>() : 0.0};
}

std::vector<std::vector<EuclideanLabel>> label_lists(const Json& j, const GridPtr& grid) {
  if (!j.is_array()) throw JsonFormatError("expected a list of label lists");
  std::vector<std::vector<EuclideanLabel>> out;
  for (const auto& list : j) {
    if (!list.is_array()) throw JsonFormatError("each entry must be a list of {f, tau} labels");
    std::vector<EuclideanLabel> labels;
    for (const auto& l : list) {
      labels.push_back({smearing_from_json(need(l, "f"), grid), need(l, "tau").get<double>()});
    }
    out.push_back(std::move(labels));
  }
  return out;
}

Json label_lists_json(const std::vector<std::vector<EuclideanLabel>>& lists) {
  Json out = Json::array();
  for (const auto& list : lists) {
    Json lj = Json::array();
    for (const auto& l : list) lj.push_back({{"f", to_json(l.f)}, {"tau", l.tau}});
    out.push_back(lj);
  }
  return out;
}

std::string complex_text(Complex c) {
  std::ostringstream os;
  os.precision(6);
  os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

Check close(const std::string& name, Complex got, Complex want, double tol) {
  const double err = std::abs(got - want);
  std::ostringstream os;
  os << "got " << complex_text(got) << ", want " << complex_text(want) << ", |err| = " << err;
  return {name, err <= tol, os.str()};
}

Json flags_json(const EvalFlags& f) {
  return {{"formal", f.formal},
          {"mean_sector_ignored", f.mean_sector_ignored},
          {"nonregular_zero", f.nonregular_zero}};
}

EuclideanConfig euclidean_of(const Config& cfg, const GridPtr& grid, const RunOptions& options) {
  EuclideanConfig ec;
  ec.grid = grid;
  ec.taus = cfg.get("taus").get<std::vector<double>>();
  ec.samples = static_cast<std::size_t>(cfg.integer("mc.samples"));
  ec.seed = options.seed ? *options.seed : cfg.get("mc.seed").get<std::uint64_t>();
  ec.batches = static_cast<std::size_t>(cfg.integer("mc.batches"));
  ec.threads = options.threads;
  return ec;
}

double sigmas_of(Complex estimate, Complex analytic, double stderr_) {
  const double err = std::abs(estimate - analytic);
  if (stderr_ > 0.0) return err / stderr_;
  return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<std::string> mc_row(const std::string& scenario, std::size_t n, const McEstimate& e,
                                Complex analytic, double sigmas) {
  return {scenario,
          std::to_string(n),
          format_double(e.estimate.real()),
          format_double(e.estimate.imag()),
          format_double(e.stderr_),
          format_double(analytic.real()),
          format_double(analytic.imag()),
          format_double(sigmas)};
}

const std::vector<std::string> kMcColumns = {"scenario",    "n",           "estimate_re",
                                             "estimate_im", "stderr",      "analytic_re",
                                             "analytic_im", "sigmas"};

// ---------------------------------------------------------------------------

void state_eval(const Config& cfg, ScenarioResult& r) {
  const auto grid = grid_of(cfg);
  const auto state = state_of(cfg);
  const auto w = weyl_of(cfg.document("weyl"), grid);
  const double tol = cfg.number("tol.exact");
  const Complex value = eval_weyl(state, w, tol);
  r.record["state"] = state.name();
  r.record["input"] = to_json(w);
  r.record["value_re"] = value.real();
  r.record["value_im"] = value.imag();
  r.record["flags"] = flags_json(eval_flags(state, w, tol));
  r.record["summary"] = "value = " + complex_text(value);
  r.checks.push_back({"value finite", std::isfinite(value.real()) && std::isfinite(value.imag()), ""});
  if (cfg.has("expect")) {
    r.checks.push_back(close("value matches expect", value, complex_from_json(cfg.get("expect")),
                             cfg.number("tol.analytic")));
  }
}

void spectral(const Config& cfg, ScenarioResult& r) {
  const auto grid = grid_of(cfg);
  const auto state = state_of(cfg);
  const double tol = cfg.number("tol.spectral");
  SpectralVerdict verdict;
  r.record["state"] = state.name();
  if (cfg.string("kind") == "field") {
    const auto x = label_of(cfg.document("x"), grid);
    const auto y = label_of(cfg.document("y"), grid);
    const auto series = correlation_series(state, x, y);
    verdict = support_analysis(series, tol);
    r.record["series"] = to_json(series);
  } else {
    const auto x = weyl_of(cfg.document("x"), grid);
    const auto y = weyl_of(cfg.document("y"), grid);
    SamplingOptions sampling;
    sampling.dt = cfg.number("sampling.dt");
    sampling.points = static_cast<std::size_t>(cfg.integer("sampling.points"));
    const auto series = correlation_series(state, x, y, sampling);
    verdict = support_analysis(series, tol);
    if (const auto* exact = std::get_if<QuasiPolynomialSeries>(&series)) {
      r.record["series"] = to_json(*exact);
    } else {
      r.record["sampled_series"] = to_json(std::get<SampledSeries>(series));
    }
  }
  r.record["verdict"] = to_json(verdict);
  r.record["summary"] = std::string("energy_positive=") + (verdict.energy_positive ? "true" : "false") +
                        " relativistic=" + (verdict.relativistic ? "true" : "false") +
                        " support=" + std::to_string(verdict.support.size());

  // Flags must agree with the reported support.
  bool consistent = true;
  for (const auto& p : verdict.support) {
    if (verdict.energy_positive && !verdict.sampled && p.omega < -verdict.tol) consistent = false;
  }
  r.checks.push_back({"flags consistent with support", consistent, ""});
  if (cfg.has("expect.energy_positive")) {
    const bool want = cfg.get("expect.energy_positive").get<bool>();
    r.checks.push_back({"energy_positive", verdict.energy_positive == want,
                        std::string("want ") + (want ? "true" : "false")});
  }
  if (cfg.has("expect.relativistic")) {
    const bool want = cfg.get("expect.relativistic").get<bool>();
    r.checks.push_back({"relativistic", verdict.relativistic == want,
                        std::string("want ") + (want ? "true" : "false")});
  }
}

void theta_demo(const Config& cfg, ScenarioResult& r) {
  const auto grid = grid_of(cfg);
  const Vec3 theta = vec3(cfg.get("theta"));
  const auto u0 = VectorFunction::constant(grid, vec3(cfg.get("u0_mean")));
  const double tol = cfg.number("tol.spectral");
  const auto series = theta_violation_series(theta, u0);
  const auto verdict = support_analysis(series, tol);
  const double omega0 = 0.5 * inner(u0, u0);
  const double predicted = omega0 - grid->volume() * theta.dot(u0.mean());
  r.record["omega0"] = omega0;
  r.record["predicted_omega"] = predicted;
  r.record["series"] = to_json(series);
  r.record["verdict"] = to_json(verdict);
  r.record["summary"] = "support at " + format_double(predicted);

  const bool single = verdict.support.size() == 1;
  r.checks.push_back(
      {"single support point at predicted frequency",
       single && std::abs(verdict.support[0].omega - predicted) <= tol * std::max(1.0, std::abs(predicted)),
       "predicted " + format_double(predicted)});
  if (cfg.has("expect.max_support")) {
    const double bound = cfg.number("expect.max_support");
    r.checks.push_back({"support point below bound", single && verdict.support[0].omega <= bound,
                        "bound " + format_double(bound)});
  }
}

void gram(const Config& cfg, ScenarioResult& r) {
  const int maxdeg = static_cast<int>(cfg.integer("maxdeg"));
  const Eigen::MatrixXcd g = gram_longitudinal_mode(maxdeg);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < g.cols(); ++j) row.push_back(complex_to_json(g(i, j)));
    rows.push_back(row);
  }
  Json basis = Json::array();
  for (const auto& [a, b] : longitudinal_monomials(maxdeg)) basis.push_back({a, b});
  const Complex det = g.determinant();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
  const Eigen::VectorXd ev = eig.eigenvalues();
  r.record["maxdeg"] = maxdeg;
  r.record["basis"] = basis;
  r.record["matrix"] = rows;
  r.record["determinant"] = complex_to_json(det);
  r.record["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
  r.record["summary"] = "det = " + complex_text(det) + ", min eigenvalue " + format_double(ev.minCoeff());

  const double tol = cfg.number("tol.exact");
  r.checks.push_back({"hermitian", (g - g.adjoint()).cwiseAbs().maxCoeff() <= tol, ""});
  r.checks.push_back({"nondegenerate", std::abs(det) > tol, "det " + complex_text(det)});
  r.checks.push_back({"indefinite", ev.minCoeff() < -tol, "min eigenvalue " + format_double(ev.minCoeff())});
  if (maxdeg == 1) {
    Eigen::Matrix3cd want = Eigen::Matrix3cd::Zero();
    want(0, 0) = 1.0;
    want(1, 2) = Complex(0.0, 0.5);
    want(2, 1) = Complex(0.0, -0.5);
    r.checks.push_back({"maxdeg 1 matrix", g == Eigen::MatrixXcd(want), "exact comparison"});
  }
}

std::vector<std::vector<EuclideanLabel>> default_moments(const GridPtr& grid) {
  const auto u = named_smearing("u", grid);
  const auto dh = named_smearing("grad_h", grid);
  return {{{u, 0.0}, {u, 1.0}},
          {{u, 0.0}, {u, 0.0}},
          {{dh, 0.0}, {dh, 1.0}},
          {{u, 0.0}, {u, 0.25}, {u, 0.5}, {u, 0.75}}};
}

void mc_schwinger(const Config& cfg, const RunOptions& options, ScenarioResult& r) {
  const auto grid = grid_of(cfg);
  const auto ec = euclidean_of(cfg, grid, options);
  const auto moments = cfg.has("moments") ? label_lists(cfg.document("moments"), grid)
                                          : default_moments(grid);
  const double max_sigmas = cfg.number("tol.sigmas");
  const double max_rel = cfg.number("tol.rel_stderr");
  CsvTable csv{kMcColumns, {}};
  Json rows = Json::array();
  for (std::size_t m = 0; m < moments.size(); ++m) {
    const auto& labels = moments[m];
    if (labels.size() > 8) throw JsonFormatError("moments have at most 8 labels");
    const auto est = mc_moment(ec, labels);
    const Complex analytic = schwinger_wick(labels);
    const double sig = sigmas_of(est.estimate, analytic, est.stderr_);
    csv.rows.push_back(mc_row("mc-schwinger", labels.size(), est, analytic, sig));
    rows.push_back({{"n", labels.size()},
                    {"estimate", to_json(est)},
                    {"analytic", complex_to_json(analytic)},
                    {"sigmas", sig}});
    const std::string tag = "moment " + std::to_string(m) + " (n=" + std::to_string(labels.size()) + ")";
    r.checks.push_back({tag + " within tolerance", sig <= max_sigmas, format_double(sig) + " sigmas"});
    if (std::abs(analytic) > 1e-12) {
      const double rel = est.stderr_ / std::abs(analytic);
      r.checks.push_back({tag + " relative stderr", rel <= max_rel, format_double(rel)});
    }
  }
  r.record["seed"] = ec.seed;
  r.record["samples"] = ec.samples;
  r.record["moments"] = label_lists_json(moments);
  r.record["results"] = rows;
  r.record["summary"] = std::to_string(moments.size()) + " moments, " +
                        std::to_string(ec.samples) + " samples";
  r.csv = std::move(csv);
}

std::vector<std::vector<EuclideanLabel>> default_factors(const GridPtr& grid) {
  const auto u = named_smearing("u", grid);
  const auto dh = named_smearing("grad_h", grid);
  return {{{dh, 0.5}, {-dh, 1.0}},
          {{dh, 0.5}},
          {{u, 0.0}, {u, 0.5}},
          {{dh, 0.25}, {-dh, 1.0}, {u, 0.5}},
          {{dh, 0.5}, {dh, 1.0}}};
}

void positive_exp(const Config& cfg, const RunOptions& options, ScenarioResult& r) {
  const auto grid = grid_of(cfg);
  const auto ec = euclidean_of(cfg, grid, options);
  const auto lists = cfg.has("factors") ? label_lists(cfg.document("factors"), grid)
                                        : default_factors(grid);
  const double tol = cfg.number("tol.exact");
  const double max_sigmas = cfg.number("tol.sigmas");
  CsvTable csv{kMcColumns, {}};
  Json rows = Json::array();
  for (std::size_t m = 0; m < lists.size(); ++m) {
    const auto& factors = lists[m];
    const bool neutral = charge_neutral(factors, tol);
    const Complex analytic = positive_exponential_correlation(factors, tol);
    const auto est = mc_positive_exponential(ec, factors, tol);
    const double sig = sigmas_of(est.estimate, analytic, est.stderr_);
    csv.rows.push_back(mc_row("positive-exp", factors.size(), est, analytic, sig));
    Json row = {{"n", factors.size()},
                {"neutral", neutral},
                {"analytic", complex_to_json(analytic)},
                {"estimate", to_json(est)},
                {"sigmas", sig}};
    const std::string tag = "factors " + std::to_string(m);
    if (!neutral) {
      r.checks.push_back({tag + " charge rule zero", analytic == Complex{} && est.estimate == Complex{},
                          "value " + complex_text(analytic)});
    } else {
      bool zero_mean = true;
      for (const auto& f : factors) zero_mean = zero_mean && f.f.has_zero_mean();
      if (zero_mean) {
        const Complex indefinite = indefinite_exponential_correlation(factors);
        row["indefinite"] = complex_to_json(indefinite);
        r.checks.push_back(close(tag + " equals indefinite value", analytic, indefinite,
                                 cfg.number("tol.analytic")));
      }
      r.checks.push_back({tag + " MC within tolerance", sig <= max_sigmas, format_double(sig) + " sigmas"});
    }
    rows.push_back(row);
  }
  r.record["seed"] = ec.seed;
  r.record["samples"] = ec.samples;
  r.record["factors"] = label_lists_json(lists);
  r.record["results"] = rows;
  r.record["summary"] = std::to_string(lists.size()) + " factor lists";
  r.csv = std::move(csv);
}

void convention_audit(const Config& cfg, ScenarioResult& r) {
  const auto grid = grid_of(cfg);
  const double tol = cfg.number("tol.exact");
  const double vol = grid->volume();
  const auto zero = VectorFunction::zero(grid);
  const auto u = named_smearing("u", grid);
  const auto h = ScalarFunction::zero(grid).with_mode(IVec3(0, 0, 1), Complex(1.0, 0.0));
  const auto dh = gradient(h);

  r.checks.push_back(close("sigma((u,0),(0,u)) = (u,u)", symplectic(u, zero, zero, u), inner(u, u), tol));
  r.checks.push_back(close("W(u,0) W(0,u) phase exp(-i/2)",
                           multiply(WeylElement(u, zero), WeylElement(zero, u)).phase(),
                           std::polar(1.0, -0.5), tol));
  r.checks.push_back(close("Gauss phase exp(-2 i L^3)", gauss_conjugation_phase(h, h),
                           std::polar(1.0, -2.0 * vol), 1e-9));
  r.checks.push_back(close("Gauss phase via pairing", gauss_conjugation_phase(h, h),
                           gauss_pairing_phase(h, h), tol));
  {
    const double t = 0.7;
    const auto shifted = apply_automorphism(TimeShift{t}, WeylElement(dh, zero));
    r.checks.push_back({"time shift W(dh,0) -> W(dh, t dh)",
                        approx_equal(shifted, WeylElement(dh, t * dh), tol), ""});
  }
  r.checks.push_back(close("positive state on W(u,0)",
                           eval_weyl(StateSpec::positive_non_regular(), WeylElement(u, zero)),
                           std::exp(-0.25), tol));
  const auto free = StateSpec::indefinite();
  r.checks.push_back(close("<A(u) A(u)> = 1/2",
                           two_point(free, {Species::A, u, 0.0}, {Species::A, u, 0.0}), 0.5, tol));
  r.checks.push_back(close("[A(u), E(u)] = i (u,u)", equal_time_commutator(free, u, u),
                           Complex(0.0, inner(u, u)), 1e-10));
  r.checks.push_back(close("[A(dh), E(dh)] = i (dh,dh)", equal_time_commutator(free, dh, dh),
                           Complex(0.0, inner(dh, dh)), 1e-10));
  {
    const double y0 = 0.37;
    const Complex continued = continued_schwinger_series(u + dh, dh).eval(y0);
    const Complex wightman = two_point(free, {Species::A, u + dh, 0.0}, {Species::A, dh, y0});
    r.checks.push_back(close("continuation reproduces two-point function", continued, wightman, 1e-10));
  }
  {
    const auto a = philox4x32_10({0, 0, 0, 0}, {0, 0});
    const auto b = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
    const auto c = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 {0xa4093822u, 0x299f31d0u});
    const bool ok = a == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u} &&
                    b == PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu} &&
                    c == PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
    r.checks.push_back({"Philox4x32-10 known answers", ok, ""});
  }
  r.checks.push_back(close("maxdeg 1 Gram determinant", gram_longitudinal_mode(1).determinant(),
                           -0.25, tol));
  Json rows = Json::array();
  for (const auto& c : r.checks) rows.push_back(c.name);
  r.record["audited"] = rows;
  r.record["summary"] = std::to_string(r.checks.size()) + " convention checks";
}

}  // namespace

ScenarioResult run_scenario(const Config& config, const RunOptions& options) {
  ScenarioResult r;
  r.scenario = config.string("scenario");
  r.name = config.has("name") ? config.string("name") : r.scenario;
  r.record = Json::object();
  Json echo = Json::object();
  for (const auto& [k, v] : config.entries()) echo[k] = v;
  try {
    if (r.scenario == "state-eval") {
      state_eval(config, r);
    } else if (r.scenario == "spectral") {
      spectral(config, r);
    } else if (r.scenario == "theta-demo") {
      theta_demo(config, r);
    } else if (r.scenario == "gram") {
      gram(config, r);
    } else if (r.scenario == "mc-schwinger") {
      mc_schwinger(config, options, r);
    } else if (r.scenario == "positive-exp") {
      positive_exp(config, options, r);
    } else {
      convention_audit(config, r);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const MeanModeUnsupported& e) {
    throw ScenarioError(std::string("MeanModeUnsupported: ") + e.what(), echo);
  } catch (const UnsupportedState& e) {
    throw ScenarioError(std::string("UnsupportedState: ") + e.what(), echo);
  } catch (const DegreeUnsupported& e) {
    throw ScenarioError(std::string("DegreeUnsupported: ") + e.what(), echo);
  } catch (const Json::exception& e) {
    throw ScenarioError(std::string("malformed input: ") + e.what(), echo);
  } catch (const std::exception& e) {
    throw ScenarioError(e.what(), echo);
  }
  return r;
}

}  // namespace tglab::cli
