#include "tglab/euclidean.hpp"

#include "tglab/philox.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace tglab {

namespace {
constexpr Complex kI{0.0, 1.0};

void require_zero_mean(const VectorFunction& f, const char* what) {
  if (!f.has_zero_mean()) {
    throw MeanModeUnsupported(std::string(what) +
                              ": smearing has a mean; the Euclidean kernel is singular at k = 0");
  }
}

std::vector<double> sorted_taus(std::vector<double> taus) {
  std::sort(taus.begin(), taus.end());
  return taus;
}
}  // namespace

void validate(const EuclideanConfig& config) {
  if (!config.grid) throw std::invalid_argument("EuclideanConfig: grid missing");
  if (config.samples == 0) throw std::invalid_argument("EuclideanConfig: samples must be >= 1");
  if (config.batches < 2) throw std::invalid_argument("EuclideanConfig: batches must be >= 2");
  const auto taus = sorted_taus(config.taus);
  if (std::adjacent_find(taus.begin(), taus.end()) != taus.end()) {
    throw std::invalid_argument("EuclideanConfig: taus must be distinct");
  }
}

// ---------------------------------------------------------------------------

Complex schwinger_transverse(const VectorFunction& f, double tau1, const VectorFunction& g,
                             double tau2) {
  require_zero_mean(f, "schwinger_two_point");
  require_zero_mean(g, "schwinger_two_point");
  require_same_grid(*f.grid(), *g.grid());
  const auto& grid = *f.grid();
  const auto pf = transverse_project(f);
  const auto pg = transverse_project(g);
  const double gap = std::abs(tau1 - tau2);
  Complex acc{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.kmag(i);
    acc += pf[i].dot(pg[i]) * std::exp(-w * gap) / (2.0 * w);
  }
  return grid.volume() * acc;
}

namespace {
Complex longitudinal_pairing(const VectorFunction& f, const VectorFunction& g) {
  const auto& grid = *f.grid();
  const auto df = divergence(f);
  const auto dg = divergence(g);
  Complex acc{};
  for (std::size_t i = 0; i < grid.size(); ++i) acc += std::conj(df[i]) * dg[i] / grid.kmag2(i);
  return grid.volume() * acc;
}
}  // namespace

Complex schwinger_two_point(const VectorFunction& f, double tau1, const VectorFunction& g,
                            double tau2) {
  const Complex tr = schwinger_transverse(f, tau1, g, tau2);
  return tr - 0.5 * std::abs(tau1 - tau2) * longitudinal_pairing(f, g);
}

QuasiPolynomialSeries continued_transverse_series(const VectorFunction& f,
                                                  const VectorFunction& g) {
  require_zero_mean(f, "continued_schwinger_series");
  require_zero_mean(g, "continued_schwinger_series");
  require_same_grid(*f.grid(), *g.grid());
  const auto& grid = *f.grid();
  const auto pf = transverse_project(f);
  const auto pg = transverse_project(g);
  QuasiPolynomialSeries out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.kmag(i);
    out.add_term(w, grid.volume() * pf[i].dot(pg[i]) / (2.0 * w), w);
  }
  return out;
}

QuasiPolynomialSeries continued_schwinger_series(const VectorFunction& f,
                                                 const VectorFunction& g) {
  auto out = continued_transverse_series(f, g);
  const auto& grid = *f.grid();
  double momentum = 0.0;
  const auto df = divergence(f);
  const auto dg = divergence(g);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (df[i] != Complex{} && dg[i] != Complex{}) momentum = std::max(momentum, grid.kmag(i));
  }
  // -(|dtau|/2) C with |dtau| = -i y0.
  out.add_linear(Complex{}, 0.5 * kI * longitudinal_pairing(f, g), momentum);
  return out;
}

namespace {
Complex wick_pairs(std::span<const EuclideanLabel> labels, std::vector<std::size_t>& open) {
  if (open.empty()) return 1.0;
  if (open.size() % 2 == 1) return 0.0;
  const std::size_t first = open.front();
  Complex total{};
  for (std::size_t j = 1; j < open.size(); ++j) {
    std::vector<std::size_t> rest;
    for (std::size_t m = 1; m < open.size(); ++m) {
      if (m != j) rest.push_back(open[m]);
    }
    const auto& a = labels[first];
    const auto& b = labels[open[j]];
    total += schwinger_two_point(a.f, a.tau, b.f, b.tau) * wick_pairs(labels, rest);
  }
  return total;
}
}  // namespace

Complex schwinger_wick(std::span<const EuclideanLabel> labels) {
  std::vector<std::size_t> open(labels.size());
  for (std::size_t j = 0; j < open.size(); ++j) open[j] = j;
  return wick_pairs(labels, open);
}

// ---------------------------------------------------------------------------

std::pair<Vec3, Vec3> polarization_basis(const Vec3& k) {
  const Vec3 khat = k.normalized();
  Eigen::Index axis = 0;
  khat.cwiseAbs().minCoeff(&axis);
  const Vec3 e1 = khat.cross(Vec3::Unit(axis)).normalized();
  const Vec3 e2 = khat.cross(e1);
  return {e1, e2};
}

FieldSample::FieldSample(GridPtr grid, std::shared_ptr<const std::vector<double>> taus)
    : grid_(std::move(grid)), taus_(std::move(taus)), modes_(grid_->size()) {
  const std::size_t cells = modes_ * taus_->size();
  a_.assign(cells, CVec3::Zero());
  xi_.assign(cells, Complex{});
  z1_.assign(modes_, Complex{});
  z2_.assign(modes_, Complex{});
}

std::size_t FieldSample::tau_index(double tau) const {
  const auto it = std::lower_bound(taus_->begin(), taus_->end(), tau);
  if (it == taus_->end() || *it != tau) {
    throw std::out_of_range("FieldSample: tau " + std::to_string(tau) + " was not sampled");
  }
  return static_cast<std::size_t>(it - taus_->begin());
}

Complex FieldSample::phi(std::size_t mode, std::size_t tau) const {
  return xi(mode, tau) + z(mode) - zbar(mode) * std::abs((*taus_)[tau]);
}

double FieldSample::transverse(const VectorFunction& f, std::size_t tau) const {
  Complex acc{};
  for (std::size_t i = 0; i < modes_; ++i) acc += f[i].dot(a(i, tau));
  return std::pow(grid_->volume(), 0.5) * acc.real();
}

double FieldSample::xi_smeared(const ScalarFunction& h, std::size_t tau) const {
  Complex acc{};
  for (std::size_t i = 0; i < modes_; ++i) acc += std::conj(h[i]) * xi(i, tau);
  return std::pow(grid_->volume(), 0.5) * acc.real();
}

Complex FieldSample::phi_smeared(const ScalarFunction& h, std::size_t tau) const {
  Complex acc{};
  for (std::size_t i = 0; i < modes_; ++i) acc += std::conj(h[i]) * phi(i, tau);
  return std::pow(grid_->volume(), 0.5) * acc;
}

Complex FieldSample::composite(const VectorFunction& f, std::size_t tau) const {
  return transverse(f, tau) - phi_smeared(divergence(f), tau);
}

FieldSample draw_sample(const EuclideanConfig& config, std::uint64_t index) {
  auto taus = std::make_shared<const std::vector<double>>(sorted_taus(config.taus));
  FieldSample s(config.grid, taus);
  const auto& grid = *config.grid;
  const auto& t = *taus;
  const std::size_t nt = t.size();
  const std::size_t modes = grid.size();
  NormalStream rng(config.seed, index);

  // Circular complex normal with E|c|^2 = var.
  auto circular = [&rng](double var) {
    const double scale = std::sqrt(0.5 * var);
    const double re = rng.next();
    const double im = rng.next();
    return Complex(re * scale, im * scale);
  };

  std::vector<Complex> path(nt);
  for (std::size_t i = 0; i < modes; ++i) {
    if (!grid.is_representative(i)) continue;
    const std::size_t j = grid.partner(i);
    const double w = grid.kmag(i);
    const double k2 = grid.kmag2(i);
    const auto [e1, e2] = polarization_basis(grid.k(i));

    // Stationary OU, exact AR(1) transitions between sorted times.
    for (int pol = 0; pol < 2; ++pol) {
      const Vec3& e = pol == 0 ? e1 : e2;
      const double var = 1.0 / (2.0 * w);
      for (std::size_t m = 0; m < nt; ++m) {
        if (m == 0) {
          path[m] = circular(var);
        } else {
          const double rho = std::exp(-w * (t[m] - t[m - 1]));
          path[m] = rho * path[m - 1] + circular(var * (1.0 - rho * rho));
        }
        s.a_[m * modes + i] += e.cast<Complex>() * path[m];
      }
    }

    // Two Brownian branches pinned at xi(0) = 0.
    const auto first_nonneg =
        static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), 0.0) - t.begin());
    Complex value{};
    double last = 0.0;
    for (std::size_t m = first_nonneg; m < nt; ++m) {
      value += circular((t[m] - last) / k2);
      last = t[m];
      s.xi_[m * modes + i] = value;
    }
    value = Complex{};
    last = 0.0;
    for (std::size_t m = first_nonneg; m-- > 0;) {
      value += circular((last - t[m]) / k2);
      last = t[m];
      s.xi_[m * modes + i] = value;
    }

    s.z1_[i] = circular(0.25 / k2);
    s.z2_[i] = circular(0.25 / k2);

    for (std::size_t m = 0; m < nt; ++m) {
      s.a_[m * modes + j] = s.a_[m * modes + i].conjugate();
      s.xi_[m * modes + j] = std::conj(s.xi_[m * modes + i]);
    }
    s.z1_[j] = std::conj(s.z1_[i]);
    s.z2_[j] = std::conj(s.z2_[i]);
  }
  return s;
}

std::vector<FieldSample> sample_ensemble(const EuclideanConfig& config) {
  validate(config);
  std::vector<FieldSample> out;
  out.reserve(config.samples);
  for (std::size_t i = 0; i < config.samples; ++i) out.push_back(draw_sample(config, i));
  return out;
}

// ---------------------------------------------------------------------------

McEstimate mc_average(const EuclideanConfig& config,
                      const std::function<Complex(const FieldSample&)>& observable) {
  validate(config);
  const std::size_t n = config.samples;
  std::vector<Complex> values(n);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(n)));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = observable(draw_sample(config, i));
  };
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
    }
    for (auto& th : pool) th.join();
  }

  McEstimate out;
  out.samples = n;
  Complex total{};
  for (const auto& v : values) total += v;
  out.estimate = total / static_cast<double>(n);

  const std::size_t batches = std::min(config.batches, n);
  if (batches < 2) return out;
  std::vector<Complex> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t begin = n * b / batches;
    const std::size_t end = n * (b + 1) / batches;
    Complex acc{};
    for (std::size_t i = begin; i < end; ++i) acc += values[i];
    means[b] = acc / static_cast<double>(end - begin);
  }
  Complex centre{};
  for (const auto& m : means) centre += m;
  centre /= static_cast<double>(batches);
  double var_re = 0.0;
  double var_im = 0.0;
  for (const auto& m : means) {
    var_re += std::norm(m.real() - centre.real());
    var_im += std::norm(m.imag() - centre.imag());
  }
  const double denom = static_cast<double>(batches - 1) * static_cast<double>(batches);
  out.se_re = std::sqrt(var_re / denom);
  out.se_im = std::sqrt(var_im / denom);
  out.stderr_ = std::hypot(out.se_re, out.se_im);
  return out;
}

namespace {
void merge_taus(EuclideanConfig& config, std::span<const EuclideanLabel> labels) {
  for (const auto& l : labels) {
    if (std::find(config.taus.begin(), config.taus.end(), l.tau) == config.taus.end()) {
      config.taus.push_back(l.tau);
    }
  }
}
}  // namespace

McEstimate mc_moment(EuclideanConfig config, std::span<const EuclideanLabel> labels) {
  for (const auto& l : labels) require_zero_mean(l.f, "mc_moment");
  merge_taus(config, labels);
  if (labels.empty()) {
    McEstimate one;
    one.estimate = 1.0;
    one.samples = config.samples;
    return one;
  }
  std::vector<ScalarFunction> divs;
  divs.reserve(labels.size());
  for (const auto& l : labels) divs.push_back(divergence(l.f));
  return mc_average(config, [&](const FieldSample& s) {
    Complex prod = 1.0;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      const std::size_t ti = s.tau_index(labels[j].tau);
      prod *= s.transverse(labels[j].f, ti) - s.phi_smeared(divs[j], ti);
    }
    return prod;
  });
}

// ---------------------------------------------------------------------------

bool charge_neutral(std::span<const EuclideanLabel> factors, double tol) {
  if (factors.empty()) return true;
  const auto& grid = *factors.front().f.grid();
  double scale = 0.0;
  double mean_scale = 0.0;
  std::vector<Complex> charge(grid.size(), Complex{});
  Vec3 mean = Vec3::Zero();
  for (const auto& factor : factors) {
    require_same_grid(grid, *factor.f.grid());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Eigen::Vector3cd kc = grid.k(i).cast<Complex>();
      charge[i] += kc.dot(factor.f[i]);
      scale = std::max(scale, grid.kmag(i) * factor.f[i].norm());
    }
    mean += factor.f.mean();
    mean_scale = std::max(mean_scale, factor.f.max_abs());
  }
  for (const auto& c : charge) {
    if (std::abs(c) > tol * scale) return false;
  }
  return mean.norm() <= tol * mean_scale;
}

namespace {

Complex xi_kernel(const ScalarFunction& h1, double tau1, const ScalarFunction& h2, double tau2) {
  if (tau1 * tau2 <= 0.0) return 0.0;
  const auto& grid = *h1.grid();
  const double overlap = std::min(std::abs(tau1), std::abs(tau2));
  Complex acc{};
  for (std::size_t i = 0; i < grid.size(); ++i) acc += std::conj(h1[i]) * h2[i] / grid.kmag2(i);
  return grid.volume() * overlap * acc;
}

}  // namespace

Complex positive_exponential_correlation(std::span<const EuclideanLabel> factors, double tol) {
  if (!charge_neutral(factors, tol)) return 0.0;
  std::vector<VectorFunction> fs;
  std::vector<ScalarFunction> divs;
  for (const auto& factor : factors) {
    fs.push_back(factor.f.with_mean(Vec3::Zero()));
    divs.push_back(divergence(factor.f));
  }
  Complex var{};
  for (std::size_t j = 0; j < factors.size(); ++j) {
    for (std::size_t l = 0; l < factors.size(); ++l) {
      var += schwinger_transverse(fs[j], factors[j].tau, fs[l], factors[l].tau);
      var += xi_kernel(divs[j], factors[j].tau, divs[l], factors[l].tau);
    }
  }
  return std::exp(-0.5 * var);
}

McEstimate mc_positive_exponential(EuclideanConfig config, std::span<const EuclideanLabel> factors,
                                   double tol) {
  merge_taus(config, factors);
  if (!charge_neutral(factors, tol)) {
    McEstimate zero;
    zero.estimate = 0.0;
    zero.samples = config.samples;
    return zero;
  }
  std::vector<VectorFunction> fs;
  std::vector<ScalarFunction> divs;
  for (const auto& factor : factors) {
    fs.push_back(factor.f.with_mean(Vec3::Zero()));
    divs.push_back(divergence(factor.f));
  }
  return mc_average(config, [&](const FieldSample& s) {
    double phase = 0.0;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const std::size_t ti = s.tau_index(factors[j].tau);
      phase += s.transverse(fs[j], ti) - s.xi_smeared(divs[j], ti);
    }
    return std::polar(1.0, phase);
  });
}

Complex indefinite_exponential_correlation(std::span<const EuclideanLabel> factors) {
  Complex sum{};
  for (const auto& a : factors) {
    for (const auto& b : factors) sum += schwinger_two_point(a.f, a.tau, b.f, b.tau);
  }
  return std::exp(-0.5 * sum);
}

McEstimate mc_indefinite_exponential(EuclideanConfig config,
                                     std::span<const EuclideanLabel> factors) {
  for (const auto& l : factors) require_zero_mean(l.f, "mc_indefinite_exponential");
  merge_taus(config, factors);
  std::vector<ScalarFunction> divs;
  for (const auto& factor : factors) divs.push_back(divergence(factor.f));
  return mc_average(config, [&](const FieldSample& s) {
    Complex exponent{};
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const std::size_t ti = s.tau_index(factors[j].tau);
      exponent += s.transverse(factors[j].f, ti) - s.phi_smeared(divs[j], ti);
    }
    return std::exp(kI * exponent);
  });
}

Eigen::MatrixXcd reflection_gram(const std::vector<std::vector<EuclideanLabel>>& functionals,
                                 double tol) {
  const auto n = static_cast<Eigen::Index>(functionals.size());
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      std::vector<EuclideanLabel> combined;
      for (const auto& l : functionals[a]) combined.push_back({-l.f, -l.tau});
      for (const auto& l : functionals[b]) combined.push_back(l);
      gram(a, b) = positive_exponential_correlation(combined, tol);
    }
  }
  return gram;
}

}  // namespace tglab
