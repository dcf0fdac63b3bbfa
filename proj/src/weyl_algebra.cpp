#include "tglab/weyl_algebra.hpp"

#include <cmath>
#include <string>

namespace tglab {

namespace {
Complex unit_phase(double angle) { return std::polar(1.0, angle); }

// Keeps long product chains on the unit circle.
Complex renormalized(Complex p) { return p / std::abs(p); }
}  // namespace

WeylElement::WeylElement(VectorFunction f, VectorFunction g, Complex phase)
    : f_(std::move(f)), g_(std::move(g)), phase_(phase) {
  require_same_grid(*f_.grid(), *g_.grid());
  if (std::abs(std::abs(phase_) - 1.0) > 1e-12) {
    throw std::invalid_argument("WeylElement: phase must have unit modulus");
  }
}

WeylElement WeylElement::identity(const GridPtr& grid) {
  return WeylElement(VectorFunction::zero(grid), VectorFunction::zero(grid), 1.0);
}

double symplectic(const VectorFunction& f1, const VectorFunction& g1, const VectorFunction& f2,
                  const VectorFunction& g2) {
  return inner(f1, g2) - inner(g1, f2);
}

double symplectic(const WeylElement& a, const WeylElement& b) {
  return symplectic(a.f(), a.g(), b.f(), b.g());
}

WeylElement multiply(const WeylElement& a, const WeylElement& b) {
  const double sigma = symplectic(a, b);
  return WeylElement(a.f() + b.f(), a.g() + b.g(),
                     renormalized(a.phase() * b.phase() * unit_phase(-0.5 * sigma)));
}

WeylElement adjoint(const WeylElement& w) {
  return WeylElement(-w.f(), -w.g(), std::conj(w.phase()));
}

WeylElement conjugate_by(const WeylElement& v, const WeylElement& w) {
  return multiply(v, multiply(w, adjoint(v)));
}

bool approx_equal(const WeylElement& a, const WeylElement& b, double tol) {
  if (!a.grid()->same_as(*b.grid())) return false;
  if (std::abs(a.phase() - b.phase()) > tol) return false;
  const double scale = std::max(a.f().max_abs(), a.g().max_abs());
  return (a.f() - b.f()).is_zero(tol, scale) && (a.g() - b.g()).is_zero(tol, scale);
}

// ---------------------------------------------------------------------------

std::pair<VectorFunction, VectorFunction> evolve_smearings(const VectorFunction& f,
                                                           const VectorFunction& g, double t) {
  require_same_grid(*f.grid(), *g.grid());
  const auto& grid = *f.grid();
  std::vector<CVec3> ft(grid.size());
  std::vector<CVec3> gt(grid.size());
  // Written as increments so that a pure gradient comes back bit-for-bit.
  auto transverse_part = [](const CVec3& v, const CVec3& along) {
    CVec3 tr = v - along;
    if (tr.norm() <= 1e-14 * v.norm()) tr.setZero();
    return tr;
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3cd kc = grid.k(i).cast<Complex>();
    const double k2 = grid.kmag2(i);
    const double w = grid.kmag(i);
    const CVec3 ftr = transverse_part(f[i], kc * (kc.dot(f[i]) / k2));
    const CVec3 gtr = transverse_part(g[i], kc * (kc.dot(g[i]) / k2));
    const CVec3 fl = f[i] - ftr;
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    ft[i] = f[i];
    gt[i] = g[i];
    if (ftr.squaredNorm() > 0.0 || gtr.squaredNorm() > 0.0) {
      ft[i] += ftr * (c - 1.0) - gtr * (w * s);
      gt[i] += ftr * (s / w) + gtr * (c - 1.0);
    }
    if (t != 0.0 && fl.squaredNorm() > 0.0) gt[i] += t * fl;
  }
  return {VectorFunction(f.grid(), std::move(ft), f.mean()),
          VectorFunction(g.grid(), std::move(gt), g.mean() + t * f.mean())};
}

namespace {
struct Applier {
  const WeylElement& w;

  WeylElement operator()(const SmallGauge& s) const {
    require_same_grid(*s.lambda.grid(), *w.grid());
    const double angle = -inner(s.lambda, divergence(w.f()));
    return w.with_phase(renormalized(w.phase() * unit_phase(angle)));
  }
  WeylElement operator()(const LargeGauge& s) const {
    const double angle = w.grid()->volume() * s.alpha.dot(w.f().mean());
    return w.with_phase(renormalized(w.phase() * unit_phase(angle)));
  }
  WeylElement operator()(const Theta& s) const {
    const double angle = w.grid()->volume() * s.theta.dot(w.g().mean());
    return w.with_phase(renormalized(w.phase() * unit_phase(angle)));
  }
  WeylElement operator()(const TimeShift& s) const {
    auto [ft, gt] = evolve_smearings(w.f(), w.g(), s.t);
    return WeylElement(std::move(ft), std::move(gt), w.phase());
  }
};
}  // namespace

WeylElement apply_automorphism(const AutomorphismSpec& spec, const WeylElement& w) {
  return std::visit(Applier{w}, spec);
}

// ---------------------------------------------------------------------------

namespace {
void require_zero_mean(const ScalarFunction& h, const char* what) {
  if (h.mean() != 0.0) {
    throw MeanModeUnsupported(std::string(what) + ": nonzero mean " + std::to_string(h.mean()));
  }
}
}  // namespace

Complex gauss_conjugation_phase(const ScalarFunction& h, const ScalarFunction& g) {
  require_zero_mean(h, "gauss_conjugation_phase(h)");
  require_zero_mean(g, "gauss_conjugation_phase(g)");
  const auto zero = VectorFunction::zero(h.grid());
  const double sigma = symplectic(zero, -gradient(g), gradient(h), zero);
  return unit_phase(-sigma);
}

Complex gauss_pairing_phase(const ScalarFunction& h, const ScalarFunction& g) {
  require_zero_mean(h, "gauss_pairing_phase(h)");
  require_zero_mean(g, "gauss_pairing_phase(g)");
  return unit_phase(inner(laplacian(h), g));
}

WeylElement gauge_implementer(const ScalarFunction& lambda) {
  require_zero_mean(lambda, "gauge_implementer");
  return WeylElement(VectorFunction::zero(lambda.grid()), gradient(lambda), 1.0);
}

}  // namespace tglab
