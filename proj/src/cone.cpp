#include "conegap/cone.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "conegap/nelder_mead.hpp"

namespace conegap {

ProjectiveCone::ProjectiveCone(Frame frame, double aperture)
    : frame_(std::move(frame)), aperture_(aperture) {
  require(aperture_ > 0.0 && std::isfinite(aperture_), ErrorCode::InvalidArgument,
          "cone aperture must be positive and finite");
}

ProjectiveCone ProjectiveCone::coordinate(Index n, Index p, double aperture) {
  return {Frame::coordinate(n, p), aperture};
}

CVector ProjectiveCone::project(const CVector& x) const {
  require(x.size() == ambient_dim(), ErrorCode::DimensionMismatch, "vector dimension != n");
  const CMatrix& f = frame_.matrix();
  return f * (f.adjoint() * x);
}

CVector ProjectiveCone::complement(const CVector& x) const { return x - project(x); }

CMatrix ProjectiveCone::complement_basis() const {
  const Index n = ambient_dim();
  const Index p = dim();
  if (n == p) return CMatrix(n, 0);
  Eigen::HouseholderQR<CMatrix> qr(frame_.matrix());
  const CMatrix full = qr.householderQ();
  return full.rightCols(n - p);
}

double margin(const ProjectiveCone& cone, const CVector& x) {
  require(x.size() == cone.ambient_dim(), ErrorCode::DimensionMismatch, "vector dimension != n");
  const CVector coords = cone.frame().matrix().adjoint() * x;
  const CVector rest = x - cone.frame().matrix() * coords;
  return cone.aperture() * coords.norm() - rest.norm();
}

bool contains(const ProjectiveCone& cone, const CVector& x) { return margin(cone, x) >= 0.0; }

bool contains_rho(const ProjectiveCone& cone, const CVector& x, double rho) {
  require(rho > 0.0, ErrorCode::InvalidArgument, "rho must be positive");
  require(x.size() == cone.ambient_dim(), ErrorCode::DimensionMismatch, "vector dimension != n");
  const double norm = x.norm();
  if (norm == 0.0) return false;
  const CVector coords = cone.frame().matrix().adjoint() * x;
  const double inside = coords.norm();
  const double outside = (x - cone.frame().matrix() * coords).norm();
  if (!(inside > rho * norm)) return false;
  return outside + rho * norm <= cone.aperture() * (inside - rho * norm);
}

double rho_for_aperture(const ProjectiveCone& cone, double inner_aperture) {
  const double a = cone.aperture();
  require(inner_aperture >= 0.0 && inner_aperture < a, ErrorCode::InvalidAperturePair,
          "inner aperture must lie in [0, a)");
  return (a - inner_aperture) / ((1.0 + a) * std::sqrt(1.0 + inner_aperture * inner_aperture));
}

double subspace_aperture(const ProjectiveCone& cone, const Subspace& v) {
  require(v.ambient_dim() == cone.ambient_dim() && v.dim() == cone.dim(),
          ErrorCode::DimensionMismatch, "subspace must be p-dimensional in C^n");
  const CMatrix& f = cone.frame().matrix();
  const CMatrix& q = v.basis();
  const CMatrix coords = f.adjoint() * q;
  const RVector sv = singular_values(coords);
  if (sv(sv.size() - 1) <= 1e-14) return kInfinity;
  const CMatrix rest = q - f * coords;
  return operator_norm(rest * coords.inverse());
}

CVector sample_cone_vector(const ProjectiveCone& cone, Rng& rng, bool on_boundary) {
  const CMatrix& f = cone.frame().matrix();
  const CVector inside = f * rng.complex_vector(cone.dim());
  CVector outside = cone.complement(rng.complex_vector(cone.ambient_dim()));
  const double ratio = on_boundary ? cone.aperture() : cone.aperture() * rng.uniform();
  const double out_norm = outside.norm();
  if (out_norm > 0.0) outside *= ratio * inside.norm() / out_norm;
  CVector x = inside + outside;
  return x / x.norm();
}

Subspace sample_cone_subspace(const ProjectiveCone& cone, Rng& rng, double aperture) {
  const CMatrix& f = cone.frame().matrix();
  const CMatrix g = cone.complement_basis();
  CMatrix graph = f;
  if (g.cols() > 0 && aperture > 0.0) {
    const CMatrix a = rng.complex_matrix(g.cols(), cone.dim());
    graph += g * (a * (aperture / operator_norm(a)));
  }
  return Subspace::span(graph);
}

namespace {

void require_member(const ProjectiveCone& cone, const CVector& x, const char* name) {
  const double tol = 1e-10 * (1.0 + cone.aperture()) * x.norm();
  if (x.norm() == 0.0 || margin(cone, x) < -tol) {
    std::ostringstream msg;
    msg << name << " is not a nonzero vector of the cone (margin " << margin(cone, x) << ")";
    throw Error(ErrorCode::ConeMembership, msg.str());
  }
}

bool collinear(const CVector& x, const CVector& y) {
  CMatrix pair(x.size(), 2);
  pair << x, y;
  const RVector sv = singular_values(pair);
  return sv(1) <= 1e-12 * sv(0);
}

}  // namespace

GaugeRegion gauge_region(const ProjectiveCone& cone, const CVector& x, const CVector& y) {
  require_member(cone, x, "x");
  require_member(cone, y, "y");
  const CMatrix& f = cone.frame().matrix();
  const double a2 = cone.aperture() * cone.aperture();
  const CVector xf = f.adjoint() * x;
  const CVector yf = f.adjoint() * y;
  const CVector xg = x - f * xf;
  const CVector yg = y - f * yf;

  GaugeRegion region;
  region.a = xg.squaredNorm() - a2 * xf.squaredNorm();
  region.b = xg.dot(yg) - a2 * xf.dot(yf);
  region.c0 = yg.squaredNorm() - a2 * yf.squaredNorm();

  if (collinear(x, y)) {
    region.kind = GaugeRegion::Kind::Empty;
    return region;
  }
  const double scale_a = (1.0 + a2) * x.squaredNorm();
  const double scale_b = (1.0 + a2) * x.norm() * y.norm();
  if (region.a > 1e-12 * scale_a) {
    region.kind = GaugeRegion::Kind::Degenerate;
  } else if (std::abs(region.a) <= 1e-12 * scale_a) {
    if (std::abs(region.b) > 1e-12 * scale_b) {
      region.kind = GaugeRegion::Kind::Halfplane;
    } else {
      region.kind = region.c0 > 0.0 ? GaugeRegion::Kind::Degenerate : GaugeRegion::Kind::Empty;
    }
  } else {
    region.center = region.b / region.a;
    const double r2 = std::norm(region.b) / (region.a * region.a) - region.c0 / region.a;
    if (r2 <= 1e-14 * std::norm(region.center)) {
      region.kind = GaugeRegion::Kind::Empty;
    } else {
      region.kind = GaugeRegion::Kind::Disk;
      region.radius = std::sqrt(r2);
    }
  }
  return region;
}

double gauge_delta(const ProjectiveCone& cone, const CVector& x, const CVector& y) {
  const GaugeRegion region = gauge_region(cone, x, y);
  switch (region.kind) {
    case GaugeRegion::Kind::Empty:
      return 0.0;
    case GaugeRegion::Kind::Disk: {
      // 0 is never in E (the cone is C-invariant), so |center| > radius.
      const double q = region.radius / std::abs(region.center);
      if (!(q < 1.0)) return kInfinity;
      return 2.0 * std::atanh(q);
    }
    case GaugeRegion::Kind::Halfplane:
    case GaugeRegion::Kind::Degenerate:
      return kInfinity;
  }
  return kInfinity;
}

double d1(const ProjectiveCone& cone, const CVector& x, const CVector& y) {
  // E_{C cap span(x,y)}(x, y) = E_C(x, y) because z x - y stays in the span;
  // an empty region is exactly span(x, y) inside the cone.
  return gauge_delta(cone, x, y);
}

namespace {

// Distance from z0 (inside E) to the boundary of E along direction u;
// +inf when the ray never leaves E.
double boundary_distance(const std::function<bool(Complex)>& outside, Complex z0, Complex u) {
  double lo = 0.0;
  double hi = 1e-3;
  while (outside(z0 + hi * u)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return kInfinity;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (outside(z0 + mid * u) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Golden-section search for the extremum of g on [lo, hi]; sign = +1 for max.
double golden_extremum(const std::function<double(double)>& g, double lo, double hi, double sign) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double gc = sign * g(c);
  double gd = sign * g(d);
  for (int it = 0; it < 80; ++it) {
    if (gc > gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - ratio * (hi - lo);
      gc = sign * g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + ratio * (hi - lo);
      gd = sign * g(d);
    }
  }
  return sign * std::max(gc, gd);
}

}  // namespace

double gauge_delta_search(const ProjectiveCone& cone, const CVector& x, const CVector& y,
                          int directions) {
  require(directions >= 8, ErrorCode::InvalidArgument, "need at least 8 directions");
  require_member(cone, x, "x");
  require_member(cone, y, "y");
  const CVector xs = x / x.norm();
  const CVector ys = y / y.norm();
  auto depth = [&](Complex z) { return margin(cone, CVector(z * xs - ys)); };
  auto outside = [&](Complex z) { return depth(z) < 0.0; };

  // deepest point of E
  Complex best = 0.0;
  double best_depth = depth(best);
  for (double radius : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) {
    for (int k = 0; k < 16; ++k) {
      const Complex z = std::polar(radius, 2.0 * std::numbers::pi * k / 16);
      const double d = depth(z);
      if (d < best_depth) {
        best_depth = d;
        best = z;
      }
    }
  }
  Eigen::VectorXd start(2);
  start << best.real(), best.imag();
  const NelderMeadResult nm = nelder_mead(
      [&](const Eigen::VectorXd& v) { return depth(Complex(v(0), v(1))); }, start,
      0.1 * std::max(std::abs(best), 0.1), 2000, 1e-15);
  if (!(nm.value < -1e-13)) return 0.0;
  const Complex z0(nm.x(0), nm.x(1));

  auto boundary_modulus = [&](double phi) {
    const Complex u = std::polar(1.0, phi);
    return std::abs(z0 + boundary_distance(outside, z0, u) * u);
  };
  const double step = 2.0 * std::numbers::pi / directions;
  std::vector<double> moduli(directions);
  for (int k = 0; k < directions; ++k) {
    moduli[k] = boundary_modulus(k * step);
    if (!std::isfinite(moduli[k])) return kInfinity;
  }
  const auto hi_it = std::max_element(moduli.begin(), moduli.end());
  const auto lo_it = std::min_element(moduli.begin(), moduli.end());
  const double phi_hi = step * static_cast<double>(hi_it - moduli.begin());
  const double phi_lo = step * static_cast<double>(lo_it - moduli.begin());
  const double sup = std::max(*hi_it, golden_extremum(boundary_modulus, phi_hi - step, phi_hi + step, 1.0));
  const double inf = std::min(*lo_it, golden_extremum(boundary_modulus, phi_lo - step, phi_lo + step, -1.0));
  if (!(inf > 0.0)) return kInfinity;
  return std::log(sup / inf);
}

double diameter_bound(double a_inner, double a_outer) {
  if (!(a_inner > 0.0 && a_inner < a_outer && std::isfinite(a_outer))) {
    std::ostringstream msg;
    msg << "need 0 < a_inner < a_outer, got (" << a_inner << ", " << a_outer << ")";
    throw Error(ErrorCode::InvalidAperturePair, msg.str());
  }
  return 2.0 * std::log((a_outer + a_inner) / (a_outer - a_inner));
}

ConeDistanceEstimate cone_distance(const ProjectiveCone& cone, const Subspace& v,
                                   const Subspace& w, const SearchBudget& budget) {
  const double a = cone.aperture();
  const double av = subspace_aperture(cone, v);
  const double aw = subspace_aperture(cone, w);
  require(av <= a * (1.0 + 1e-9) && aw <= a * (1.0 + 1e-9), ErrorCode::ConeMembership,
          "both subspaces must lie inside the cone");

  ConeDistanceEstimate estimate;
  const double inner = std::max(av, aw);
  if (d_hausdorff(v, w) <= 1e-12) {
    estimate.upper = 0.0;
    return estimate;
  }
  if (inner < a) estimate.upper = inner > 0.0 ? diameter_bound(inner, a) : 0.0;

  const Index p = cone.dim();
  const CMatrix& qv = v.basis();
  const CMatrix& qw = w.basis();
  const auto unpack = [p](const Eigen::VectorXd& params, Index offset) {
    CVector alpha(p);
    for (Index i = 0; i < p; ++i) alpha(i) = Complex(params(offset + 2 * i), params(offset + 2 * i + 1));
    return alpha;
  };
  const auto objective = [&](const Eigen::VectorXd& params) {
    const CVector alpha = unpack(params, 0);
    const CVector beta = unpack(params, 2 * p);
    if (alpha.norm() < 1e-150 || beta.norm() < 1e-150) return 0.0;
    const double value = d1(cone, qv * alpha, qw * beta);
    return -std::min(value, 1e300);
  };

  Rng rng(budget.seed);
  double best = 0.0;
  for (int start = 0; start < budget.starts; ++start) {
    Eigen::VectorXd x0(4 * p);
    for (Index i = 0; i < x0.size(); ++i) x0(i) = rng.normal();
    const NelderMeadResult result = nelder_mead(objective, x0, 0.5, budget.iterations);
    estimate.evaluations += static_cast<std::size_t>(result.evaluations);
    best = std::max(best, -result.value);
  }
  estimate.lower = best >= 1e300 ? kInfinity : best;
  return estimate;
}

Aperture aperture_map(const ProjectiveCone& cone) {
  const double a = cone.aperture();
  return {ApertureMap{cone.frame().matrix().adjoint()}, std::sqrt(1.0 + a * a)};
}

ConeMappingCheck check_maps_cone(const CMatrix& t, const ProjectiveCone& src,
                                 const ProjectiveCone& dst, int samples, std::uint64_t seed) {
  const Index n = src.ambient_dim();
  require(t.rows() == n && t.cols() == n && dst.ambient_dim() == n && dst.dim() == src.dim(),
          ErrorCode::DimensionMismatch, "T, source and destination cones must share n and p");
  require(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
  const CMatrix& f = src.frame().matrix();
  const CMatrix proj = f * f.adjoint();
  require((proj - dst.frame().matrix() * dst.frame().matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
          ErrorCode::InvalidArgument, "source and destination cones must share the projection");

  ConeMappingCheck out;
  const double t_norm = operator_norm(t);
  bool nonzero = true;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const CVector x = (s < src.dim()) ? CVector(f.col(s)) : sample_cone_vector(src, rng, s % 2 == 0);
    const CVector tx = t * x;
    if (tx.norm() <= 1e-14 * std::max(t_norm, 1e-300)) nonzero = false;
    out.worst_margin = std::min(out.worst_margin, margin(dst, tx));
  }
  out.sampled_ok = nonzero && out.worst_margin >= -1e-12 * std::max(t_norm, 1e-300);

  const double b = src.aperture();
  const CMatrix rest = CMatrix::Identity(n, n) - proj;
  const double n_out_in = operator_norm(rest * t * proj);
  const double n_out_out = operator_norm(rest * t * rest);
  const double n_in_out = operator_norm(proj * t * rest);
  const RVector sv = singular_values(f.adjoint() * t * f);
  const double factor = sv(sv.size() - 1) - b * n_in_out;
  if (factor > 0.0) {
    out.certified_aperture = (n_out_in + b * n_out_out) / factor;
    out.certified = out.certified_aperture <= dst.aperture() * (1.0 + 1e-12);
  }
  return out;
}

}  // namespace conegap
