#include "conegap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conegap {

SubspaceIteration power_iterate_subspace(const CMatrix& t, const ProjectiveCone& cone,
                                         const Subspace& v0, double tol, int max_iter) {
  require(t.rows() == cone.ambient_dim() && t.cols() == cone.ambient_dim(),
          ErrorCode::DimensionMismatch, "T must be n x n");
  require(subspace_aperture(cone, v0) <= cone.aperture() * (1.0 + 1e-9), ErrorCode::ConeExit,
          "starting subspace is not inside the cone");
  SubspaceIteration out;
  out.v = v0;
  for (int k = 1; k <= max_iter; ++k) {
    Subspace next(qr_orthonormalize(t * out.v.basis()).q);
    const double aperture = subspace_aperture(cone, next);
    if (!(aperture <= cone.aperture() * (1.0 + 1e-9))) {
      std::ostringstream msg;
      msg << "iterate " << k << " has aperture " << aperture << " > " << cone.aperture();
      throw Error(ErrorCode::ConeExit, msg.str());
    }
    const double step = d_hausdorff(next, out.v);
    out.history.push_back(step);
    out.v = std::move(next);
    out.iterations = k;
    if (step <= tol) return out;
  }
  std::ostringstream msg;
  msg << "no convergence to " << tol << " after " << max_iter << " iterations (last step "
      << (out.history.empty() ? 0.0 : out.history.back()) << ")";
  throw Error(ErrorCode::NotContracting, msg.str());
}

std::vector<Complex> restricted_eigs(const CMatrix& t, const Subspace& v) {
  require(t.rows() == v.ambient_dim() && t.cols() == v.ambient_dim(),
          ErrorCode::DimensionMismatch, "T must be n x n");
  const CMatrix& q = v.basis();
  const CMatrix tq = t * q;
  const CMatrix compressed = q.adjoint() * tq;
  const double leak = operator_norm(tq - q * compressed);
  if (leak > 1e-6 * operator_norm(t)) {
    std::ostringstream msg;
    msg << "||(I - QQ*) T Q|| = " << leak;
    throw Error(ErrorCode::NotInvariant, msg.str());
  }
  return eigenvalues(compressed);
}

GapReport spectral_gap_report(const CMatrix& t, const ProjectiveCone& cone, double tol,
                              int max_iter, std::uint64_t seed) {
  require(t.rows() <= 32, ErrorCode::InvalidArgument, "spectral_gap_report supports n <= 32");
  const ConeMappingCheck mapping = check_maps_cone(t, cone, cone, 256, seed);
  if (!mapping.sampled_ok) {
    std::ostringstream msg;
    msg << "T does not map the cone into itself (worst margin " << mapping.worst_margin << ")";
    throw Error(ErrorCode::NotConeMapping, msg.str());
  }

  GapReport report;
  SubspaceIteration iteration =
      power_iterate_subspace(t, cone, Subspace(cone.frame()), tol, max_iter);
  report.v = std::move(iteration.v);
  report.history = std::move(iteration.history);
  report.iterations = iteration.iterations;
  report.converged = true;
  report.top_eigs = restricted_eigs(t, report.v);
  report.lambda_product = 1.0;
  for (Complex z : report.top_eigs) report.lambda_product *= z;

  report.spectrum = eigenvalues(t);
  std::vector<bool> used(report.spectrum.size(), false);
  for (Complex z : report.top_eigs) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < report.spectrum.size(); ++k) {
      if (used[k]) continue;
      const double dist = std::abs(report.spectrum[k] - z);
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    used[best] = true;
    report.oracle_mismatch = std::max(report.oracle_mismatch, best_dist);
  }
  for (std::size_t k = 0; k < report.spectrum.size(); ++k)
    if (!used[k]) report.subdominant_modulus = std::max(report.subdominant_modulus, std::abs(report.spectrum[k]));

  const double lambda_p = std::abs(report.top_eigs.back());
  report.observed_ratio = report.subdominant_modulus / lambda_p;
  if (report.subdominant_modulus >= lambda_p * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "|lambda_{p+1}| = " << report.subdominant_modulus << " >= |lambda_p| = " << lambda_p;
    throw Error(ErrorCode::GapViolated, msg.str());
  }
  return report;
}

Complex CTensor::operator()(const WedgeTensor& u) const {
  require(u.n == n && u.p == p, ErrorCode::DimensionMismatch, "tensor shape does not match c");
  return (coords.array() * u.coords.array()).sum();
}

CTensor c_functional(const CMatrix& t, const GapReport& report) {
  const int n = static_cast<int>(t.rows());
  const int p = static_cast<int>(report.v.dim());
  const CMatrix compound = compound_matrix(t, p);
  const Index size = compound.rows();
  const CMatrix shifted = compound.transpose() - report.lambda_product * CMatrix::Identity(size, size);
  Eigen::BDCSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double scale = operator_norm(compound);
  if (size > 1 && sv(size - 2) <= 1e-8 * scale) {
    std::ostringstream msg;
    msg << "lambda is not simple in the compound spectrum (second smallest singular value "
        << sv(size - 2) << ")";
    throw Error(ErrorCode::DefectiveLambda, msg.str());
  }
  CTensor c;
  c.n = n;
  c.p = p;
  c.lambda = report.lambda_product;
  c.h = report.v.representative();
  c.coords = svd.matrixV().col(size - 1);
  const Complex at_h = c(c.h);
  require(std::abs(at_h) > 1e-12 * c.coords.norm(), ErrorCode::DefectiveLambda,
          "left eigenvector annihilates the fixed tensor");
  c.coords /= at_h;
  return c;
}

CMatrix c_factors(const CTensor& c, const Subspace& v) {
  const Index n = v.ambient_dim();
  const Index p = v.dim();
  CMatrix out(p, n);
  for (Index i = 0; i < p; ++i) {
    CMatrix frame = v.basis();
    for (Index k = 0; k < n; ++k) {
      frame.col(i) = CVector::Unit(n, k);
      out(i, k) = c(wedge(frame));
    }
  }
  return out;
}

CVector functional_wedge(const CMatrix& functionals) {
  return row_minors(functionals.transpose());
}

CMatrix spectral_projector(const CTensor& c, const Subspace& v) {
  return v.basis() * c_factors(c, v);
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

LineFit fit_log_line(const std::vector<double>& values, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > floor)) continue;
    const double x = static_cast<double>(k + 1);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  LineFit fit;
  fit.points = m;
  if (m < 2) {
    fit.slope = -std::numeric_limits<double>::infinity();
    return fit;
  }
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

}  // namespace

DecayFit fit_decay(const CMatrix& t, const CTensor& c, const WedgeTensor& u, int steps) {
  const CMatrix compound = compound_matrix(t, c.p);
  const Complex limit_coeff = c(u);
  const CVector limit = limit_coeff * c.h.coords;
  DecayFit fit;
  CVector iterate = u.coords;
  for (int k = 1; k <= steps; ++k) {
    iterate = compound * iterate / c.lambda;
    fit.errors.push_back((iterate - limit).norm());
  }
  const double floor = 1e-12 * (u.coords.norm() + limit.norm());
  const LineFit line = fit_log_line(fit.errors, floor);
  fit.points_used = line.points;
  fit.eta = std::exp(line.slope);
  fit.constant = line.points >= 2 ? std::exp(line.intercept) : 0.0;
  return fit;
}

double log_rate(const std::vector<double>& history, double floor) {
  return fit_log_line(history, floor).slope;
}

CompoundNormBracket compound_norm_bracket(const CMatrix& t, const ProjectiveCone& cone,
                                          const Subspace& w, double rho) {
  require(rho > 0.0, ErrorCode::InvalidArgument, "rho must be positive");
  const Aperture ap = aperture_map(cone);
  const int p = static_cast<int>(cone.dim());
  const Complex base = m_hat(ap.m, w.representative());
  require(std::abs(base) > 1e-300, ErrorCode::ApertureDegenerate, "m-hat vanishes on W");
  const Complex image = m_hat(ap.m, wedge(CMatrix(t * w.basis())));
  CompoundNormBracket out;
  out.ratio = std::abs(image / base);
  out.norm = compound_operator_norm(t, p);
  double factorial = 1.0;
  for (int k = 2; k <= p; ++k) factorial *= k;
  const double inner = std::pow(2.0, p - 1) * ap.k * ap.k / std::pow(rho, p);
  out.lower = out.ratio / std::pow(ap.k, p);
  out.upper = factorial * std::pow(inner, p) * out.ratio;
  return out;
}

}  // namespace conegap
