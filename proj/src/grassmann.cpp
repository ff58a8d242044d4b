#include "conegap/grassmann.hpp"

#include <algorithm>
#include <cmath>

namespace conegap {

Subspace Subspace::span(const CMatrix& columns) {
  return Subspace(qr_orthonormalize(columns).q);
}

namespace {

void check_pair(const Subspace& v, const Subspace& w) {
  require(v.ambient_dim() == w.ambient_dim() && v.dim() == w.dim(),
          ErrorCode::DimensionMismatch, "subspaces must share n and p");
}

}  // namespace

PrincipalAngles principal_angles(const Subspace& v, const Subspace& w) {
  check_pair(v, w);
  const Index p = v.dim();
  const Index n = v.ambient_dim();
  PrincipalAngles out;
  out.angles.assign(static_cast<std::size_t>(p), 0.0);
  if (p == n) return out;
  // Cosines from Q_V* Q_W and sines from (I - P_V) Q_W, paired so that
  // small angles keep full relative accuracy.
  const RVector cosines = singular_values(v.basis().adjoint() * w.basis());
  const CMatrix residual = w.basis() - v.basis() * (v.basis().adjoint() * w.basis());
  const RVector sines = singular_values(residual);
  for (Index i = 0; i < p; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    const double s = std::clamp(sines(p - 1 - i), 0.0, 1.0);
    out.angles[static_cast<std::size_t>(i)] = std::atan2(s, c);
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

double d_hausdorff(const Subspace& v, const Subspace& w) {
  return 2.0 * std::sin(principal_angles(v, w).largest() / 2.0);
}

double d_delta(const Subspace& v, const Subspace& w) {
  return std::sin(principal_angles(v, w).largest());
}

double d_wedge(const Subspace& v, const Subspace& w) {
  // 1 - prod cos = -expm1(sum log cos), evaluated without cancellation.
  double log_prod = 0.0;
  for (double theta : principal_angles(v, w).angles) {
    const double s = std::sin(theta);
    if (s >= 1.0) return std::sqrt(2.0);
    log_prod += 0.5 * std::log1p(-s * s);
  }
  return std::sqrt(std::max(0.0, -2.0 * std::expm1(log_prod)));
}

double projective_distance(const WedgeTensor& a, const WedgeTensor& b) {
  require(a.n == b.n && a.p == b.p, ErrorCode::DimensionMismatch, "tensor shapes differ");
  const double na = a.coords.norm();
  const double nb = b.coords.norm();
  require(na > 0.0 && nb > 0.0, ErrorCode::InvalidArgument, "projective distance of zero tensor");
  const Complex inner = a.coords.dot(b.coords) / (na * nb);
  const double mod = std::abs(inner);
  const Complex phase = mod > 0.0 ? std::conj(inner) / mod : Complex(1.0);
  return (a.coords / na - phase * b.coords / nb).norm();
}

std::vector<CVector> right_decomposition(const Subspace& v) {
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(v.dim()));
  for (Index i = 0; i < v.dim(); ++i) out.emplace_back(v.basis().col(i));
  return out;
}

}  // namespace conegap
