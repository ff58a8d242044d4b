#include "conegap/instances.hpp"

#include <numbers>

namespace conegap {

CMatrix random_unitary(Index n, Rng& rng) {
  return qr_orthonormalize(rng.complex_matrix(n, n)).q.matrix();
}

namespace {

Complex random_phase(double modulus, Rng& rng) {
  return std::polar(modulus, 2.0 * std::numbers::pi * rng.uniform());
}

}  // namespace

GapInstance sample_gap_instance(Index n, Index p, double aperture, Rng& rng) {
  require(p >= 1 && p < n, ErrorCode::InvalidArgument, "need 1 <= p < n");
  require(aperture > 0.0, ErrorCode::InvalidArgument, "aperture must be positive");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CMatrix t = CMatrix::Zero(n, n);
    for (Index i = 0; i < p; ++i) t(i, i) = random_phase(rng.uniform(3.0, 6.0), rng);
    for (Index i = p; i < n; ++i) t(i, i) = random_phase(rng.uniform(0.05, 1.5), rng);
    const CMatrix g = rng.complex_matrix(n, n);
    t += (0.1 * rng.uniform() / operator_norm(g)) * g;
    const CMatrix u = random_unitary(n, rng);
    GapInstance out{u * t * u.adjoint(),
                    ProjectiveCone(Frame(CMatrix(u.leftCols(p))), aperture), 0.0};
    const ConeMappingCheck check = check_maps_cone(out.t, out.cone, out.cone, 8, rng.bits());
    if (check.certified && check.certified_aperture < aperture) {
      out.certified_aperture = check.certified_aperture;
      return out;
    }
  }
  throw Error(ErrorCode::NoConvergence, "could not draw a certified instance");
}

}  // namespace conegap
