#pragma once

#include "conegap/cone.hpp"
#include "conegap/rng.hpp"

namespace conegap {

/// Haar-distributed unitary (QR of a complex Gaussian matrix).
CMatrix random_unitary(Index n, Rng& rng);

struct GapInstance {
  CMatrix t;
  ProjectiveCone cone;
  /// Blockwise certificate: T maps cone* into C_{pi,certified_aperture}*,
  /// with certified_aperture < cone.aperture().
  double certified_aperture = 0.0;
};

/// A cone-preserving perturbation of a diagonal spectrum, conjugated by a
/// random unitary: p eigenvalues of modulus in [3, 6], the rest in
/// [0.05, 1.5]. Redrawn until the blockwise bound certifies a strict
/// contraction of C_{pi,aperture}.
GapInstance sample_gap_instance(Index n, Index p, double aperture, Rng& rng);

}  // namespace conegap
