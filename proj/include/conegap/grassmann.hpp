#pragma once

#include <vector>

#include "conegap/exterior.hpp"
#include "conegap/linalg.hpp"

namespace conegap {

/// A p-dimensional subspace of C^n carried by an orthonormal frame. Frames
/// are not canonical: compare subspaces with d_hausdorff, not by frame.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(Frame frame) : frame_(std::move(frame)) {}

  /// Span of the columns (must be linearly independent).
  static Subspace span(const CMatrix& columns);

  const Frame& frame() const { return frame_; }
  const CMatrix& basis() const { return frame_.matrix(); }
  Index ambient_dim() const { return frame_.ambient_dim(); }
  Index dim() const { return frame_.dim(); }

  /// Orthogonal projector Q Q*.
  CMatrix projector() const { return basis() * basis().adjoint(); }

  /// Unit Plucker representative wedge(Q).
  WedgeTensor representative() const { return wedge(basis()); }

 private:
  Frame frame_;
};

/// Ascending principal angles in [0, pi/2].
struct PrincipalAngles {
  std::vector<double> angles;

  double largest() const { return angles.empty() ? 0.0 : angles.back(); }
};

PrincipalAngles principal_angles(const Subspace& v, const Subspace& w);

/// Hausdorff distance between the unit spheres: 2 sin(theta_max / 2).
double d_hausdorff(const Subspace& v, const Subspace& w);

/// Gap metric sup_{x in S_V} d(x, W) symmetrized: sin(theta_max).
double d_delta(const Subspace& v, const Subspace& w);

/// min_{|lambda|=1} ||v - lambda w|| for unit Plucker representatives:
/// sqrt(2 - 2 prod cos theta_i).
double d_wedge(const Subspace& v, const Subspace& w);

/// Phase-aligned Plucker distance between two nonzero tensors after scaling
/// each to unit norm.
double projective_distance(const WedgeTensor& a, const WedgeTensor& b);

/// A right decomposition of V. Under the Euclidean norm any orthonormal
/// basis qualifies, with adapted forms l_i = <., x_i>.
std::vector<CVector> right_decomposition(const Subspace& v);

}  // namespace conegap
