#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "conegap/error.hpp"
#include "conegap/linalg.hpp"
#include "conegap/types.hpp"

namespace conegap {

std::uint64_t binomial(int n, int k);

/// Strictly increasing p-tuple in [0, n); the basis label e_{i1} ^ ... ^ e_{ip}.
using MultiIndex = std::vector<int>;

/// All p-subsets of [0, n) in lexicographic order; position == rank.
std::vector<MultiIndex> multi_indices(int n, int p);

/// Lexicographic rank of a strictly increasing index tuple.
std::size_t multi_index_rank(std::span<const int> indices, int n);

/// Determinant of a small square block (closed forms up to 4 x 4).
template <typename Derived>
typename Derived::Scalar small_det(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  switch (a.rows()) {
    case 0: return S(1);
    case 1: return a(0, 0);
    case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3: return Eigen::Matrix<S, 3, 3>(a).determinant();
    case 4: return Eigen::Matrix<S, 4, 4>(a).determinant();
    default: return a.eval().partialPivLu().determinant();
  }
}

/// All p x p minors of an n x p matrix taken at row sets in lexicographic
/// order. These are the Plucker coordinates of its column span.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> row_minors(
    const Eigen::MatrixBase<Derived>& x) {
  using S = typename Derived::Scalar;
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  const auto basis = multi_indices(n, p);
  Eigen::Matrix<S, Eigen::Dynamic, 1> out(static_cast<Index>(basis.size()));
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> block(p, p);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (int r = 0; r < p; ++r) block.row(r) = x.row(basis[k][r]);
    out(static_cast<Index>(k)) = small_det(block);
  }
  return out;
}

/// Element of the p-th exterior power of C^n in the lexicographic basis.
struct WedgeTensor {
  int n = 0;
  int p = 0;
  CVector coords;

  WedgeTensor() = default;
  WedgeTensor(int n_, int p_, CVector coords_);

  static WedgeTensor zero(int n, int p);
  /// The basis element e_{I}.
  static WedgeTensor basis(int n, std::span<const int> indices);

  WedgeTensor& operator+=(const WedgeTensor& other);
  WedgeTensor& operator-=(const WedgeTensor& other);
  WedgeTensor& operator*=(Complex s);
};

WedgeTensor operator+(WedgeTensor a, const WedgeTensor& b);
WedgeTensor operator-(WedgeTensor a, const WedgeTensor& b);
WedgeTensor operator*(Complex s, WedgeTensor a);

/// x_1 ^ ... ^ x_p for the columns of an n x p matrix.
WedgeTensor wedge(const CMatrix& vectors);

/// x ^ u, a (p+1)-vector.
WedgeTensor wedge(const CVector& x, const WedgeTensor& u);

/// Matrix of the induced map on the p-th exterior power: entry (I, J) is
/// det M[I, J]. Materialized densely; C(n, p) is capped at 1820.
CMatrix compound_matrix(const CMatrix& m, int p);

/// Applies a compound matrix to a tensor of matching order.
WedgeTensor apply_compound(const CMatrix& compound, const WedgeTensor& u);

/// Euclidean norm of the coordinates.
double plucker_norm(const WedgeTensor& u);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
};

struct Wedge1Options {
  int samples = 64;
  bool refine = true;
  int iterations = 200;
  std::uint64_t seed = 0;
};

/// Lower bound for the sup-over-unit-functionals norm: the best value of
/// |<l_1 ^ ... ^ l_p, u>| over `samples` random starts, each optionally
/// refined by block-coordinate ascent (each l_i maximized exactly with the
/// others fixed). Starts are drawn sequentially from `seed`, so the value is
/// non-decreasing in `samples`.
double wedge1_lower(const WedgeTensor& u, const Wedge1Options& options = {});

/// Upper bound for the inf-over-decompositions norm: sum_I |u_I| in the best
/// unitary frame found by a greedy Givens pass (at most `max_sweeps`).
double wedge2_upper(const WedgeTensor& u, int max_sweeps = 100);

/// Certified brackets for the two norms.
NormBracket wedge1_bracket(const WedgeTensor& u, const Wedge1Options& options = {});
NormBracket wedge2_bracket(const WedgeTensor& u, const Wedge1Options& options = {});

/// Coordinates of (Lambda^p G) u for the unitary plane rotation
/// G = [[c, -conj(s)], [s, c]] acting on coordinates (i, j), i < j.
WedgeTensor apply_givens(const WedgeTensor& u, int i, int j, double c, Complex s);

/// The map m : C^n -> C^p (a p x n matrix).
struct ApertureMap {
  CMatrix matrix;
};

/// m-hat(u): the linear extension of (x_1..x_p) -> det(m x_1, ..., m x_p).
Complex m_hat(const ApertureMap& m, const WedgeTensor& u);

/// Operator norm of Lambda^p M in the Plucker norm (largest singular value of
/// the compound matrix). Requires p <= n <= 16.
double compound_operator_norm(const CMatrix& m, int p);

}  // namespace conegap
