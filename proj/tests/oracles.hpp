#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the code under test except for plain Eigen types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Leibniz-formula determinant; fine for k <= 5.
inline Complex leibniz_det(const CMatrix& a) {
  const int k = static_cast<int>(a.rows());
  if (k == 0) return 1.0;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Complex term = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < k; ++i) term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// All increasing k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline CMatrix submatrix(const CMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  CMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

/// Compound matrix by explicit Leibniz minors.
inline CMatrix compound(const CMatrix& m, int p) {
  const auto idx = subsets(static_cast<int>(m.rows()), p);
  CMatrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = leibniz_det(submatrix(m, idx[i], idx[j]));
  return out;
}

/// Plucker coordinates of the columns of x by Leibniz minors.
inline CVector plucker(const CMatrix& x) {
  const auto idx = subsets(static_cast<int>(x.rows()), static_cast<int>(x.cols()));
  std::vector<int> all(x.cols());
  std::iota(all.begin(), all.end(), 0);
  CVector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = leibniz_det(submatrix(x, idx[i], all));
  return out;
}

/// Orthonormal basis via modified Gram-Schmidt.
inline CMatrix gram_schmidt(const CMatrix& a) {
  CMatrix q = a;
  for (int j = 0; j < q.cols(); ++j) {
    for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    q.col(j) /= q.col(j).norm();
  }
  return q;
}

/// Distance between the unit spheres of two subspaces by sampling: the
/// sup over sampled unit x in V of the distance to the unit sphere of W,
/// sqrt(2 - 2 ||P_W x||), symmetrized.
template <class Draw>
double sphere_hausdorff(const CMatrix& qv, const CMatrix& qw, int samples, Draw&& draw) {
  auto one_side = [&](const CMatrix& a, const CMatrix& b) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      CVector coeff = draw(a.cols());
      CVector x = a * coeff;
      x /= x.norm();
      const double proj = (b * (b.adjoint() * x)).norm();
      worst = std::max(worst, std::sqrt(std::max(0.0, 2.0 - 2.0 * proj)));
    }
    return worst;
  };
  return std::max(one_side(qv, qw), one_side(qw, qv));
}

/// min over 10^4 phases of ||v - e^{i phi} w||.
inline double phase_scan(const CVector& v, const CVector& w, int points = 10000) {
  double best = 1e300;
  for (int k = 0; k < points; ++k) {
    const Complex phase = std::polar(1.0, 2.0 * M_PI * k / points);
    best = std::min(best, (v - phase * w).norm());
  }
  return best;
}

}  // namespace oracle
