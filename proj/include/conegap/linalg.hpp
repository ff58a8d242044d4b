#pragma once

#include <vector>

#include "conegap/error.hpp"
#include "conegap/types.hpp"

namespace conegap {

/// An n x p matrix with orthonormal columns, ||Q*Q - I||_max <= 1e-10.
class Frame {
 public:
  Frame() = default;

  /// Validates orthonormality; throws InvalidArgument otherwise.
  explicit Frame(CMatrix q);

  /// The first p standard basis vectors of C^n.
  static Frame coordinate(Index n, Index p);

  const CMatrix& matrix() const { return q_; }
  Index ambient_dim() const { return q_.rows(); }
  Index dim() const { return q_.cols(); }

 private:
  CMatrix q_;
};

struct QrResult {
  Frame q;
  CMatrix r;  // p x p upper triangular with positive real diagonal
};

/// Thin QR with the phase of each column fixed so diag(R) is real and
/// positive. Throws RankDeficient when sigma_min <= 1e-12 sigma_max.
QrResult qr_orthonormalize(const CMatrix& columns);

/// Singular values in descending order, min(rows, cols) of them.
RVector singular_values(const CMatrix& m);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// Eigenvalues of a square matrix with n <= 32, sorted by descending
/// modulus; ties in modulus are broken by descending real part and then
/// descending imaginary part.
std::vector<Complex> eigenvalues(const CMatrix& m);

/// Sorts in place with the eigenvalue ordering above. Moduli closer than
/// `tie_tol` are treated as equal.
void sort_by_modulus(std::vector<Complex>& values, double tie_tol);

namespace detail {

/// Householder QR with positive diagonal and no rank test. Returns the thin
/// factors; used inside long products where rank is monitored separately.
void positive_qr(const CMatrix& columns, CMatrix& q, CMatrix& r);

}  // namespace detail

}  // namespace conegap
