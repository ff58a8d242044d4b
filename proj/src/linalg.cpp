#include "conegap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conegap {

Frame::Frame(CMatrix q) : q_(std::move(q)) {
  require(q_.cols() <= q_.rows() && q_.cols() > 0, ErrorCode::InvalidArgument,
          "frame must be n x p with 0 < p <= n");
  const CMatrix gram = q_.adjoint() * q_;
  const double defect =
      (gram - CMatrix::Identity(q_.cols(), q_.cols())).cwiseAbs().maxCoeff();
  require(defect <= 1e-10, ErrorCode::InvalidArgument,
          "columns are not orthonormal (defect " + std::to_string(defect) + ")");
}

Frame Frame::coordinate(Index n, Index p) {
  return Frame(CMatrix::Identity(n, p));
}

namespace detail {

void positive_qr(const CMatrix& columns, CMatrix& q, CMatrix& r) {
  const Index n = columns.rows();
  const Index p = columns.cols();
  Eigen::HouseholderQR<CMatrix> qr(columns);
  q = qr.householderQ() * CMatrix::Identity(n, p);
  r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (Index i = 0; i < p; ++i) {
    const double mod = std::abs(r(i, i));
    if (mod == 0.0) continue;
    const Complex phase = r(i, i) / mod;
    q.col(i) *= phase;
    r.row(i) *= std::conj(phase);
    r(i, i) = mod;
  }
}

}  // namespace detail

QrResult qr_orthonormalize(const CMatrix& columns) {
  require(columns.rows() >= columns.cols() && columns.cols() > 0,
          ErrorCode::DimensionMismatch, "qr_orthonormalize expects n x p with p <= n");
  const RVector sv = singular_values(columns);
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin <= 1e-12 * smax) {
    std::ostringstream msg;
    msg << "smallest singular value " << smin << " against largest " << smax;
    throw Error(ErrorCode::RankDeficient, msg.str());
  }
  CMatrix q, r;
  detail::positive_qr(columns, q, r);
  return {Frame(std::move(q)), std::move(r)};
}

RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

void sort_by_modulus(std::vector<Complex>& values, double tie_tol) {
  std::sort(values.begin(), values.end(),
            [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  // Regroup runs whose moduli agree to tie_tol and order them by (re, im).
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    while (end < values.size() &&
           std::abs(values[end - 1]) - std::abs(values[end]) <= tie_tol)
      ++end;
    std::sort(values.begin() + start, values.begin() + end, [](Complex a, Complex b) {
      if (a.real() != b.real()) return a.real() > b.real();
      return a.imag() > b.imag();
    });
    start = end;
  }
}

std::vector<Complex> eigenvalues(const CMatrix& m) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "eigenvalues expects a square matrix");
  require(m.rows() <= 32, ErrorCode::InvalidArgument, "eigenvalues supports n <= 32");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "complex Schur iteration did not converge");
  }
  const CMatrix& vecs = solver.eigenvectors();
  const auto& vals = solver.eigenvalues();
  const double scale = std::max(operator_norm(m), 1e-300);
  double residual = 0.0;
  for (Index k = 0; k < m.rows(); ++k) {
    residual = std::max(residual, (m * vecs.col(k) - vals(k) * vecs.col(k)).norm() /
                                      (scale * vecs.col(k).norm()));
  }
  if (!(residual <= 1e-6)) {
    std::ostringstream msg;
    msg << "eigenpair residual " << residual;
    throw Error(ErrorCode::NoConvergence, msg.str());
  }
  std::vector<Complex> out(vals.data(), vals.data() + vals.size());
  sort_by_modulus(out, 1e-12 * scale);
  return out;
}

}  // namespace conegap
