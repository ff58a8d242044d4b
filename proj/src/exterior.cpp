#include "conegap/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conegap/rng.hpp"

namespace conegap {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
  return result;
}

std::vector<MultiIndex> multi_indices(int n, int p) {
  std::vector<MultiIndex> out;
  if (p < 0 || p > n) return out;
  out.reserve(binomial(n, p));
  MultiIndex idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int pos = p - 1;
    while (pos >= 0 && idx[pos] == n - p + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int k = pos + 1; k < p; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

std::size_t multi_index_rank(std::span<const int> indices, int n) {
  const int p = static_cast<int>(indices.size());
  std::size_t rank = 0;
  int prev = -1;
  for (int i = 0; i < p; ++i) {
    require(indices[i] > prev && indices[i] < n, ErrorCode::InvalidArgument,
            "multi-index must be strictly increasing in [0, n)");
    for (int j = prev + 1; j < indices[i]; ++j) rank += binomial(n - 1 - j, p - 1 - i);
    prev = indices[i];
  }
  return rank;
}

WedgeTensor::WedgeTensor(int n_, int p_, CVector coords_)
    : n(n_), p(p_), coords(std::move(coords_)) {
  require(p >= 0 && p <= n, ErrorCode::DimensionMismatch, "wedge tensor needs 0 <= p <= n");
  require(static_cast<std::uint64_t>(coords.size()) == binomial(n, p),
          ErrorCode::DimensionMismatch, "coordinate count must be C(n, p)");
}

WedgeTensor WedgeTensor::zero(int n, int p) {
  return WedgeTensor(n, p, CVector::Zero(static_cast<Index>(binomial(n, p))));
}

WedgeTensor WedgeTensor::basis(int n, std::span<const int> indices) {
  WedgeTensor u = zero(n, static_cast<int>(indices.size()));
  u.coords(static_cast<Index>(multi_index_rank(indices, n))) = 1.0;
  return u;
}

WedgeTensor& WedgeTensor::operator+=(const WedgeTensor& other) {
  require(n == other.n && p == other.p, ErrorCode::DimensionMismatch, "tensor shapes differ");
  coords += other.coords;
  return *this;
}

WedgeTensor& WedgeTensor::operator-=(const WedgeTensor& other) {
  require(n == other.n && p == other.p, ErrorCode::DimensionMismatch, "tensor shapes differ");
  coords -= other.coords;
  return *this;
}

WedgeTensor& WedgeTensor::operator*=(Complex s) {
  coords *= s;
  return *this;
}

WedgeTensor operator+(WedgeTensor a, const WedgeTensor& b) { return a += b; }
WedgeTensor operator-(WedgeTensor a, const WedgeTensor& b) { return a -= b; }
WedgeTensor operator*(Complex s, WedgeTensor a) { return a *= s; }

WedgeTensor wedge(const CMatrix& vectors) {
  const int n = static_cast<int>(vectors.rows());
  const int p = static_cast<int>(vectors.cols());
  require(p <= n, ErrorCode::DimensionMismatch, "wedge needs p <= n vectors");
  return WedgeTensor(n, p, row_minors(vectors));
}

WedgeTensor wedge(const CVector& x, const WedgeTensor& u) {
  require(x.size() == u.n && u.p < u.n, ErrorCode::DimensionMismatch,
          "x ^ u needs x in C^n and p < n");
  const int n = u.n;
  const int q = u.p + 1;
  const auto basis = multi_indices(n, q);
  CVector out(static_cast<Index>(basis.size()));
  MultiIndex rest(u.p);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const MultiIndex& idx = basis[k];
    Complex acc = 0.0;
    for (int r = 0; r < q; ++r) {
      int w = 0;
      for (int s = 0; s < q; ++s)
        if (s != r) rest[w++] = idx[s];
      const Complex term = x(idx[r]) * u.coords(static_cast<Index>(multi_index_rank(rest, n)));
      acc += (r % 2 == 0) ? term : -term;
    }
    out(static_cast<Index>(k)) = acc;
  }
  return WedgeTensor(n, q, std::move(out));
}

CMatrix compound_matrix(const CMatrix& m, int p) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "compound needs a square matrix");
  const int n = static_cast<int>(m.rows());
  require(p >= 0 && p <= n, ErrorCode::DimensionMismatch, "compound needs p <= n");
  const auto basis = multi_indices(n, p);
  const Index size = static_cast<Index>(basis.size());
  require(size <= 1820, ErrorCode::InvalidArgument, "compound matrix larger than C(16,4)");
  CMatrix rows_taken(p, n);
  CMatrix block(p, p);
  CMatrix out(size, size);
  for (Index a = 0; a < size; ++a) {
    for (int r = 0; r < p; ++r) rows_taken.row(r) = m.row(basis[a][r]);
    for (Index b = 0; b < size; ++b) {
      for (int c = 0; c < p; ++c) block.col(c) = rows_taken.col(basis[b][c]);
      out(a, b) = small_det(block);
    }
  }
  return out;
}

WedgeTensor apply_compound(const CMatrix& compound, const WedgeTensor& u) {
  require(compound.cols() == u.coords.size(), ErrorCode::DimensionMismatch,
          "compound size does not match tensor");
  return WedgeTensor(u.n, u.p, compound * u.coords);
}

double plucker_norm(const WedgeTensor& u) { return u.coords.norm(); }

namespace {

Complex bilinear_dot(const CVector& a, const CVector& b) {
  return (a.array() * b.array()).sum();
}

// rest_rank[k * p + r]: rank of basis[k] with its r-th entry removed.
std::vector<std::size_t> rest_ranks(const std::vector<MultiIndex>& basis, int n, int p) {
  std::vector<std::size_t> out(basis.size() * static_cast<std::size_t>(p));
  MultiIndex rest(p - 1);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (int r = 0; r < p; ++r) {
      for (int s = 0, w = 0; s < p; ++s)
        if (s != r) rest[w++] = basis[k][s];
      out[k * p + r] = multi_index_rank(rest, n);
    }
  }
  return out;
}

// Gradient of L -> sum_J det(L[:, J]) u_J with respect to row `row` of L,
// which is linear in that row: value = sum_k L(row, k) * out(k).
CVector row_coefficients(const CMatrix& functionals, int row, const WedgeTensor& u,
                         const std::vector<MultiIndex>& basis, const std::vector<std::size_t>& rest_rank) {
  const int n = u.n;
  const int p = u.p;
  CVector out = CVector::Zero(n);
  CVector minors;
  if (p == 1) {
    minors = CVector::Ones(1);
  } else {
    CMatrix others(p - 1, n);
    for (int r = 0, w = 0; r < p; ++r)
      if (r != row) others.row(w++) = functionals.row(r);
    minors = row_minors(others.transpose());
  }
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Complex uj = u.coords(static_cast<Index>(k));
    if (uj == 0.0) continue;
    const MultiIndex& idx = basis[k];
    for (int r = 0; r < p; ++r) {
      const Complex minor = minors(static_cast<Index>(rest_rank[k * p + r]));
      const bool negative = (row + r) % 2 != 0;
      out(idx[r]) += negative ? -uj * minor : uj * minor;
    }
  }
  return out;
}

// Coordinates touched by a rotation in the (i, j) plane: basis element k
// mixes with `partner` (the index set with i and j exchanged).
struct GivensTerm {
  Index k;
  Index partner;
  double sign;
  bool has_i;
};

std::vector<GivensTerm> givens_plan(int n, int p, int i, int j) {
  std::vector<GivensTerm> plan;
  MultiIndex swapped(p);
  const auto basis = multi_indices(n, p);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const MultiIndex& idx = basis[k];
    const auto it_i = std::find(idx.begin(), idx.end(), i);
    const auto it_j = std::find(idx.begin(), idx.end(), j);
    const bool has_i = it_i != idx.end();
    const bool has_j = it_j != idx.end();
    if (has_i == has_j) continue;
    const int to = has_i ? j : i;
    const int pos_from = static_cast<int>((has_i ? it_i : it_j) - idx.begin());
    swapped = idx;
    swapped[pos_from] = to;
    std::sort(swapped.begin(), swapped.end());
    const int pos_to = static_cast<int>(std::find(swapped.begin(), swapped.end(), to) - swapped.begin());
    plan.push_back({static_cast<Index>(k), static_cast<Index>(multi_index_rank(swapped, n)),
                    (pos_from + pos_to) % 2 == 0 ? 1.0 : -1.0, has_i});
  }
  return plan;
}

void rotate(const CVector& in, CVector& out, const std::vector<GivensTerm>& plan, double c, Complex s) {
  out = in;
  const Complex g_ij = -std::conj(s);
  for (const GivensTerm& t : plan)
    out(t.k) = c * in(t.k) + t.sign * (t.has_i ? g_ij : s) * in(t.partner);
}

}  // namespace

double wedge1_lower(const WedgeTensor& u, const Wedge1Options& options) {
  require(options.samples >= 1, ErrorCode::InvalidArgument, "wedge1_lower needs samples >= 1");
  if (u.coords.norm() == 0.0) return 0.0;
  const int n = u.n;
  const int p = u.p;
  if (p == 0) return std::abs(u.coords(0));
  const auto basis = multi_indices(n, p);
  const auto rest_rank = rest_ranks(basis, n, p);
  Rng rng(options.seed);
  double best = 0.0;
  for (int start = 0; start < options.samples; ++start) {
    CMatrix functionals = rng.complex_matrix(p, n);
    for (int r = 0; r < p; ++r) functionals.row(r).normalize();
    double value = std::abs(m_hat(ApertureMap{functionals}, u));
    if (options.refine) {
      for (int it = 0; it < options.iterations; ++it) {
        const double before = value;
        for (int r = 0; r < p; ++r) {
          const CVector coeff = row_coefficients(functionals, r, u, basis, rest_rank);
          const double norm = coeff.norm();
          if (norm == 0.0) continue;
          functionals.row(r) = coeff.conjugate().transpose() / norm;
          value = norm;
        }
        if (value - before <= 1e-15 * value) break;
      }
      // Re-evaluate so the reported value is exactly a pairing of unit functionals.
      for (int r = 0; r < p; ++r) functionals.row(r).normalize();
      value = std::abs(m_hat(ApertureMap{functionals}, u));
    }
    best = std::max(best, value);
  }
  return best;
}

WedgeTensor apply_givens(const WedgeTensor& u, int i, int j, double c, Complex s) {
  require(0 <= i && i < j && j < u.n, ErrorCode::InvalidArgument, "givens plane needs i < j < n");
  CVector out;
  rotate(u.coords, out, givens_plan(u.n, u.p, i, j), c, s);
  return WedgeTensor(u.n, u.p, std::move(out));
}

double wedge2_upper(const WedgeTensor& u, int max_sweeps) {
  double best = u.coords.cwiseAbs().sum();
  if (best == 0.0 || u.p == 0 || u.p == u.n) return best;
  constexpr double pi = std::numbers::pi;
  const double angles[] = {pi / 4, pi / 8, pi / 16, pi / 32, pi / 64, pi / 128};
  const Complex phases[] = {1.0, kI, -1.0, -kI};
  std::vector<std::vector<GivensTerm>> plans;
  for (int i = 0; i < u.n; ++i)
    for (int j = i + 1; j < u.n; ++j) plans.push_back(givens_plan(u.n, u.p, i, j));
  CVector current = u.coords;
  CVector trial, best_here;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (const auto& plan : plans) {
      double best_value = best;
      for (double theta : angles) {
        for (Complex phase : phases) {
          rotate(current, trial, plan, std::cos(theta), std::sin(theta) * phase);
          const double value = trial.cwiseAbs().sum();
          if (value < best_value * (1.0 - 1e-14)) {
            best_value = value;
            best_here.swap(trial);
          }
        }
      }
      if (best_value < best) {
        best = best_value;
        current.swap(best_here);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return best;
}

NormBracket wedge1_bracket(const WedgeTensor& u, const Wedge1Options& options) {
  const double scale = std::pow(std::sqrt(static_cast<double>(u.p)), u.p);
  return {wedge1_lower(u, options), scale * wedge2_upper(u)};
}

NormBracket wedge2_bracket(const WedgeTensor& u, const Wedge1Options& options) {
  const double scale = std::pow(std::sqrt(static_cast<double>(u.p)), u.p);
  const double lower = std::max(plucker_norm(u), wedge1_lower(u, options) / scale);
  return {lower, wedge2_upper(u)};
}

Complex m_hat(const ApertureMap& m, const WedgeTensor& u) {
  require(m.matrix.rows() == u.p && m.matrix.cols() == u.n, ErrorCode::DimensionMismatch,
          "m-hat needs a p x n map matching the tensor");
  if (u.p == 0) return u.coords(0);
  return bilinear_dot(row_minors(m.matrix.transpose()), u.coords);
}

double compound_operator_norm(const CMatrix& m, int p) {
  require(m.rows() == m.cols() && p >= 0 && p <= m.rows() && m.rows() <= 16,
          ErrorCode::DimensionMismatch, "compound_operator_norm needs p <= n <= 16");
  return operator_norm(compound_matrix(m, p));
}

}  // namespace conegap
