#pragma once

#include <vector>

#include "conegap/cone.hpp"
#include "conegap/exterior.hpp"
#include "conegap/grassmann.hpp"

namespace conegap {

struct SubspaceIteration {
  Subspace v;
  std::vector<double> history;  // d_H between consecutive iterates
  int iterations = 0;
};

/// Iterates V <- T V (re-orthonormalized by QR) from V0 until the d_H step
/// drops to `tol`. Throws ConeExit when an iterate leaves the cone and
/// NotContracting when `max_iter` is exhausted.
SubspaceIteration power_iterate_subspace(const CMatrix& t, const ProjectiveCone& cone,
                                         const Subspace& v0, double tol = 1e-10,
                                         int max_iter = 10000);

/// Eigenvalues of Q* T Q for an invariant V, by descending modulus.
/// Throws NotInvariant when ||(I - QQ*) T Q|| > 1e-6 ||T||.
std::vector<Complex> restricted_eigs(const CMatrix& t, const Subspace& v);

struct GapReport {
  Subspace v;
  std::vector<Complex> top_eigs;
  Complex lambda_product;
  double subdominant_modulus = 0.0;
  double observed_ratio = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
  /// Largest distance between top_eigs and the p leading oracle eigenvalues.
  double oracle_mismatch = 0.0;
  std::vector<Complex> spectrum;
};

/// Certifies a p-dimensional spectral gap: checks (by sampling) that T maps
/// the cone into itself, iterates from span(F), and compares the restricted
/// eigenvalues with the dense spectrum. Throws GapViolated when the
/// remaining spectrum reaches |lambda_p|.
GapReport spectral_gap_report(const CMatrix& t, const ProjectiveCone& cone, double tol = 1e-10,
                              int max_iter = 10000, std::uint64_t seed = 0);

/// The functional c on the p-th exterior power (bilinear pairing with the
/// coordinates) with c(T-hat u) = lambda c(u) and c(h) = 1.
struct CTensor {
  int n = 0;
  int p = 0;
  CVector coords;
  WedgeTensor h;  // unit representative wedge(Q_V)
  Complex lambda;

  Complex operator()(const WedgeTensor& u) const;
};

/// Left eigenvector of the compound matrix for lambda = prod(top_eigs).
/// Throws DefectiveLambda if lambda is not a simple eigenvalue.
CTensor c_functional(const CMatrix& t, const GapReport& report);

/// Functionals l_i(x) = c(h_1 ^ .. ^ x ^ .. ^ h_p) (x in slot i), rows of a
/// p x n matrix. c equals l_1 ^ ... ^ l_p.
CMatrix c_factors(const CTensor& c, const Subspace& v);

/// Coordinates of l_1 ^ ... ^ l_p as a functional (det L[:, J]).
CVector functional_wedge(const CMatrix& functionals);

/// Spectral projector H L onto V along the complementary invariant space.
CMatrix spectral_projector(const CTensor& c, const Subspace& v);

struct DecayFit {
  std::vector<double> errors;  // ||lambda^-k T-hat^k u - c(u) h||, k = 1..
  double eta = 0.0;
  double constant = 0.0;
  int points_used = 0;
};

/// Least-squares fit of log errors against k over the errors above the
/// rounding floor.
DecayFit fit_decay(const CMatrix& t, const CTensor& c, const WedgeTensor& u, int steps = 30);

/// Slope of log(history) against the step index over entries above `floor`.
double log_rate(const std::vector<double>& history, double floor = 1e-13);

struct CompoundNormBracket {
  double lower = 0.0;
  double norm = 0.0;
  double upper = 0.0;
  double ratio = 0.0;  // |m-hat(T-hat x) / m-hat(x)|
};

/// Two-sided estimate of ||Lambda^p T|| from one representative x of a
/// subspace W of C[rho]: ratio / K^p <= norm <= p! (2^{p-1} K^2 / rho^p)^p ratio.
CompoundNormBracket compound_norm_bracket(const CMatrix& t, const ProjectiveCone& cone,
                                          const Subspace& w, double rho);

}  // namespace conegap
