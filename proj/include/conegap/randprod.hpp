#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conegap/cone.hpp"
#include "conegap/types.hpp"

namespace conegap {

/// A holomorphic-in-t family of random matrices M(t, xi), t and xi in the
/// unit disk.
struct MatrixFamily {
  Index n = 0;
  std::function<CMatrix(Complex t, Complex xi)> generator;
  std::string name;

  CMatrix operator()(Complex t, Complex xi) const { return generator(t, xi); }
};

/// Rows (10 + t xi, t + xi, i t), (t + xi, 6, xi), (i xi, 0, 1).
MatrixFamily sec6_family();

/// M(t, xi) = m for every t and xi.
MatrixFamily constant_family(const CMatrix& m);

/// M(t, xi) = e^t I_n.
MatrixFamily exp_scalar_family(Index n);

struct NoiseModel {
  enum class Kind { UniformDisk, UniformCircle, FixedSamples };

  Kind kind = Kind::UniformDisk;
  double radius = 1.0;           // UniformCircle only
  std::vector<Complex> samples;  // FixedSamples only, cycled
  std::uint64_t seed = 0;

  static NoiseModel disk(std::uint64_t seed) { return {Kind::UniformDisk, 1.0, {}, seed}; }
  static NoiseModel circle(double radius, std::uint64_t seed) {
    return {Kind::UniformCircle, radius, {}, seed};
  }
  static NoiseModel fixed(std::vector<Complex> samples) {
    return {Kind::FixedSamples, 1.0, std::move(samples), 0};
  }
};

/// The index-th draw of the noise stream; a pure function of (seed, index).
Complex sample_xi(const NoiseModel& model, std::uint64_t index);

struct EstimatorParams {
  std::int64_t n_steps = 100000;
  std::int64_t burn_in = 1000;
};

struct LyapunovEstimate {
  int p = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_steps = 0;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 0;
};

/// QR accumulation along the product: step k uses xi_k for k = 0, 1, ...,
/// and the average runs over the n_steps after the first burn_in. Standard
/// error from 20 batch means.
LyapunovEstimate benettin(const MatrixFamily& family, const NoiseModel& noise, Complex t, int p,
                          const EstimatorParams& params);

/// (1/n) sum log|det M_k(t)| over the same steps as benettin.
double log_det_average(const MatrixFamily& family, const NoiseModel& noise, Complex t,
                       const EstimatorParams& params);

/// Average of log|m-hat(M-hat_k w_k)| along the forward orbit w_{k+1} =
/// M_k w_k with m-hat(w_k) = 1, started from span(F). The first 100 draws are
/// spot-checked to map the cone into itself.
LyapunovEstimate gauge_cocycle_estimate(const MatrixFamily& family, const NoiseModel& noise,
                                        Complex t, const ProjectiveCone& cone,
                                        const EstimatorParams& params);

struct HarmonicityResult {
  double center = 0.0;
  std::vector<double> circle;
  double residual = 0.0;
  double scale = 0.0;
  double pooled_stderr = 0.0;
  bool pass = false;
};

/// Mean-value test for chi_p on the circle |t - t0| = r, with every
/// evaluation sharing the noise stream.
HarmonicityResult harmonicity_check(const MatrixFamily& family, const NoiseModel& noise, int p,
                                    Complex t0, double r, int n_circle,
                                    const EstimatorParams& params);

/// Monte Carlo mean of log|det M(t, xi)| for the Sec6 family.
LyapunovEstimate chi3_closed_form(Complex t, const NoiseModel& noise, std::int64_t n_samples);

struct Sec6MappingReport {
  bool mapping_ok = true;
  double min_margin = kInfinity;  // margin(C_{pi,0.85}, Mx) / ||Mx||
  double min_abs_det = kInfinity;
  Complex worst_t = 0.0;
  Complex worst_xi = 0.0;
  CVector worst_x;
  std::int64_t samples = 0;
};

/// Samples (t, xi, x) with t cycling through t_grid, xi uniform in the disk
/// and x a unit vector of C_{pi,1} (every other one on the boundary); pi
/// projects onto the first two coordinates.
Sec6MappingReport verify_sec6_cone_mapping(std::int64_t samples, const std::vector<Complex>& t_grid,
                                           std::uint64_t seed);

struct DerivativeCheck {
  double slope = 0.0;  // |chi_p(t + h) - chi_p(t)| / |h|
  double slope_stderr = 0.0;
  double c_fd = 0.0;   // sampled sup ||L^{p-1} M|| ||dM/dt|| / ||L^p M||
  bool pass = false;
};

/// Finite-difference slope of chi_p against p * c_fd.
DerivativeCheck derivative_bound_check(const MatrixFamily& family, const NoiseModel& noise,
                                       int p, Complex t, double h, const EstimatorParams& params,
                                       std::int64_t n_sup_samples = 2000);

/// Plucker distance between two orbits M_k ... M_0 V and M_k ... M_0 W under
/// one draw of the noise, after each step.
std::vector<double> orbit_separation(const MatrixFamily& family, const NoiseModel& noise,
                                     Complex t, const Subspace& v, const Subspace& w,
                                     int steps);

}  // namespace conegap
