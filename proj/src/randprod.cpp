#include "conegap/randprod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conegap/exterior.hpp"

namespace conegap {

MatrixFamily sec6_family() {
  MatrixFamily family;
  family.n = 3;
  family.name = "sec6";
  family.generator = [](Complex t, Complex xi) {
    CMatrix m(3, 3);
    m << 10.0 + t * xi, t + xi, kI * t,
         t + xi, 6.0, xi,
         kI * xi, 0.0, 1.0;
    return m;
  };
  return family;
}

MatrixFamily constant_family(const CMatrix& m) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "constant family needs a square matrix");
  MatrixFamily family;
  family.n = m.rows();
  family.name = "constant";
  family.generator = [m](Complex, Complex) { return m; };
  return family;
}

MatrixFamily exp_scalar_family(Index n) {
  MatrixFamily family;
  family.n = n;
  family.name = "exp-scalar";
  family.generator = [n](Complex t, Complex) -> CMatrix {
    return std::exp(t) * CMatrix::Identity(n, n);
  };
  return family;
}

Complex sample_xi(const NoiseModel& model, std::uint64_t index) {
  if (model.kind == NoiseModel::Kind::FixedSamples) {
    require(!model.samples.empty(), ErrorCode::InvalidArgument, "FixedSamples needs samples");
    const Complex xi = model.samples[index % model.samples.size()];
    require(std::abs(xi) <= 1.0, ErrorCode::InvalidArgument, "noise samples must lie in the closed disk");
    return xi;
  }
  const std::uint64_t base = mix64(model.seed) + 2 * index;
  const double angle = 2.0 * std::numbers::pi * to_unit(mix64(base + 1));
  const Complex phase = std::polar(1.0, angle);
  if (model.kind == NoiseModel::Kind::UniformCircle) {
    require(model.radius >= 0.0 && model.radius <= 1.0, ErrorCode::InvalidArgument,
            "circle radius must lie in [0, 1]");
    return model.radius * phase;
  }
  return std::sqrt(to_unit(mix64(base))) * phase;
}

namespace {

void check_params(const EstimatorParams& params) {
  require(params.n_steps >= 100, ErrorCode::InvalidArgument, "n_steps must be at least 100");
  require(params.burn_in >= 0, ErrorCode::InvalidArgument, "burn_in must be nonnegative");
}

constexpr int kBatches = 20;

// Accumulates per-step contributions into 20 contiguous batches.
class BatchMeans {
 public:
  explicit BatchMeans(std::int64_t n_steps) : n_steps_(n_steps), sums_(kBatches, 0.0), counts_(kBatches, 0) {}

  void add(std::int64_t step, double value) {
    const auto batch = static_cast<std::size_t>(step * kBatches / n_steps_);
    sums_[batch] += value;
    ++counts_[batch];
    total_ += value;
  }

  double mean() const { return total_ / static_cast<double>(n_steps_); }

  double std_error() const {
    std::vector<double> means(kBatches);
    double avg = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      means[b] = sums_[b] / static_cast<double>(counts_[b]);
      avg += means[b];
    }
    avg /= kBatches;
    double var = 0.0;
    for (double m : means) var += (m - avg) * (m - avg);
    var /= kBatches - 1;
    return std::sqrt(var / kBatches);
  }

 private:
  std::int64_t n_steps_;
  std::vector<double> sums_;
  std::vector<std::int64_t> counts_;
  double total_ = 0.0;
};

}  // namespace

LyapunovEstimate benettin(const MatrixFamily& family, const NoiseModel& noise, Complex t, int p,
                          const EstimatorParams& params) {
  check_params(params);
  require(p >= 1 && p <= family.n, ErrorCode::InvalidArgument, "need 1 <= p <= n");
  CMatrix q = Frame::coordinate(family.n, p).matrix();
  CMatrix r;
  BatchMeans batches(params.n_steps);
  const std::int64_t total = params.burn_in + params.n_steps;
  for (std::int64_t k = 0; k < total; ++k) {
    const CMatrix m = family(t, sample_xi(noise, static_cast<std::uint64_t>(k)));
    detail::positive_qr(m * q, q, r);
    double step = 0.0;
    for (int i = 0; i < p; ++i) {
      const double rii = r(i, i).real();
      if (!(rii >= 1e-300)) {
        std::ostringstream msg;
        msg << "R(" << i << "," << i << ") = " << rii << " at step " << k;
        throw Error(ErrorCode::SingularStep, msg.str());
      }
      step += std::log(rii);
    }
    if (k >= params.burn_in) batches.add(k - params.burn_in, step);
  }
  LyapunovEstimate out;
  out.p = p;
  out.value = batches.mean();
  out.std_error = batches.std_error();
  out.n_steps = params.n_steps;
  out.burn_in = params.burn_in;
  out.seed = noise.seed;
  return out;
}

double log_det_average(const MatrixFamily& family, const NoiseModel& noise, Complex t,
                       const EstimatorParams& params) {
  check_params(params);
  double sum = 0.0;
  for (std::int64_t k = params.burn_in; k < params.burn_in + params.n_steps; ++k) {
    const CMatrix m = family(t, sample_xi(noise, static_cast<std::uint64_t>(k)));
    sum += std::log(std::abs(m.determinant()));
  }
  return sum / static_cast<double>(params.n_steps);
}

LyapunovEstimate gauge_cocycle_estimate(const MatrixFamily& family, const NoiseModel& noise,
                                        Complex t, const ProjectiveCone& cone,
                                        const EstimatorParams& params) {
  check_params(params);
  require(cone.ambient_dim() == family.n, ErrorCode::DimensionMismatch, "cone and family differ in n");
  const CMatrix& f = cone.frame().matrix();
  const int p = static_cast<int>(cone.dim());
  const std::int64_t total = params.burn_in + params.n_steps;

  for (std::int64_t k = 0; k < std::min<std::int64_t>(100, total); ++k) {
    const CMatrix m = family(t, sample_xi(noise, static_cast<std::uint64_t>(k)));
    const ConeMappingCheck check = check_maps_cone(m, cone, cone, 32, static_cast<std::uint64_t>(k));
    if (!check.sampled_ok) {
      std::ostringstream msg;
      msg << "draw " << k << " does not map the cone into itself (margin " << check.worst_margin << ")";
      throw Error(ErrorCode::ConeExit, msg.str());
    }
  }

  CMatrix q = f;
  CMatrix r;
  BatchMeans batches(params.n_steps);
  const double limit = cone.aperture() * (1.0 + 1e-9);
  for (std::int64_t k = 0; k < total; ++k) {
    const CMatrix m = family(t, sample_xi(noise, static_cast<std::uint64_t>(k)));
    const CMatrix image = m * q;
    const Complex before = (f.adjoint() * q).determinant();
    if (!(std::abs(before) >= 1e-12)) {
      std::ostringstream msg;
      msg << "|m-hat(w)| = " << std::abs(before) << " at step " << k;
      throw Error(ErrorCode::ApertureDegenerate, msg.str());
    }
    const Complex after = (f.adjoint() * image).determinant();
    const double step = std::log(std::abs(after)) - std::log(std::abs(before));
    detail::positive_qr(image, q, r);
    const double aperture = subspace_aperture(cone, Subspace(Frame(q)));
    if (!(aperture <= limit)) {
      std::ostringstream msg;
      msg << "orbit left the cone at step " << k << " (aperture " << aperture << ")";
      throw Error(ErrorCode::ConeExit, msg.str());
    }
    if (k >= params.burn_in) batches.add(k - params.burn_in, step);
  }
  LyapunovEstimate out;
  out.p = p;
  out.value = batches.mean();
  out.std_error = batches.std_error();
  out.n_steps = params.n_steps;
  out.burn_in = params.burn_in;
  out.seed = noise.seed;
  return out;
}

HarmonicityResult harmonicity_check(const MatrixFamily& family, const NoiseModel& noise, int p,
                                    Complex t0, double r, int n_circle,
                                    const EstimatorParams& params) {
  require(n_circle >= 8, ErrorCode::InvalidArgument, "n_circle must be at least 8");
  require(r > 0.0, ErrorCode::InvalidArgument, "radius must be positive");
  if (!(std::abs(t0) + r < 1.0)) {
    std::ostringstream msg;
    msg << "disk B(" << t0.real() << "+" << t0.imag() << "i, " << r << ") leaves the unit disk";
    throw Error(ErrorCode::DomainExit, msg.str());
  }
  HarmonicityResult out;
  const LyapunovEstimate center = benettin(family, noise, t0, p, params);
  out.center = center.value;
  double var_sum = center.std_error * center.std_error;
  double mean = 0.0;
  for (int j = 0; j < n_circle; ++j) {
    const Complex t = t0 + r * std::polar(1.0, 2.0 * std::numbers::pi * j / n_circle);
    const LyapunovEstimate e = benettin(family, noise, t, p, params);
    out.circle.push_back(e.value);
    mean += e.value;
    var_sum += e.std_error * e.std_error;
  }
  mean /= n_circle;
  out.residual = std::abs(out.center - mean);
  const auto [lo, hi] = std::minmax_element(out.circle.begin(), out.circle.end());
  out.scale = *hi - *lo;
  out.pooled_stderr = std::sqrt(var_sum / (n_circle + 1));
  out.pass = out.residual <= std::max(0.02 * out.scale, 4.0 * out.pooled_stderr);
  return out;
}

LyapunovEstimate chi3_closed_form(Complex t, const NoiseModel& noise, std::int64_t n_samples) {
  require(std::abs(t) < 1.0, ErrorCode::DomainExit, "t must lie in the open unit disk");
  require(n_samples >= 2, ErrorCode::InvalidArgument, "need at least two samples");
  const MatrixFamily family = sec6_family();
  // Welford update
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t k = 0; k < n_samples; ++k) {
    const double v = std::log(std::abs(family(t, sample_xi(noise, static_cast<std::uint64_t>(k))).determinant()));
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(n_samples);
  const double var = m2 / (n - 1.0);
  LyapunovEstimate out;
  out.p = 3;
  out.value = mean;
  out.std_error = std::sqrt(var / n);
  out.n_steps = n_samples;
  out.seed = noise.seed;
  return out;
}

Sec6MappingReport verify_sec6_cone_mapping(std::int64_t samples, const std::vector<Complex>& t_grid,
                                           std::uint64_t seed) {
  require(!t_grid.empty(), ErrorCode::InvalidArgument, "t grid is empty");
  for (Complex t : t_grid)
    require(std::abs(t) <= 1.0, ErrorCode::DomainExit, "t grid must lie in the closed unit disk");
  const MatrixFamily family = sec6_family();
  const ProjectiveCone source = ProjectiveCone::coordinate(3, 2, 1.0);
  const ProjectiveCone target = source.with_aperture(0.85);
  const NoiseModel noise = NoiseModel::disk(seed);
  Rng rng(mix64(seed) ^ 0x5ec6ULL);
  Sec6MappingReport out;
  out.samples = samples;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Complex t = t_grid[static_cast<std::size_t>(s) % t_grid.size()];
    const Complex xi = sample_xi(noise, static_cast<std::uint64_t>(s));
    const CMatrix m = family(t, xi);
    const CVector x = sample_cone_vector(source, rng, s % 2 == 0);
    const CVector image = m * x;
    const double rel = margin(target, image) / image.norm();
    out.min_abs_det = std::min(out.min_abs_det, std::abs(m.determinant()));
    if (rel < out.min_margin) {
      out.min_margin = rel;
      out.worst_t = t;
      out.worst_xi = xi;
      out.worst_x = x;
    }
  }
  out.mapping_ok = out.min_margin >= 0.0;
  return out;
}

DerivativeCheck derivative_bound_check(const MatrixFamily& family, const NoiseModel& noise,
                                       int p, Complex t, double h, const EstimatorParams& params,
                                       std::int64_t n_sup_samples) {
  require(h > 0.0, ErrorCode::InvalidArgument, "h must be positive");
  require(std::abs(t) + h < 1.0, ErrorCode::DomainExit, "t + h must lie in the unit disk");
  const LyapunovEstimate here = benettin(family, noise, t, p, params);
  const LyapunovEstimate there = benettin(family, noise, t + h, p, params);
  DerivativeCheck out;
  out.slope = std::abs(there.value - here.value) / h;
  out.slope_stderr = (here.std_error + there.std_error) / h;

  // dM/dt by a central difference; the families are polynomial in t.
  constexpr double kStep = 1e-6;
  for (std::int64_t k = 0; k < n_sup_samples; ++k) {
    const Complex xi = sample_xi(noise, static_cast<std::uint64_t>(k));
    for (Complex s : {t, t + h}) {
      const CMatrix m = family(s, xi);
      const CMatrix dm = (family(s + kStep, xi) - family(s - kStep, xi)) / (2.0 * kStep);
      const double lower = p > 1 ? compound_operator_norm(m, p - 1) : 1.0;
      const double ratio = lower * operator_norm(dm) / compound_operator_norm(m, p);
      out.c_fd = std::max(out.c_fd, ratio);
    }
  }
  out.pass = out.slope <= p * out.c_fd + 3.0 * out.slope_stderr;
  return out;
}

std::vector<double> orbit_separation(const MatrixFamily& family, const NoiseModel& noise,
                                     Complex t, const Subspace& v, const Subspace& w,
                                     int steps) {
  require(v.dim() == w.dim() && v.ambient_dim() == family.n && w.ambient_dim() == family.n,
          ErrorCode::DimensionMismatch, "subspaces must share p and n");
  CMatrix qv = v.basis();
  CMatrix qw = w.basis();
  CMatrix r;
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) {
    const CMatrix m = family(t, sample_xi(noise, static_cast<std::uint64_t>(k)));
    detail::positive_qr(m * qv, qv, r);
    detail::positive_qr(m * qw, qw, r);
    out.push_back(projective_distance(wedge(qv), wedge(qw)));
  }
  return out;
}

}  // namespace conegap
