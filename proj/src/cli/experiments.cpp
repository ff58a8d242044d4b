#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "conegap/cone.hpp"
#include "conegap/exterior.hpp"
#include "conegap/grassmann.hpp"
#include "conegap/instances.hpp"
#include "conegap/randprod.hpp"
#include "conegap/spectral.hpp"

namespace conegap::cli::detail {

std::string num(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string flag(bool value) { return value ? "true" : "false"; }

namespace {

Json jnum(double value) {
  if (std::isfinite(value)) return value;
  return num(value);
}

Json jcomplex(Complex z) { return Json::array({jnum(z.real()), jnum(z.imag())}); }

Json jcomplex_list(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (Complex z : values) out.push_back(jcomplex(z));
  return out;
}

std::string describe(const char* what, double value, const char* relation, double bound) {
  std::ostringstream msg;
  msg << what << " = " << num(value) << " " << relation << " " << num(bound);
  return msg.str();
}

double factorial(int p) {
  double out = 1.0;
  for (int k = 2; k <= p; ++k) out *= k;
  return out;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Outcome run_exterior_check(const Params& params, std::uint64_t seed) {
  const auto n = static_cast<Index>(params.integer("n"));
  const auto trials = params.integer("trials");
  const int samples = static_cast<int>(params.integer("wedge1_samples"));
  Rng rng(seed);
  Outcome out;
  out.header = {"p", "trial", "compound_product_error", "operator_norm_rel_error",
                "wedge1_lower", "wedge1_upper", "pass"};
  double worst_product = 0.0;
  double worst_norm = 0.0;
  double worst_bracket = -kInfinity;
  Json per_p = Json::array();
  for (auto p64 : params.integers("p_values")) {
    const int p = static_cast<int>(p64);
    const double bracket_factor = std::pow(static_cast<double>(p), 0.5 * p);
    double p_product = 0.0, p_norm = 0.0, p_bracket = -kInfinity;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
      const CMatrix a = rng.complex_matrix(n, n);
      const CMatrix b = rng.complex_matrix(n, n);
      const CMatrix product = compound_matrix(a, p) * compound_matrix(b, p);
      const double product_error =
          max_abs(compound_matrix(a * b, p) - product) / std::max(1.0, max_abs(product));

      const RVector sv = singular_values(a);
      double expected = 1.0;
      for (int i = 0; i < p; ++i) expected *= sv(i);
      const double norm_error = std::abs(compound_operator_norm(a, p) - expected) / expected;

      const auto dim = static_cast<Index>(binomial(static_cast<int>(n), p));
      CVector coords = rng.complex_vector(dim);
      coords /= coords.norm();
      const WedgeTensor u(static_cast<int>(n), p, coords);
      Wedge1Options options;
      options.samples = samples;
      options.seed = rng.bits();
      const double lower = wedge1_lower(u, options);
      const double upper = bracket_factor * wedge2_upper(u);

      const bool pass = product_error <= 1e-9 && norm_error <= 1e-8 && lower <= upper + 1e-9;
      p_product = std::max(p_product, product_error);
      p_norm = std::max(p_norm, norm_error);
      p_bracket = std::max(p_bracket, lower - upper);
      out.rows.push_back({std::to_string(p), std::to_string(trial), num(product_error),
                          num(norm_error), num(lower), num(upper), flag(pass)});
    }
    worst_product = std::max(worst_product, p_product);
    worst_norm = std::max(worst_norm, p_norm);
    worst_bracket = std::max(worst_bracket, p_bracket);
    per_p.push_back({{"p", p},
                     {"max_compound_product_error", jnum(p_product)},
                     {"max_operator_norm_rel_error", jnum(p_norm)},
                     {"max_wedge1_lower_minus_upper", jnum(p_bracket)}});
  }
  out.results["per_p"] = per_p;
  out.assertions.push_back({"compound_multiplicativity", worst_product <= 1e-9,
                            describe("max error", worst_product, "<=", 1e-9)});
  out.assertions.push_back({"operator_norm_identity", worst_norm <= 1e-8,
                            describe("max relative error", worst_norm, "<=", 1e-8)});
  out.assertions.push_back({"norm_bracket", worst_bracket <= 1e-9,
                            describe("max(lower - p^(p/2) upper)", worst_bracket, "<=", 1e-9)});
  return out;
}

Outcome run_metrics(const Params& params, std::uint64_t seed) {
  const auto pairs = params.integer("pairs");
  Rng rng(seed);
  Outcome out;
  out.header = {"n", "p", "pair", "d_hausdorff", "d_delta", "d_wedge", "ratio", "pass"};
  bool all_pass = true;
  Json per_p = Json::array();
  bool lower_ok = true;
  for (auto p64 : params.integers("p_values")) {
    const int p = static_cast<int>(p64);
    const double bound = 2.0 * p * factorial(p);
    double c_lower = kInfinity;
    double c_upper = 0.0;
    for (auto n64 : params.integers("n_values")) {
      const auto n = static_cast<Index>(n64);
      for (std::int64_t pair = 0; pair < pairs; ++pair) {
        const Subspace v = Subspace::span(rng.complex_matrix(n, p));
        Subspace w;
        if (pair % 2 == 0) {
          w = Subspace::span(rng.complex_matrix(n, p));
        } else {
          const double eps = std::pow(10.0, -6.0 * rng.uniform());
          w = Subspace::span(v.basis() + eps * rng.complex_matrix(n, p));
        }
        const double dh = d_hausdorff(v, w);
        const double dd = d_delta(v, w);
        const double dw = d_wedge(v, w);
        const double ratio = dh > 0.0 ? dw / dh : 1.0;
        const bool pass = dw <= bound * dh + 1e-12;
        all_pass = all_pass && pass;
        if (dh > 1e-9) {
          c_lower = std::min(c_lower, ratio);
          c_upper = std::max(c_upper, ratio);
        }
        out.rows.push_back({std::to_string(n), std::to_string(p), std::to_string(pair), num(dh),
                            num(dd), num(dw), num(ratio), flag(pass)});
      }
    }
    lower_ok = lower_ok && c_lower > 0.01;
    per_p.push_back({{"p", p},
                     {"upper_constant", jnum(bound)},
                     {"empirical_lower_ratio", jnum(c_lower)},
                     {"empirical_upper_ratio", jnum(c_upper)}});
  }
  out.results["per_p"] = per_p;
  out.assertions.push_back({"metric_equivalence_upper", all_pass,
                            "d_wedge <= 2 p p! d_hausdorff on every pair"});
  out.assertions.push_back({"metric_equivalence_lower", lower_ok,
                            "empirical min d_wedge / d_hausdorff > 0.01 for every p"});
  return out;
}

Outcome run_gauge(const Params& params, std::uint64_t seed) {
  const auto ns = params.integers("n_values");
  const auto ps = params.integers("p_values");
  const double a_outer = params.real("a_outer");
  const double a_inner = params.real("a_inner");
  Rng rng(seed);
  Outcome out;
  out.header = {"check", "n", "p", "index", "computed", "reference", "bound", "pass"};
  auto shape = [&](std::int64_t i) {
    const auto n = static_cast<Index>(ns[static_cast<std::size_t>(i) % ns.size()]);
    const auto p = static_cast<Index>(ps[static_cast<std::size_t>(i / static_cast<std::int64_t>(ns.size())) % ps.size()]);
    return std::pair{n, p};
  };
  auto random_cone = [&](Index n, Index p, double aperture) {
    return ProjectiveCone(Frame(CMatrix(random_unitary(n, rng).leftCols(p))), aperture);
  };

  // closed form against the membership search
  {
    const ProjectiveCone cone = ProjectiveCone::coordinate(2, 1, 1.0);
    CVector x(2), y(2);
    x << 1.0, 0.0;
    y << 1.0, 0.5;
    const double value = gauge_delta(cone, x, y);
    const bool pass = std::abs(value - std::log(3.0)) <= 1e-9;
    out.rows.push_back({"worked_example", "2", "1", "0", num(value), num(std::log(3.0)), num(1e-9), flag(pass)});
    out.assertions.push_back({"gauge_worked_example", pass, describe("gauge_delta", value, "vs log 3 =", std::log(3.0))});
  }
  double worst_oracle = 0.0;
  for (std::int64_t i = 0; i < params.integer("pairs"); ++i) {
    const auto [n, p] = shape(i);
    const ProjectiveCone cone = random_cone(n, p, a_outer);
    const CVector x = sample_cone_vector(cone, rng, false);
    const CVector y = sample_cone_vector(cone, rng, false);
    const double value = gauge_delta(cone, x, y);
    const double reference = gauge_delta_search(cone, x, y);
    const double error = (std::isinf(value) && std::isinf(reference)) ? 0.0 : std::abs(value - reference);
    worst_oracle = std::max(worst_oracle, error);
    out.rows.push_back({"gauge_oracle", std::to_string(n), std::to_string(p), std::to_string(i),
                        num(value), num(reference), num(1e-6), flag(error <= 1e-6)});
  }
  out.assertions.push_back({"gauge_closed_form", worst_oracle <= 1e-6,
                            describe("max |closed form - search|", worst_oracle, "<=", 1e-6)});

  const double diameter = diameter_bound(a_inner, a_outer);
  bool diameter_ok = true;
  double largest_lower = 0.0;
  for (std::int64_t i = 0; i < params.integer("distance_pairs"); ++i) {
    const auto [n, p] = shape(i);
    const ProjectiveCone cone = random_cone(n, p, a_outer);
    const Subspace v = sample_cone_subspace(cone, rng, a_inner * rng.uniform(0.05, 1.0));
    const Subspace w = sample_cone_subspace(cone, rng, a_inner * rng.uniform(0.05, 1.0));
    SearchBudget budget;
    budget.starts = static_cast<int>(params.integer("search_starts"));
    budget.iterations = static_cast<int>(params.integer("search_iterations"));
    budget.seed = rng.bits();
    const ConeDistanceEstimate est = cone_distance(cone, v, w, budget);
    const bool pass = est.lower <= diameter * (1.0 + 1e-9) && est.lower <= est.upper * (1.0 + 1e-9);
    diameter_ok = diameter_ok && pass;
    largest_lower = std::max(largest_lower, est.lower);
    out.rows.push_back({"diameter", std::to_string(n), std::to_string(p), std::to_string(i),
                        num(est.lower), num(est.upper), num(diameter), flag(pass)});
  }
  out.assertions.push_back({"diameter_bound", diameter_ok,
                            describe("largest searched lower bound", largest_lower, "<=", diameter)});

  bool contraction_ok = true;
  double worst_excess = -kInfinity;
  const auto samples = params.integer("contraction_samples");
  for (std::int64_t i = 0; i < params.integer("contraction_instances"); ++i) {
    const auto [n, p] = shape(i);
    const GapInstance inst = sample_gap_instance(n, p, a_outer, rng);
    const double factor = inst.certified_aperture / a_outer;
    double worst_ratio = 0.0;
    double excess = -kInfinity;
    for (std::int64_t k = 0; k < samples; ++k) {
      const CVector x = sample_cone_vector(inst.cone, rng, false);
      const CVector y = sample_cone_vector(inst.cone, rng, false);
      const double before = d1(inst.cone, x, y);
      const double after = d1(inst.cone, CVector(inst.t * x), CVector(inst.t * y));
      if (!std::isfinite(before)) continue;
      excess = std::max(excess, after - factor * before);
      if (before > 0.0) worst_ratio = std::max(worst_ratio, after / before);
    }
    const bool pass = excess <= 1e-8;
    contraction_ok = contraction_ok && pass;
    worst_excess = std::max(worst_excess, excess);
    out.rows.push_back({"contraction", std::to_string(n), std::to_string(p), std::to_string(i),
                        num(worst_ratio), num(factor), num(excess), flag(pass)});
  }
  if (params.integer("contraction_instances") > 0)
    out.assertions.push_back({"contraction_factor", contraction_ok,
                              describe("max d1(Tx,Ty) - (a/b) d1(x,y)", worst_excess, "<=", 1e-8)});
  out.results["diameter_bound"] = jnum(diameter);
  out.results["max_gauge_oracle_error"] = jnum(worst_oracle);
  out.results["max_searched_distance"] = jnum(largest_lower);
  return out;
}

namespace {

struct GapRow {
  std::vector<std::string> cells;
  bool pass = false;
  GapReport report;
};

GapRow analyze_gap(const CMatrix& t, const ProjectiveCone& cone, double tol, int max_iter,
                   int decay_steps, Rng& rng, std::uint64_t check_seed) {
  const Index n = t.rows();
  const int p = static_cast<int>(cone.dim());
  const double aperture = cone.aperture();
  GapRow row;
  row.report = spectral_gap_report(t, cone, tol, max_iter, check_seed);
  const GapReport& rep = row.report;
  const ConeMappingCheck mapping = check_maps_cone(t, cone, cone, 8, check_seed);
  const double certified_ratio = mapping.certified_aperture / aperture;
  const double rate = log_rate(rep.history);
  const double rate_bound = std::log(certified_ratio) + 0.05;

  const CTensor c = c_functional(t, rep);
  const WedgeTensor u = wedge(rng.complex_matrix(n, p));
  const Complex image = c(apply_compound(compound_matrix(t, p), u));
  const Complex expected = c.lambda * c(u);
  const double eigen_residual = std::abs(image - expected) / std::max(std::abs(expected), 1e-300);
  const double normalization = std::abs(c(c.h) - 1.0);
  const double reconstruction = (functional_wedge(c_factors(c, rep.v)) - c.coords).norm() / c.coords.norm();
  const DecayFit fit = fit_decay(t, c, u, decay_steps);

  const double inner = 0.5 * aperture;
  const Subspace w = sample_cone_subspace(cone, rng, inner);
  const CompoundNormBracket bracket = compound_norm_bracket(t, cone, w, rho_for_aperture(cone, inner));

  const bool gap_ok = rep.oracle_mismatch <= 1e-7 && rep.subdominant_modulus < std::abs(rep.top_eigs.back());
  const bool rate_ok = !mapping.certified || rate <= rate_bound;
  const bool c_ok = eigen_residual <= 1e-8 && normalization <= 1e-8 && reconstruction <= 1e-7 && fit.eta < 1.0;
  const bool bracket_ok = bracket.lower <= bracket.norm * (1.0 + 1e-9) &&
                          bracket.norm <= bracket.upper * (1.0 + 1e-9);
  row.pass = gap_ok && rate_ok && c_ok && bracket_ok;
  row.cells = {std::to_string(n), std::to_string(p), std::to_string(rep.iterations),
               num(rep.oracle_mismatch), num(rep.observed_ratio), num(certified_ratio), num(rate),
               num(rate_bound), num(eigen_residual), num(normalization), num(reconstruction),
               num(fit.eta), num(bracket.lower), num(bracket.norm), num(bracket.upper), flag(row.pass)};
  return row;
}

}  // namespace

Outcome run_spectral_gap(const Params& params, std::uint64_t seed) {
  const double aperture = params.real("aperture");
  const double tol = params.real("tol");
  const int max_iter = static_cast<int>(params.integer("max_iter"));
  const int decay_steps = static_cast<int>(params.integer("decay_steps"));
  Rng rng(seed);
  Outcome out;
  out.header = {"instance", "n", "p", "iterations", "top_eig_error", "observed_ratio",
                "certified_ratio", "log_rate", "log_rate_bound", "c_eigen_residual",
                "c_normalization_error", "reconstruction_error", "decay_eta", "bracket_lower",
                "compound_norm", "bracket_upper", "pass"};

  if (params.has("diag") || params.has("matrix")) {
    CMatrix t;
    if (params.has("diag")) {
      const auto diag = params.complexes("diag");
      t = CMatrix::Zero(static_cast<Index>(diag.size()), static_cast<Index>(diag.size()));
      for (std::size_t i = 0; i < diag.size(); ++i) t(static_cast<Index>(i), static_cast<Index>(i)) = diag[i];
    } else {
      t = params.matrix("matrix");
    }
    const auto p = static_cast<Index>(params.integer("p"));
    const ProjectiveCone cone = ProjectiveCone::coordinate(t.rows(), p, aperture);
    GapRow row = analyze_gap(t, cone, tol, max_iter, decay_steps, rng, seed);
    row.cells.insert(row.cells.begin(), "0");
    out.rows.push_back(row.cells);
    out.results["top_eigs"] = jcomplex_list(row.report.top_eigs);
    out.results["subdominant"] = jnum(row.report.subdominant_modulus);
    out.results["lambda_product"] = jcomplex(row.report.lambda_product);
    out.results["iterations"] = row.report.iterations;
    out.results["spectrum"] = jcomplex_list(row.report.spectrum);
    out.assertions.push_back({"spectral_gap", row.pass, "gap, rate, c-tensor and bracket checks"});
    return out;
  }

  const auto ns = params.integers("n_values");
  const auto ps = params.integers("p_values");
  bool all_pass = true;
  for (std::int64_t i = 0; i < params.integer("instances"); ++i) {
    const auto n = static_cast<Index>(ns[static_cast<std::size_t>(i) % ns.size()]);
    const auto p = static_cast<Index>(ps[static_cast<std::size_t>(i) / ns.size() % ps.size()]);
    const GapInstance inst = sample_gap_instance(n, p, aperture, rng);
    GapRow row = analyze_gap(inst.t, inst.cone, tol, max_iter, decay_steps, rng, rng.bits());
    all_pass = all_pass && row.pass;
    row.cells.insert(row.cells.begin(), std::to_string(i));
    out.rows.push_back(row.cells);
  }
  out.results["instances"] = params.integer("instances");
  out.assertions.push_back({"spectral_gap", all_pass, "gap, rate, c-tensor and bracket checks on every instance"});
  return out;
}

namespace {

NoiseModel noise_from(const Params& params, std::uint64_t seed) {
  if (params.word("noise") == "circle") return NoiseModel::circle(params.real("noise_radius"), seed);
  return NoiseModel::disk(seed);
}

}  // namespace

Outcome run_lyapunov(const Params& params, std::uint64_t seed) {
  const MatrixFamily family = params.word("family") == "sec6"
                                  ? sec6_family()
                                  : exp_scalar_family(static_cast<Index>(params.integer("dimension")));
  const NoiseModel noise = noise_from(params, seed);
  const EstimatorParams est{params.integer("n_steps"), params.integer("burn_in")};
  auto p_values = params.integers("p_values");
  std::sort(p_values.begin(), p_values.end());
  p_values.erase(std::unique(p_values.begin(), p_values.end()), p_values.end());
  const double h = params.real("fd_h");
  const int orbit_steps = static_cast<int>(params.integer("orbit_steps"));
  Rng rng(seed);

  Outcome out;
  out.header = {"t_re", "t_im", "p", "benettin", "benettin_stderr", "gauge", "gauge_stderr",
                "log_det_average", "fd_slope", "fd_bound", "orbit_rate", "pass"};
  bool agree_ok = true, identity_ok = true, fd_ok = true, orbit_ok = true, order_ok = true;
  const bool consecutive = p_values.front() == 1 &&
                           p_values.back() == static_cast<std::int64_t>(p_values.size());
  for (Complex t : params.complexes("t_values")) {
    std::vector<LyapunovEstimate> cumulative;
    for (auto p64 : p_values) {
      const int p = static_cast<int>(p64);
      const LyapunovEstimate b = benettin(family, noise, t, p, est);
      cumulative.push_back(b);
      double gauge = std::nan("");
      double gauge_se = std::nan("");
      double log_det = std::nan("");
      double orbit_rate = std::nan("");
      bool pass = true;
      if (p < family.n) {
        const ProjectiveCone cone = ProjectiveCone::coordinate(family.n, p, params.real("cone_aperture"));
        const LyapunovEstimate g = gauge_cocycle_estimate(family, noise, t, cone, est);
        gauge = g.value;
        gauge_se = g.std_error;
        const bool agree = std::abs(b.value - g.value) <= 3.0 * (b.std_error + g.std_error) + 1e-3;
        agree_ok = agree_ok && agree;
        pass = pass && agree;

        const Subspace v(cone.frame());
        const Subspace w = Subspace::span(rng.complex_matrix(family.n, p));
        orbit_rate = log_rate(orbit_separation(family, noise, t, v, w, orbit_steps));
        // a constant scalar family never moves the subspaces
        const bool orbit = orbit_rate < 0.0 || family.name == "exp-scalar";
        orbit_ok = orbit_ok && orbit;
        pass = pass && orbit;
      } else {
        log_det = log_det_average(family, noise, t, est);
        const bool identity = std::abs(b.value - log_det) <= 1e-10;
        identity_ok = identity_ok && identity;
        pass = pass && identity;
      }
      const DerivativeCheck fd = derivative_bound_check(family, noise, p, t, h, est,
                                                        params.integer("fd_sup_samples"));
      fd_ok = fd_ok && fd.pass;
      pass = pass && fd.pass;
      out.rows.push_back({num(t.real()), num(t.imag()), std::to_string(p), num(b.value),
                          num(b.std_error), num(gauge), num(gauge_se), num(log_det),
                          num(fd.slope), num(p * fd.c_fd), num(orbit_rate), flag(pass)});
    }
    if (consecutive) {
      // individual exponents chi_k - chi_{k-1}
      std::vector<double> exponent, spread;
      for (std::size_t k = 0; k < cumulative.size(); ++k) {
        const double prev = k == 0 ? 0.0 : cumulative[k - 1].value;
        const double prev_se = k == 0 ? 0.0 : cumulative[k - 1].std_error;
        exponent.push_back(cumulative[k].value - prev);
        spread.push_back(cumulative[k].std_error + prev_se);
      }
      for (std::size_t k = 0; k + 1 < exponent.size(); ++k)
        order_ok = order_ok && exponent[k] >= exponent[k + 1] - 3.0 * (spread[k] + spread[k + 1]);
    }
  }
  out.assertions.push_back({"estimator_agreement", agree_ok,
                            "|benettin - gauge cocycle| <= 3 (stderr sum) + 1e-3 for p < n"});
  out.assertions.push_back({"full_rank_identity", identity_ok,
                            "benettin(p = n) equals the log|det| average to 1e-10"});
  out.assertions.push_back({"derivative_bound", fd_ok, "finite-difference slope <= p C_fd + 3 stderr"});
  out.assertions.push_back({"orbit_contraction", orbit_ok, "fitted separation rate < 1"});
  if (consecutive)
    out.assertions.push_back({"ordered_exponents", order_ok, "chi1 >= chi2 - chi1 >= ... within 3 stderr"});
  out.results["family"] = family.name;
  out.results["noise_seed"] = noise.seed;
  return out;
}

Outcome run_sec6(const Params& params, std::uint64_t seed) {
  const MatrixFamily family = sec6_family();
  const NoiseModel noise = NoiseModel::disk(seed);
  const EstimatorParams est{params.integer("n_steps"), params.integer("burn_in")};
  const ProjectiveCone cone1 = ProjectiveCone::coordinate(3, 1, 1.0);
  const ProjectiveCone cone2 = ProjectiveCone::coordinate(3, 2, 1.0);
  const double radius = params.real("harmonic_radius");
  const int n_circle = static_cast<int>(params.integer("n_circle"));

  Outcome out;
  out.header = {"t_re", "t_im", "chi1", "chi1_stderr", "chi2", "chi2_stderr",
                "chi3", "chi3_stderr", "harmonic_residual_p2", "pass"};
  bool identity_ok = true, agree1_ok = true, agree2_ok = true, closed_ok = true, harmonic_ok = true;
  Json per_t = Json::array();
  for (Complex t : params.complexes("t_grid")) {
    const LyapunovEstimate b1 = benettin(family, noise, t, 1, est);
    const LyapunovEstimate b2 = benettin(family, noise, t, 2, est);
    const LyapunovEstimate b3 = benettin(family, noise, t, 3, est);
    const LyapunovEstimate g1 = gauge_cocycle_estimate(family, noise, t, cone1, est);
    const LyapunovEstimate g2 = gauge_cocycle_estimate(family, noise, t, cone2, est);
    const double log_det = log_det_average(family, noise, t, est);
    const LyapunovEstimate closed = chi3_closed_form(t, noise, params.integer("closed_form_samples"));
    const HarmonicityResult harmonic = harmonicity_check(family, noise, 2, t, radius, n_circle, est);

    const bool identity = std::abs(b3.value - log_det) <= 1e-10;
    const bool agree1 = std::abs(b1.value - g1.value) <= 3.0 * (b1.std_error + g1.std_error) + 1e-3;
    const bool agree2 = std::abs(b2.value - g2.value) <= 3.0 * (b2.std_error + g2.std_error) + 1e-3;
    const double combined = std::hypot(b3.std_error, closed.std_error);
    const bool closed_match = std::abs(closed.value - b3.value) <= 3.0 * combined;
    const bool pass = identity && agree1 && agree2 && closed_match && harmonic.pass;
    identity_ok = identity_ok && identity;
    agree1_ok = agree1_ok && agree1;
    agree2_ok = agree2_ok && agree2;
    closed_ok = closed_ok && closed_match;
    harmonic_ok = harmonic_ok && harmonic.pass;

    out.rows.push_back({num(t.real()), num(t.imag()), num(b1.value), num(b1.std_error),
                        num(b2.value), num(b2.std_error), num(b3.value), num(b3.std_error),
                        num(harmonic.residual), flag(pass)});
    per_t.push_back({{"t", jcomplex(t)},
                     {"gauge_chi1", jnum(g1.value)},
                     {"gauge_chi1_stderr", jnum(g1.std_error)},
                     {"gauge_chi2", jnum(g2.value)},
                     {"gauge_chi2_stderr", jnum(g2.std_error)},
                     {"log_det_average", jnum(log_det)},
                     {"chi3_closed_form", jnum(closed.value)},
                     {"chi3_closed_form_stderr", jnum(closed.std_error)},
                     {"harmonic_scale_p2", jnum(harmonic.scale)},
                     {"harmonic_pooled_stderr_p2", jnum(harmonic.pooled_stderr)},
                     {"harmonic_pass_p2", harmonic.pass}});
  }
  out.assertions.push_back({"full_rank_identity", identity_ok, "benettin(p = 3) equals the log|det| average to 1e-10"});
  out.assertions.push_back({"estimator_agreement_p1", agree1_ok, "within 3 (stderr sum) + 1e-3"});
  out.assertions.push_back({"estimator_agreement_p2", agree2_ok, "within 3 (stderr sum) + 1e-3"});
  out.assertions.push_back({"chi3_closed_form", closed_ok, "within 3 combined stderr of benettin(p = 3)"});
  out.assertions.push_back({"harmonicity_p2", harmonic_ok, "residual <= max(0.02 scale, 4 pooled stderr)"});

  const Sec6MappingReport mapping = verify_sec6_cone_mapping(
      params.integer("mapping_samples"), params.complexes("mapping_t_grid"), seed);
  Json worst_x = Json::array();
  for (Index i = 0; i < mapping.worst_x.size(); ++i) worst_x.push_back(jcomplex(mapping.worst_x(i)));
  out.results["per_t"] = per_t;
  out.results["cone_mapping"] = {{"samples", mapping.samples},
                                 {"mapping_ok", mapping.mapping_ok},
                                 {"min_margin", jnum(mapping.min_margin)},
                                 {"min_abs_det", jnum(mapping.min_abs_det)},
                                 {"worst_t", jcomplex(mapping.worst_t)},
                                 {"worst_xi", jcomplex(mapping.worst_xi)},
                                 {"worst_x", worst_x}};
  out.flags.push_back({"cone_mapping", mapping.mapping_ok,
                       describe("min relative margin in C_{pi,0.85}", mapping.min_margin, ">=", 0.0)});
  out.flags.push_back({"det_lower_bound", mapping.min_abs_det >= 43.0,
                       describe("min |det|", mapping.min_abs_det, ">=", 43.0)});
  return out;
}

}  // namespace conegap::cli::detail
