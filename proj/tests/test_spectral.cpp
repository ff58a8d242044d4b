#include <doctest.h>

#include <functional>

#include "conegap/instances.hpp"
#include "conegap/spectral.hpp"

using namespace conegap;

namespace {

CMatrix diag(std::initializer_list<Complex> values) {
  CMatrix d = CMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  Index i = 0;
  for (Complex z : values) d(i, i) = z, ++i;
  return d;
}

bool throws_code(const std::function<void()>& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

CMatrix unit_columns(std::initializer_list<std::initializer_list<Complex>> columns) {
  const Index n = static_cast<Index>(columns.begin()->size());
  CMatrix m(n, static_cast<Index>(columns.size()));
  Index j = 0;
  for (const auto& col : columns) {
    Index i = 0;
    for (Complex z : col) m(i++, j) = z;
    ++j;
  }
  return m;
}

}  // namespace

TEST_CASE("diagonal example") {
  const CMatrix t = diag({5, 4, 1, 0.5});
  const ProjectiveCone cone = ProjectiveCone::coordinate(4, 2, 1.0);
  const GapReport report = spectral_gap_report(t, cone);
  REQUIRE(report.top_eigs.size() == 2);
  CHECK(std::abs(report.top_eigs[0] - 5.0) < 1e-10);
  CHECK(std::abs(report.top_eigs[1] - 4.0) < 1e-10);
  CHECK(report.subdominant_modulus == doctest::Approx(1.0));
  CHECK(report.observed_ratio == doctest::Approx(0.25));
  CHECK(std::abs(report.lambda_product - 20.0) < 1e-9);
  CHECK(report.converged);
  CHECK(d_hausdorff(report.v, Subspace::span(Frame::coordinate(4, 2).matrix())) < 1e-10);
}

TEST_CASE("iteration from a tilted start") {
  const CMatrix t = diag({5, 4, 1, 0.5});
  const ProjectiveCone cone = ProjectiveCone::coordinate(4, 2, 1.0);
  const Subspace v0 = Subspace::span(unit_columns({{1, 0, 0.2, 0}, {0, 1, 0, -0.1}}));
  const SubspaceIteration it = power_iterate_subspace(t, cone, v0);
  CHECK(d_hausdorff(it.v, Subspace::span(Frame::coordinate(4, 2).matrix())) < 1e-9);
  CHECK(it.history.back() <= 1e-10);
  CHECK(log_rate(it.history) <= std::log(0.25) + 0.05);
  for (std::size_t k = 1; k < it.history.size(); ++k) CHECK(it.history[k] <= it.history[k - 1] * (1 + 1e-6) + 1e-15);
}

TEST_CASE("iteration leaves the cone") {
  const CMatrix t = diag({1, 1, 5, 4});
  const ProjectiveCone cone = ProjectiveCone::coordinate(4, 2, 1.0);
  const Subspace v0 = Subspace::span(unit_columns({{1, 0, 0.2, 0}, {0, 1, 0, -0.1}}));
  CHECK(throws_code([&] { power_iterate_subspace(t, cone, v0); }, ErrorCode::ConeExit));
}

TEST_CASE("fixed subspace is unique") {
  Rng rng(70);
  for (Index p : {2, 3}) {
    const GapInstance inst = sample_gap_instance(6, p, 1.0, rng);
    std::vector<Subspace> results;
    for (int k = 0; k < 10; ++k) {
      const Subspace v0 = sample_cone_subspace(inst.cone, rng, 0.9 * rng.uniform());
      results.push_back(power_iterate_subspace(inst.t, inst.cone, v0, 1e-10).v);
    }
    for (std::size_t i = 0; i < results.size(); ++i)
      for (std::size_t j = i + 1; j < results.size(); ++j)
        CHECK(d_hausdorff(results[i], results[j]) <= 2e-10);
  }
}

TEST_CASE("restricted eigenvalues") {
  CHECK(throws_code([] { restricted_eigs(diag({5, 4, 1, 0.5}), Subspace::span(unit_columns({{1, 0, 1, 0}, {0, 1, 0, 0}}))); },
                    ErrorCode::NotInvariant));

  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix t = rng.complex_matrix(5, 5);
    t.bottomLeftCorner(3, 2).setZero();
    t.topLeftCorner(2, 2) = diag({Complex(7, 1), Complex(0, -3)});
    t.topLeftCorner(2, 2)(0, 1) = rng.complex_normal();
    const std::vector<Complex> eigs = restricted_eigs(t, Subspace::span(Frame::coordinate(5, 2).matrix()));
    REQUIRE(eigs.size() == 2);
    CHECK(std::abs(eigs[0] - Complex(7, 1)) < 1e-10);
    CHECK(std::abs(eigs[1] - Complex(0, -3)) < 1e-10);
  }
}

TEST_CASE("degenerate gap is rejected") {
  const ProjectiveCone cone = ProjectiveCone::coordinate(4, 2, 1.0);
  CHECK(throws_code([&] { spectral_gap_report(diag({5, 4, 4, 1}), cone); }, ErrorCode::GapViolated));
  CHECK(throws_code([&] { spectral_gap_report(diag({1, 1, 5, 4}), cone); }, ErrorCode::NotConeMapping));
}

TEST_CASE("random instances keep their gap") {
  Rng rng(72);
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = 4 + 2 * (trial % 3);
    const Index p = 2 + trial % 2;
    const GapInstance inst = sample_gap_instance(n, p, 1.0, rng);
    const GapReport report = spectral_gap_report(inst.t, inst.cone);
    CHECK(report.oracle_mismatch <= 1e-7);
    CHECK(report.subdominant_modulus < std::abs(report.top_eigs.back()));
    CHECK(log_rate(report.history) <= std::log(inst.certified_aperture / inst.cone.aperture()) + 0.05);

    Complex product = 1.0;
    for (Complex z : report.top_eigs) product *= z;
    CHECK(std::abs(product - report.lambda_product) <= 1e-8 * std::abs(product));

    const Eigen::ComplexEigenSolver<CMatrix> solver(compound_matrix(inst.t, static_cast<int>(p)), false);
    const CVector& compound = solver.eigenvalues();
    Index best = 0;
    compound.cwiseAbs().maxCoeff(&best);
    const Complex top = compound(best);
    CHECK(std::abs(top - report.lambda_product) <= 1e-7 * std::abs(top));
  }
}

TEST_CASE("c functional on the diagonal example") {
  const CMatrix t = diag({5, 4, 1, 0.5});
  const GapReport report = spectral_gap_report(t, ProjectiveCone::coordinate(4, 2, 1.0));
  const CTensor c = c_functional(t, report);
  CHECK(std::abs(c(c.h) - 1.0) < 1e-12);
  CHECK(std::abs(c(wedge(Frame::coordinate(4, 2).matrix())) - 1.0) < 1e-10);
  CHECK(c.coords.tail(c.coords.size() - 1).norm() < 1e-10);

  const DecayFit fit = fit_decay(t, c, WedgeTensor(4, 2, CVector::Ones(6)), 30);
  CHECK(fit.eta == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("c functional on random instances") {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 4 + 2 * (trial % 3);
    const int p = 2 + trial % 2;
    const GapInstance inst = sample_gap_instance(n, p, 1.0, rng);
    const GapReport report = spectral_gap_report(inst.t, inst.cone);
    const CTensor c = c_functional(inst.t, report);
    CHECK(std::abs(c(c.h) - 1.0) <= 1e-8);

    const CMatrix compound = compound_matrix(inst.t, p);
    const WedgeTensor u = wedge(rng.complex_matrix(n, p));
    const Complex lhs = c(apply_compound(compound, u));
    CHECK(std::abs(lhs - c.lambda * c(u)) <= 1e-8 * std::max(1.0, std::abs(lhs)));

    const CMatrix factors = c_factors(c, report.v);
    CHECK((functional_wedge(factors) - c.coords).norm() <= 1e-7 * c.coords.norm());

    const CMatrix pi = spectral_projector(c, report.v);
    CHECK((pi * pi - pi).norm() <= 1e-7 * pi.norm());
    CHECK(pi.jacobiSvd().setThreshold(1e-8).rank() == p);
    CHECK((pi * inst.t - inst.t * pi).norm() <= 1e-7 * inst.t.norm() * pi.norm());
    CHECK((pi * report.v.basis() - report.v.basis()).norm() <= 1e-8 * pi.norm());

    const DecayFit fit = fit_decay(inst.t, c, u, 30);
    CHECK(fit.eta < 1.0);
    CHECK(fit.points_used >= 2);
  }
}

TEST_CASE("compound norm bracket") {
  Rng rng(74);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 4 + trial % 3;
    const int p = 1 + trial % 3;
    const GapInstance inst = sample_gap_instance(n, p, 1.0, rng);
    const double inner = 0.5;
    const Subspace w = sample_cone_subspace(inst.cone, rng, inner * rng.uniform());
    const CompoundNormBracket b = compound_norm_bracket(inst.t, inst.cone, w, rho_for_aperture(inst.cone, inner));
    CHECK(b.lower <= b.norm * (1 + 1e-10));
    CHECK(b.norm <= b.upper * (1 + 1e-10));
    CHECK(b.norm == doctest::Approx(compound_operator_norm(inst.t, p)));
  }
}

TEST_CASE("log rate fit") {
  std::vector<double> history;
  for (int k = 0; k < 20; ++k) history.push_back(3.0 * std::pow(0.5, k));
  CHECK(log_rate(history) == doctest::Approx(std::log(0.5)));
  history.push_back(0.0);
  CHECK(log_rate(history) == doctest::Approx(std::log(0.5)));
  CHECK(std::isinf(log_rate({1.0})));
}
