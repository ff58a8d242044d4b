#include <doctest.h>

#include "conegap/cone.hpp"
#include "conegap/instances.hpp"
#include "oracles.hpp"

using namespace conegap;

namespace {

CVector vec(std::initializer_list<Complex> values) {
  CVector out(static_cast<Index>(values.size()));
  Index i = 0;
  for (Complex z : values) out(i++) = z;
  return out;
}

ProjectiveCone random_cone(Index n, Index p, double a, Rng& rng) {
  return ProjectiveCone(Frame(CMatrix(random_unitary(n, rng).leftCols(p))), a);
}

// Direct expansion of the outside-the-cone test for z x - y.
double outside_value(const ProjectiveCone& cone, const CVector& x, const CVector& y, Complex z) {
  const CVector w = z * x - y;
  const CVector wf = cone.project(w);
  const CVector wg = w - wf;
  return wg.squaredNorm() - cone.aperture() * cone.aperture() * wf.squaredNorm();
}

}  // namespace

TEST_CASE("membership examples") {
  const ProjectiveCone cone = ProjectiveCone::coordinate(3, 1, 0.7);
  const CVector f = vec({2.0, 0.0, 0.0});
  CHECK(contains(cone, f));
  CHECK(margin(cone, f) == doctest::Approx(0.7 * 2.0));
  CHECK_FALSE(contains(cone, vec({0.0, 1.0, 0.0})));
  const CVector boundary = vec({1.0, 0.7, 0.0});
  CHECK(std::abs(margin(cone, boundary)) < 1e-15);
  CHECK(margin(cone, Complex(0, 3) * f) == doctest::Approx(3 * margin(cone, f)));
  CHECK_THROWS_AS(margin(cone, vec({1.0, 0.0})), Error);
}

TEST_CASE("contains_rho against ball sampling") {
  Rng rng(50);
  const ProjectiveCone cone = random_cone(4, 2, 1.0, rng);
  const double rho = rho_for_aperture(cone, 0.5) * (1.0 - 1e-9);
  for (int trial = 0; trial < 20; ++trial) {
    CVector x = sample_cone_vector(cone.with_aperture(0.5), rng, trial % 2 == 0);
    REQUIRE(contains_rho(cone, x, rho));
    for (int k = 0; k < 1000; ++k) {
      CVector d = rng.complex_vector(4);
      d *= rho * x.norm() * std::pow(rng.uniform(), 0.125) / d.norm();
      CHECK(contains(cone, CVector(x + d)));
    }
  }
  const CVector inside = cone.frame().matrix().col(0);
  CHECK(contains_rho(cone, inside, 0.1));
  CHECK(contains_rho(cone, inside, 0.99 / (2.0 * std::sqrt(2.0))));
  const CVector boundary = sample_cone_vector(cone, rng, true);
  CHECK_FALSE(contains_rho(cone, boundary, 1e-6));
  CHECK_FALSE(contains_rho(cone, CVector(cone.complement_basis().col(0)), 1e-3));
}

TEST_CASE("gauge region coefficients match the grid sign") {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectiveCone cone = random_cone(4, trial % 2 + 1, 0.5 + rng.uniform(), rng);
    const CVector x = sample_cone_vector(cone, rng, false);
    const CVector y = sample_cone_vector(cone, rng, false);
    const GaugeRegion region = gauge_region(cone, x, y);
    int disagreements = 0;
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const Complex z(-4.0 + 0.2 * i, -4.0 + 0.2 * j);
        const double direct = outside_value(cone, x, y, z);
        const double closed = region.evaluate(z);
        if (std::abs(direct) > 1e-9 && (direct > 0) != (closed > 0)) ++disagreements;
        CHECK(std::abs(direct - closed) <= 1e-10 * (1.0 + std::abs(direct)));
      }
    }
    CHECK(disagreements == 0);
    CHECK(region.a < 0.0);
  }
}

TEST_CASE("gauge region worked example") {
  const ProjectiveCone cone = ProjectiveCone::coordinate(2, 1, 1.0);
  const GaugeRegion region = gauge_region(cone, vec({1.0, 0.0}), vec({1.0, 0.5}));
  REQUIRE(region.kind == GaugeRegion::Kind::Disk);
  CHECK(std::abs(region.center - 1.0) < 1e-14);
  CHECK(region.radius == doctest::Approx(0.5));
  CHECK(gauge_delta(cone, vec({1.0, 0.0}), vec({1.0, 0.5})) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(gauge_delta_search(cone, vec({1.0, 0.0}), vec({1.0, 0.5})) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("gauge region degenerate kinds") {
  const ProjectiveCone cone = ProjectiveCone::coordinate(3, 2, 1.0);
  const CVector x = vec({1.0, 0.2, 0.3});
  CHECK(gauge_region(cone, x, Complex(2.0) * x).kind == GaugeRegion::Kind::Empty);
  CHECK(gauge_delta(cone, x, Complex(0, 2) * x) == 0.0);
  // both in range(F): the span lies in the cone
  const CVector u = vec({1.0, 0.0, 0.0});
  const CVector v = vec({0.0, 1.0, 0.0});
  CHECK(gauge_region(cone, u, v).kind == GaugeRegion::Kind::Empty);
  CHECK(d1(cone, u, v) == 0.0);
  // x on the boundary: unbounded region
  const CVector edge = vec({1.0, 0.0, 1.0});
  CHECK(std::isinf(gauge_delta(cone, edge, u + Complex(0.1) * CVector(vec({0.0, 0.0, 1.0})))));
  CHECK_THROWS_AS(gauge_region(cone, vec({0.0, 0.0, 1.0}), u), Error);
}

TEST_CASE("gauge delta against the membership search") {
  Rng rng(52);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 3 + trial % 4;
    const ProjectiveCone cone = random_cone(n, 1 + trial % 2, 0.3 + rng.uniform(), rng);
    const CVector x = sample_cone_vector(cone, rng, false);
    const CVector y = sample_cone_vector(cone, rng, false);
    worst = std::max(worst, std::abs(gauge_delta(cone, x, y) - gauge_delta_search(cone, x, y)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("gauge symmetry and projectivity") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const ProjectiveCone cone = random_cone(4, 2, 1.0, rng);
    const CVector x = sample_cone_vector(cone, rng, false);
    const CVector y = sample_cone_vector(cone, rng, false);
    const double d = gauge_delta(cone, x, y);
    CHECK(std::abs(d - gauge_delta(cone, y, x)) <= 1e-9);
    CHECK(std::abs(d - gauge_delta(cone, CVector(Complex(0, 3) * x), y)) <= 1e-9);
    CHECK(std::abs(d - gauge_delta(cone, x, CVector(Complex(-0.2, 0.5) * y))) <= 1e-9);
  }
}

TEST_CASE("distinct subspaces have a pair at positive gauge") {
  Rng rng(54);
  const ProjectiveCone cone = random_cone(5, 2, 1.0, rng);
  const Subspace v = sample_cone_subspace(cone, rng, 0.4);
  const Subspace w = sample_cone_subspace(cone, rng, 0.4);
  double best = 0.0;
  for (int k = 0; k < 200; ++k) {
    const CVector x = v.basis() * rng.complex_vector(2);
    const CVector y = w.basis() * rng.complex_vector(2);
    best = std::max(best, d1(cone, x, y));
  }
  CHECK(best > 0.0);
}

TEST_CASE("diameter bound examples") {
  CHECK(diameter_bound(1, 3) == doctest::Approx(2 * std::log(2.0)));
  CHECK(diameter_bound(0.85, 1) == doctest::Approx(2 * std::log(1.85 / 0.15)));
  CHECK(diameter_bound(1e-9, 1) < 1e-8);
  CHECK_THROWS_AS(diameter_bound(1, 1), Error);
  CHECK_THROWS_AS(diameter_bound(0, 1), Error);
}

TEST_CASE("cone distance brackets") {
  Rng rng(55);
  const ProjectiveCone cone = random_cone(4, 2, 1.0, rng);
  const Subspace v = sample_cone_subspace(cone, rng, 0.5);
  const ConeDistanceEstimate same = cone_distance(cone, v, v);
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);

  const Subspace w = sample_cone_subspace(cone, rng, 0.3);
  SearchBudget small{8, 200, 7};
  SearchBudget large{16, 200, 7};
  const ConeDistanceEstimate a = cone_distance(cone, v, w, small);
  const ConeDistanceEstimate b = cone_distance(cone, v, w, large);
  CHECK(a.lower > 0.0);
  CHECK(b.lower >= a.lower);
  CHECK(b.lower <= diameter_bound(0.5, 1.0));
  CHECK(b.upper == doctest::Approx(diameter_bound(0.5, 1.0)));
  CHECK_THROWS_AS(cone_distance(cone.with_aperture(0.2), v, w), Error);
}

TEST_CASE("aperture map") {
  Rng rng(56);
  const ProjectiveCone cone = random_cone(5, 2, 1.0, rng);
  const Aperture ap = aperture_map(cone);
  CHECK(ap.k == doctest::Approx(std::sqrt(2.0)));
  CHECK(singular_values(ap.m.matrix)(0) == doctest::Approx(1.0));
  for (int k = 0; k < 10000; ++k) {
    const CVector x = sample_cone_vector(cone, rng, k % 2 == 0);
    CHECK(x.norm() <= ap.k * (ap.m.matrix * x).norm() * (1.0 + 1e-12));
    if (k % 2 == 0) CHECK(std::abs(x.norm() - ap.k * (ap.m.matrix * x).norm()) <= 1e-9);
  }
  const CVector inside = cone.frame().matrix() * rng.complex_vector(2);
  CHECK(inside.norm() == doctest::Approx((ap.m.matrix * inside).norm()));
}

TEST_CASE("cone mapping examples") {
  const ProjectiveCone wide = ProjectiveCone::coordinate(4, 2, 1.0);
  CHECK(check_maps_cone(CMatrix::Identity(4, 4), wide.with_aperture(0.5), wide, 64).certified);

  CMatrix d = CMatrix::Zero(4, 4);
  d.diagonal() << 5, 4, 1, 0.5;
  const ConeMappingCheck check = check_maps_cone(d, wide, wide.with_aperture(0.3), 256);
  CHECK(check.sampled_ok);
  CHECK(check.certified);
  CHECK(check.certified_aperture == doctest::Approx(0.25));

  // rotation sending e1 to e3
  CMatrix r = CMatrix::Identity(4, 4);
  r(0, 0) = 0;
  r(2, 2) = 0;
  r(2, 0) = 1;
  r(0, 2) = -1;
  const ConeMappingCheck bad = check_maps_cone(r, wide, wide, 64);
  CHECK_FALSE(bad.sampled_ok);
  CHECK(bad.worst_margin < 0.0);
  CHECK_FALSE(bad.certified);
}

TEST_CASE("certificate implies sampled mapping") {
  Rng rng(57);
  int certified = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const ProjectiveCone cone = random_cone(4, 2, 1.0, rng);
    const CMatrix proj = cone.frame().matrix() * cone.frame().matrix().adjoint();
    const CMatrix t = 0.3 * rng.complex_matrix(4, 4) + 3.0 * proj;
    const ConeMappingCheck check = check_maps_cone(t, cone, cone.with_aperture(0.9), 200, trial);
    if (check.certified) {
      ++certified;
      CHECK(check.sampled_ok);
    }
  }
  CHECK(certified > 0);
}

TEST_CASE("certified maps contract the gauge") {
  Rng rng(58);
  for (int trial = 0; trial < 10; ++trial) {
    const GapInstance inst = sample_gap_instance(4, 2, 1.0, rng);
    const double factor = inst.certified_aperture / inst.cone.aperture();
    for (int k = 0; k < 20; ++k) {
      const CVector x = sample_cone_vector(inst.cone, rng, false);
      const CVector y = sample_cone_vector(inst.cone, rng, false);
      const double before = d1(inst.cone, x, y);
      const double after = d1(inst.cone, CVector(inst.t * x), CVector(inst.t * y));
      CHECK(after <= before + 1e-9);
      CHECK(after <= factor * before + 1e-8);
    }
  }
}

TEST_CASE("matched vectors and normalized representatives are close") {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectiveCone cone = random_cone(5, 2, 1.0, rng);
    const Aperture ap = aperture_map(cone);
    const Subspace v = sample_cone_subspace(cone, rng, 0.6 * rng.uniform());
    const Subspace w = sample_cone_subspace(cone, rng, 0.6 * rng.uniform());
    const double bound = diameter_bound(std::max(subspace_aperture(cone, v), subspace_aperture(cone, w)), 1.0);
    const CMatrix& m = ap.m.matrix;
    for (int k = 0; k < 20; ++k) {
      CVector x = v.basis() * rng.complex_vector(2);
      x.normalize();
      const CVector y = w.basis() * (m * w.basis()).inverse() * (m * x);
      CHECK((x - y).norm() <= ap.k * (m * x).norm() * bound + 1e-12);
    }
    WedgeTensor hv = v.representative();
    WedgeTensor hw = w.representative();
    hv *= 1.0 / m_hat(ap.m, hv);
    hw *= 1.0 / m_hat(ap.m, hw);
    CHECK(plucker_norm(hv - hw) <= 2 * 2 * std::pow(ap.k, 2) * bound + 1e-12);
  }
}

TEST_CASE("gauge outputs are scale invariant") {
  Rng rng(60);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectiveCone cone = random_cone(4, 2, 1.0, rng);
    const CVector x = sample_cone_vector(cone, rng, false);
    const CVector y = sample_cone_vector(cone, rng, false);
    const Complex s = rng.complex_normal();
    CHECK(std::abs(d1(cone, x, y) - d1(cone, CVector(s * x), CVector(s * y))) <= 1e-9);
  }
}

TEST_CASE("subspace sampling produces the requested aperture") {
  Rng rng(61);
  const ProjectiveCone cone = random_cone(6, 2, 1.0, rng);
  for (double a : {0.0, 0.2, 0.7, 1.0}) {
    const Subspace v = sample_cone_subspace(cone, rng, a);
    CHECK(std::abs(subspace_aperture(cone, v) - a) <= 1e-10);
  }
  CHECK(std::isinf(subspace_aperture(cone, Subspace::span(cone.complement_basis().leftCols(2)))));
}
