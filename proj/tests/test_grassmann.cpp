#include <doctest.h>

#include <numbers>

#include "conegap/grassmann.hpp"
#include "conegap/rng.hpp"
#include "oracles.hpp"

using namespace conegap;

namespace {

Subspace line(Complex a, Complex b) {
  CMatrix v(2, 1);
  v << a, b;
  return Subspace::span(v);
}

Subspace random_subspace(Index n, Index p, Rng& rng) { return Subspace::span(rng.complex_matrix(n, p)); }

}  // namespace

TEST_CASE("principal angles examples") {
  Rng rng(30);
  const Subspace v = random_subspace(5, 2, rng);
  for (double a : principal_angles(v, v).angles) CHECK(a < 1e-7);
  const auto ortho = principal_angles(line(1, 0), line(0, 1));
  CHECK(ortho.largest() == doctest::Approx(std::numbers::pi / 2));
  const auto diag = principal_angles(line(1, 0), line(1, 1));
  CHECK(diag.largest() == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("principal angles are symmetric and ascending") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Subspace v = random_subspace(6, 3, rng);
    const Subspace w = random_subspace(6, 3, rng);
    const auto a = principal_angles(v, w).angles;
    const auto b = principal_angles(w, v).angles;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i] - b[i]) < 1e-10);
      if (i) CHECK(a[i - 1] <= a[i]);
      CHECK(a[i] >= 0.0);
      CHECK(a[i] <= std::numbers::pi / 2 + 1e-15);
    }
  }
}

TEST_CASE("hausdorff distance examples") {
  Rng rng(32);
  const Subspace v = random_subspace(4, 2, rng);
  CHECK(d_hausdorff(v, v) < 1e-9);
  CHECK(d_hausdorff(line(1, 0), line(0, 1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(d_hausdorff(line(1, 0), line(1, 1)) == doctest::Approx(2 * std::sin(std::numbers::pi / 8)));
}

TEST_CASE("hausdorff distance against sphere sampling") {
  Rng rng(33);
  Rng draw_rng(34);
  auto draw = [&](Index k) { return draw_rng.complex_vector(k); };
  for (int n : {2, 3, 4}) {
    for (int p : {1, 2}) {
      if (p >= n) continue;
      const Subspace v = random_subspace(n, p, rng);
      const Subspace w = random_subspace(n, p, rng);
      const double sampled = oracle::sphere_hausdorff(v.basis(), w.basis(), 20000, draw);
      CHECK(std::abs(sampled - d_hausdorff(v, w)) <= 2e-2);
      CHECK(sampled <= d_hausdorff(v, w) + 1e-12);
    }
  }
}

TEST_CASE("gap metric examples and comparison") {
  CHECK(d_delta(line(1, 0), line(0, 1)) == doctest::Approx(1.0));
  CHECK(d_delta(line(1, 0), line(1, 1)) == doctest::Approx(std::sqrt(0.5)));
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const Subspace v = random_subspace(5, 2, rng);
    const Subspace w = random_subspace(5, 2, rng);
    const double dd = d_delta(v, w);
    const double dh = d_hausdorff(v, w);
    CHECK(dd <= dh + 1e-12);
    CHECK(dh <= 2 * dd + 1e-12);
    // sup over the sphere of V of the distance to W
    const CMatrix residual = w.projector() * v.basis() - v.basis();
    CHECK(std::abs(singular_values(residual)(0) - dd) <= 1e-10);
  }
}

TEST_CASE("wedge distance examples") {
  CHECK(d_wedge(line(1, 0), line(0, 1)) == doctest::Approx(std::sqrt(2.0)));
  CMatrix a = CMatrix::Zero(3, 2);
  a(0, 0) = 1;
  a(1, 1) = 1;
  CMatrix b = CMatrix::Zero(3, 2);
  b(0, 0) = 1;
  b(1, 1) = 0.5;
  b(2, 1) = std::sqrt(0.75);
  const Subspace v = Subspace::span(a);
  const Subspace w = Subspace::span(b);
  CHECK(d_wedge(v, w) == doctest::Approx(1.0));
  const double scanned = oracle::phase_scan(v.representative().coords, w.representative().coords);
  CHECK(std::abs(scanned - d_wedge(v, w)) <= 1e-6);
}

TEST_CASE("wedge distance against the phase scan") {
  Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const Subspace v = random_subspace(5, 2, rng);
    const Subspace w = random_subspace(5, 2, rng);
    const double scanned = oracle::phase_scan(v.representative().coords, w.representative().coords);
    CHECK(std::abs(scanned - d_wedge(v, w)) <= 1e-6);
    CHECK(std::abs(projective_distance(v.representative(), w.representative()) - d_wedge(v, w)) <= 1e-10);
  }
}

TEST_CASE("metric axioms") {
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const Subspace u = random_subspace(6, 2, rng);
    const Subspace v = random_subspace(6, 2, rng);
    const Subspace w = random_subspace(6, 2, rng);
    CHECK(d_hausdorff(u, v) == doctest::Approx(d_hausdorff(v, u)).epsilon(1e-12));
    CHECK(d_wedge(u, v) == doctest::Approx(d_wedge(v, u)).epsilon(1e-12));
    CHECK(d_hausdorff(u, w) <= d_hausdorff(u, v) + d_hausdorff(v, w) + 1e-9);
    CHECK(d_wedge(u, w) <= d_wedge(u, v) + d_wedge(v, w) + 1e-9);
  }
}

TEST_CASE("metric equivalence constants") {
  Rng rng(38);
  for (int p : {1, 2, 3}) {
    double fact = 1.0;
    for (int k = 2; k <= p; ++k) fact *= k;
    double lowest = 1e300;
    for (int n : {4, 6, 8}) {
      for (int trial = 0; trial < 40; ++trial) {
        const Subspace v = random_subspace(n, p, rng);
        const double eps = std::pow(10.0, -5.0 * rng.uniform());
        const Subspace w = trial % 2 ? random_subspace(n, p, rng)
                                     : Subspace::span(v.basis() + eps * rng.complex_matrix(n, p));
        const double dh = d_hausdorff(v, w);
        const double dw = d_wedge(v, w);
        CHECK(dw <= 2 * p * fact * dh + 1e-12);
        if (dh > 1e-9) lowest = std::min(lowest, dw / dh);
      }
    }
    MESSAGE("p = " << p << " empirical lower ratio " << lowest);
    CHECK(lowest > 0.01);
  }
}

TEST_CASE("full-dimensional subspaces are at distance zero") {
  Rng rng(39);
  const Subspace v = random_subspace(3, 3, rng);
  const Subspace w = random_subspace(3, 3, rng);
  CHECK(d_hausdorff(v, w) == 0.0);
  CHECK(d_wedge(v, w) < 1e-7);
}

TEST_CASE("right decomposition") {
  CMatrix a = CMatrix::Zero(4, 2);
  a(2, 0) = 1;
  a(0, 1) = 1;
  const Subspace v = Subspace::span(a);
  const auto basis = right_decomposition(v);
  REQUIRE(basis.size() == 2);
  for (const auto& x : basis) CHECK(x.norm() == doctest::Approx(1.0));
  CHECK(std::abs(basis[0].dot(basis[1])) < 1e-14);

  Rng rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const Subspace w = random_subspace(6, 3, rng);
    const auto xs = right_decomposition(w);
    CMatrix x(6, 3);
    for (int i = 0; i < 3; ++i) x.col(i) = xs[i];
    CHECK(std::abs(plucker_norm(wedge(x)) - 1.0) <= 1e-10);
    CVector u = w.basis() * rng.complex_vector(3);
    u.normalize();
    const CVector coeff = x.adjoint() * u;
    for (int i = 0; i < 3; ++i) CHECK(std::abs(coeff(i)) <= std::pow(2.0, i) + 1e-12);
  }
}

TEST_CASE("Cauchy sequences of decomposables converge to a decomposable limit") {
  Rng rng(41);
  const Subspace target = random_subspace(5, 2, rng);
  CMatrix frame = rng.complex_matrix(5, 2);
  for (int k = 0; k < 60; ++k) frame = 0.5 * frame + 0.5 * target.basis();
  const Subspace limit = Subspace::span(frame);
  CHECK(d_wedge(limit, target) <= 1e-8);
}

TEST_CASE("metric dimension checks") {
  Rng rng(42);
  CHECK_THROWS_AS(d_hausdorff(random_subspace(4, 2, rng), random_subspace(5, 2, rng)), Error);
  CHECK_THROWS_AS(d_wedge(random_subspace(4, 2, rng), random_subspace(4, 1, rng)), Error);
}
