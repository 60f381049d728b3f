// geomhmm/test_manifold.cpp

// Copyright 2026  The geomhmm authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.

#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "geomhmm/errors.hpp"
#include "geomhmm/manifold.hpp"
#include "geomhmm/rng.hpp"
#include "support/oracles.hpp"

using namespace geomhmm;

namespace {

ManifoldPoint spd_diag(double a, double c) {
  return ManifoldPoint::spd2(a, 0.0, c);
}

// Random tangent vector at base with Riemannian norm at most max_norm.
TangentVector random_tangent(const ManifoldPoint& base, Rng& rng,
                             double max_norm) {
  Eigen::Vector3d comps = Eigen::Vector3d::Zero();
  const int dim = manifold_dim(base.kind());
  for (int i = 0; i < dim; ++i) comps[i] = rng.normal();
  if (base.kind() == ManifoldKind::kPoincareDisk) comps[2] = 0.0;
  TangentVector v{base, comps};
  const double n = norm(v);
  if (n > 0.0) v.components *= (max_norm * rng.uniform()) / n;
  return v;
}

}  // namespace

TEST_CASE("disk distance closed-form values") {
  const auto o = ManifoldPoint::disk(0, 0);
  CHECK(dist(o, o) == 0.0);
  // acosh(5/3) = ln 3 for the pair (0, 0.5)
  const auto z = ManifoldPoint::disk(0.5, 0.0);
  CHECK(dist(o, z) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(dist(z, z) == 0.0);
}

TEST_CASE("spd2 distance closed-form values") {
  const auto i = spd_diag(1.0, 1.0);
  const auto z = spd_diag(std::exp(2.0), 1.0);
  CHECK(dist(i, z) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dist(i, i) == 0.0);
}

TEST_CASE("distance symmetry, identity, triangle inequality") {
  Rng rng(11);
  for (const auto kind : {ManifoldKind::kPoincareDisk, ManifoldKind::kSpd2}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = oracles::random_point(kind, rng);
      const auto y = oracles::random_point(kind, rng);
      const auto z = oracles::random_point(kind, rng);
      CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-13));
      CHECK(dist(x, x) == 0.0);
      CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-10);
    }
  }
}

TEST_CASE("isometry invariance of the distance") {
  Rng rng(17);
  SUBCASE("spd2 congruence") {
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::Matrix2d g;
      g << 1.0 + 0.5 * rng.normal(), 0.5 * rng.normal(),
          0.5 * rng.normal(), 1.0 + 0.5 * rng.normal();
      if (std::abs(g.determinant()) < 0.2) continue;
      const auto y = oracles::random_spd_point(rng);
      const auto z = oracles::random_spd_point(rng);
      const auto gy = ManifoldPoint::spd2(g * y.spd_matrix() * g.transpose());
      const auto gz = ManifoldPoint::spd2(g * z.spd_matrix() * g.transpose());
      CHECK(dist(gy, gz) == doctest::Approx(dist(y, z)).epsilon(1e-9));
    }
  }
  SUBCASE("disk rotation") {
    for (int trial = 0; trial < 100; ++trial) {
      const double theta = 2.0 * 3.14159265358979323846 * rng.uniform();
      const std::complex<double> rot(std::cos(theta), std::sin(theta));
      const auto y = oracles::random_disk_point(rng);
      const auto z = oracles::random_disk_point(rng);
      const auto ry = ManifoldPoint::disk(rot * y.disk_coords());
      const auto rz = ManifoldPoint::disk(rot * z.disk_coords());
      CHECK(dist(ry, rz) == doctest::Approx(dist(y, z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("exp map fixed values") {
  const auto y = ManifoldPoint::disk(0.3, -0.2);
  CHECK(exp_map(y, Eigen::Vector3d::Zero()) == y);

  const auto i = spd_diag(1.0, 1.0);
  const auto e = exp_map(i, Eigen::Vector3d(1.0, 0.0, 1.0));
  CHECK(e.coords()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(e.coords()[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e.coords()[2] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("log map fixed values") {
  const auto y = ManifoldPoint::disk(0.3, -0.2);
  CHECK(log_map(y, y).components.norm() == 0.0);

  const auto i = spd_diag(1.0, 1.0);
  const auto v = log_map(i, spd_diag(std::exp(1.0), 1.0));
  CHECK(v.components[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.components[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.components[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exp/log round trips and norm consistency") {
  Rng rng(23);
  for (const auto kind : {ManifoldKind::kPoincareDisk, ManifoldKind::kSpd2}) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto y = oracles::random_point(kind, rng);
      const auto v = random_tangent(y, rng, 3.0);

      // dist(y, exp_y(v)) equals the tangent norm of v
      const auto z = exp_map(v);
      CHECK(dist(y, z) == doctest::Approx(norm(v)).epsilon(1e-9));

      // log inverts exp componentwise
      const auto w = log_map(y, z);
      CHECK((w.components - v.components).norm() <=
            1e-9 * (1.0 + v.components.norm()));

      // exp inverts log on an independent pair
      const auto z2 = oracles::random_point(kind, rng);
      const auto back = exp_map(log_map(y, z2));
      CHECK((back.coords() - z2.coords()).norm() <= 1e-9);

      // tangent norm of the log equals the distance
      CHECK(norm(log_map(y, z2)) ==
            doctest::Approx(dist(y, z2)).epsilon(1e-10));
    }
  }
}

TEST_CASE("karcher mean trivial cases") {
  const auto y = ManifoldPoint::disk(0.2, 0.4);
  const std::vector<ManifoldPoint> single{y};
  CHECK(dist(karcher_mean(single, Eigen::VectorXd::Ones(1)), y) <= 1e-12);

  const std::vector<ManifoldPoint> twice{y, y};
  const auto m = karcher_mean(twice, Eigen::VectorXd::Constant(2, 0.5));
  CHECK(dist(m, y) <= 1e-12);
}

TEST_CASE("karcher mean of commuting spd matrices is the geometric mean") {
  const double e2 = std::exp(2.0);
  const std::vector<ManifoldPoint> pts{spd_diag(1.0, 1.0), spd_diag(e2, e2)};
  const auto m = karcher_mean(pts, Eigen::VectorXd::Constant(2, 0.5));
  const auto expected = spd_diag(std::exp(1.0), std::exp(1.0));
  CHECK(dist(m, expected) <= 1e-9);
}

TEST_CASE("karcher mean gradient norm and geodesic midpoint property") {
  Rng rng(31);
  for (const auto kind : {ManifoldKind::kPoincareDisk, ManifoldKind::kSpd2}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform() * 6);
      std::vector<ManifoldPoint> pts;
      Eigen::VectorXd w(n);
      for (int i = 0; i < n; ++i) {
        pts.push_back(oracles::random_point(kind, rng));
        w[i] = 0.1 + rng.uniform();
      }
      w /= w.sum();
      const auto m = karcher_mean(pts, w);
      Eigen::Vector3d grad = Eigen::Vector3d::Zero();
      for (int i = 0; i < n; ++i) grad += w[i] * log_map(m, pts[i]).components;
      CHECK(norm(TangentVector{m, grad}) <= 1e-9);
    }

    const auto y = oracles::random_point(kind, rng);
    const auto z = oracles::random_point(kind, rng);
    const auto mid = karcher_mean(std::vector<ManifoldPoint>{y, z},
                                  Eigen::VectorXd::Constant(2, 0.5));
    CHECK(dist(y, mid) + dist(mid, z) ==
          doctest::Approx(dist(y, z)).epsilon(1e-8));
  }
}

TEST_CASE("point validity: projection within slack, rejection beyond") {
  CHECK_THROWS_AS(ManifoldPoint::disk(1.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ManifoldPoint::disk(0.8, 0.61), std::invalid_argument);
  // |y| = 1 lies within the slack band and is clamped inside
  const auto edge = ManifoldPoint::disk(1.0, 0.0);
  CHECK(std::abs(edge.disk_coords()) < 1.0);

  CHECK_THROWS_AS(ManifoldPoint::spd2(1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ManifoldPoint::spd2(-1.0, 0.0, 1.0), std::invalid_argument);
  // asymmetric input is symmetrized
  Eigen::Matrix2d almost;
  almost << 2.0, 0.3 + 1e-14, 0.3 - 1e-14, 1.0;
  const auto p = ManifoldPoint::spd2(almost);
  CHECK(p.coords()[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("kind mismatch is rejected") {
  const auto d = ManifoldPoint::disk(0.1, 0.2);
  const auto s = spd_diag(1.0, 2.0);
  CHECK_THROWS_AS(dist(d, s), std::invalid_argument);
  CHECK_THROWS_AS(log_map(d, s), std::invalid_argument);
}

TEST_CASE("karcher mean input validation") {
  const std::vector<ManifoldPoint> empty;
  CHECK_THROWS_AS(karcher_mean(empty, Eigen::VectorXd()),
                  std::invalid_argument);
  const std::vector<ManifoldPoint> one{ManifoldPoint::disk(0, 0)};
  CHECK_THROWS_AS(karcher_mean(one, Eigen::VectorXd::Zero(1)),
                  std::invalid_argument);
}

TEST_CASE("karcher mean reports the gradient norm when out of iterations") {
  const std::vector<ManifoldPoint> pts{ManifoldPoint::disk(-0.4, 0.0),
                                       ManifoldPoint::disk(0.4, 0.2)};
  KarcherOptions opts;
  opts.max_iters = 0;
  try {
    karcher_mean(pts, Eigen::VectorXd::Constant(2, 0.5), opts);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("gradient norm") != std::string::npos);
  }
}
