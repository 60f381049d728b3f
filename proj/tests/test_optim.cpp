// geomhmm/test_optim.cpp

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
#include <vector>

#include <Eigen/Dense>

#include "geomhmm/optim.hpp"
#include "geomhmm/rng.hpp"
#include "support/oracles.hpp"

using namespace geomhmm;

namespace {

Eigen::VectorXd random_simplex(int n, Rng& rng, double floor = 0.05) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = floor + rng.uniform();
  return v / v.sum();
}

// Well-conditioned symmetric test matrix: I + 0.5 * random PSD.
Eigen::MatrixXd random_gram(int n, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return Eigen::MatrixXd::Identity(n, n) +
         0.5 * (a * a.transpose()) / static_cast<double>(n);
}

void check_row_stochastic(const Eigen::MatrixXd& p) {
  CHECK(p.minCoeff() >= 0.0);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    CHECK(std::abs(p.row(i).sum() - 1.0) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("project_simplex fixed cases") {
  Eigen::Vector3d on_simplex(0.2, 0.3, 0.5);
  CHECK((project_simplex(on_simplex) - on_simplex).norm() <= 1e-15);

  Eigen::Vector3d spike(2.0, 0.0, 0.0);
  CHECK((project_simplex(spike) - Eigen::Vector3d(1, 0, 0)).norm() <= 1e-15);

  Eigen::Vector3d mixed(0.5, 0.5, 1.5);
  CHECK((project_simplex(mixed) - Eigen::Vector3d(0, 0, 1)).norm() <= 1e-15);
}

TEST_CASE("project_simplex matches the grid brute force") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) v[i] = 3.0 * rng.normal();
    const Eigen::VectorXd fast = project_simplex(v);
    const Eigen::Vector3d grid = oracles::project_simplex_grid(v);
    CHECK((fast - grid).norm() <= 2e-3);
    CHECK(std::abs(fast.sum() - 1.0) <= 1e-12);
    CHECK(fast.minCoeff() >= 0.0);
  }
}

TEST_CASE("solve_stationary recovers the noise-free distribution") {
  Rng rng(7);
  for (int n : {3, 5, 6}) {
    const Eigen::MatrixXd k = random_gram(n, rng);
    const Eigen::VectorXd pi = random_simplex(n, rng);
    const Eigen::VectorXd h0 = k.transpose() * pi;
    SolveInfo info;
    const Eigen::VectorXd est = solve_stationary(h0, k, {}, &info);
    CHECK((est - pi).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK(std::abs(est.sum() - 1.0) <= 1e-12);
    CHECK(info.converged);
  }
}

TEST_CASE("solve_stationary with the identity sensor reduces to a projection") {
  Eigen::Vector3d h0(0.5, 0.1, 0.2);
  const Eigen::VectorXd est =
      solve_stationary(h0, Eigen::MatrixXd::Identity(3, 3));
  const Eigen::VectorXd direct = project_simplex(h0);
  CHECK((est - direct).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("solve_stationary tolerates a singular sensor") {
  // duplicated rows make the minimizer non-unique; the solver must still
  // return a feasible minimizer
  Eigen::MatrixXd k(3, 3);
  k << 1.0, 0.2, 0.2,
       1.0, 0.2, 0.2,
       0.1, 0.1, 0.9;
  Eigen::Vector3d pi(0.3, 0.3, 0.4);
  const Eigen::VectorXd h0 = k.transpose() * pi;
  SolveInfo info;
  const Eigen::VectorXd est = solve_stationary(h0, k, {}, &info);
  CHECK((k.transpose() * est - h0).norm() <= 1e-6);
  CHECK(std::abs(est.sum() - 1.0) <= 1e-12);
  CHECK(est.minCoeff() >= 0.0);
}

TEST_CASE("solve_lag recovers the noise-free transition matrix") {
  Rng rng(21);
  for (int n : {3, 5}) {
    const Eigen::MatrixXd k = random_gram(n, rng);
    const Eigen::MatrixXd p = oracles::random_row_stochastic(n, rng);
    const Eigen::VectorXd pi = random_simplex(n, rng);
    const Eigen::MatrixXd a0 = pi.asDiagonal();
    const Eigen::MatrixXd h1 = k.transpose() * a0 * p * k;
    SolveInfo info;
    const Eigen::MatrixXd est = solve_lag(h1, k, a0, {}, &info);
    CHECK((est - p).lpNorm<Eigen::Infinity>() <= 1e-5);
    check_row_stochastic(est);
  }
}

TEST_CASE("solve_lag identity case") {
  Rng rng(23);
  const int n = 4;
  const Eigen::MatrixXd k = random_gram(n, rng);
  const Eigen::VectorXd pi = random_simplex(n, rng);
  const Eigen::MatrixXd a0 = pi.asDiagonal();
  const Eigen::MatrixXd h = k.transpose() * a0 * k;  // P = I
  const Eigen::MatrixXd est = solve_lag(h, k, a0);
  CHECK((est - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() <=
        1e-5);
  check_row_stochastic(est);
}

TEST_CASE("solve_stacked recovers the noise-free transition matrix") {
  Rng rng(99);
  for (int n : {3, 5, 6}) {
    const Eigen::MatrixXd p = oracles::random_row_stochastic(n, rng);
    const Eigen::VectorXd pi = random_simplex(n, rng);
    std::vector<Eigen::MatrixXd> a_seq;
    Eigen::MatrixXd a = pi.asDiagonal();
    a_seq.push_back(a);
    for (int t = 1; t <= 3; ++t) {
      a = a * p;
      a_seq.push_back(a);
    }
    SolveInfo info;
    const Eigen::MatrixXd est = solve_stacked(a_seq, {}, &info);
    CHECK((est - p).lpNorm<Eigen::Infinity>() <= 1e-5);
    check_row_stochastic(est);
  }
}

TEST_CASE("solve_stacked with one lag matches the consistent linear system") {
  Rng rng(123);
  const int n = 4;
  const Eigen::MatrixXd p = oracles::random_row_stochastic(n, rng);
  const Eigen::VectorXd pi = random_simplex(n, rng);
  std::vector<Eigen::MatrixXd> a_seq;
  a_seq.push_back(pi.asDiagonal());
  a_seq.push_back(a_seq[0] * p);
  const Eigen::MatrixXd est = solve_stacked(a_seq);
  CHECK((est - p).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("stacked objective beats the single-lag solution on stacked data") {
  Rng rng(321);
  const int n = 4;
  const Eigen::MatrixXd p = oracles::random_row_stochastic(n, rng);
  const Eigen::VectorXd pi = random_simplex(n, rng);
  // perturbed lagged products emulate noisy moment estimates
  std::vector<Eigen::MatrixXd> a_seq;
  Eigen::MatrixXd a = pi.asDiagonal();
  a_seq.push_back(a);
  for (int t = 1; t <= 3; ++t) {
    a = a * p;
    Eigen::MatrixXd noisy = a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) noisy(i, j) += 0.002 * rng.normal();
    a_seq.push_back(noisy);
  }
  const Eigen::MatrixXd stacked = solve_stacked(a_seq);
  const std::vector<Eigen::MatrixXd> head{a_seq[0], a_seq[1]};
  const Eigen::MatrixXd single = solve_stacked(head);

  auto stacked_objective = [&](const Eigen::MatrixXd& x) {
    double acc = 0.0;
    for (int t = 0; t < 3; ++t) {
      acc += (a_seq[t] * x - a_seq[t + 1]).squaredNorm();
    }
    return acc;
  };
  CHECK(stacked_objective(stacked) <= stacked_objective(single) + 1e-12);
}

TEST_CASE("noise-free recovery across all three solvers") {
  Rng rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform() * 4);  // up to 6
    const Eigen::MatrixXd k = random_gram(n, rng);
    const Eigen::MatrixXd p = oracles::random_row_stochastic(n, rng);
    const Eigen::VectorXd pi = random_simplex(n, rng);

    const Eigen::VectorXd pi_est =
        solve_stationary(k.transpose() * pi, k);
    CHECK((pi_est - pi).lpNorm<Eigen::Infinity>() <= 1e-5);

    const Eigen::MatrixXd a0 = pi.asDiagonal();
    const Eigen::MatrixXd p_est =
        solve_lag(k.transpose() * a0 * p * k, k, a0);
    CHECK((p_est - p).lpNorm<Eigen::Infinity>() <= 1e-5);

    std::vector<Eigen::MatrixXd> a_seq{a0, a0 * p, a0 * p * p};
    const Eigen::MatrixXd p_stacked = solve_stacked(a_seq);
    CHECK((p_stacked - p).lpNorm<Eigen::Infinity>() <= 1e-5);
  }
}

TEST_CASE("feasibility holds even without convergence") {
  Rng rng(777);
  const int n = 5;
  const Eigen::MatrixXd k = random_gram(n, rng);
  const Eigen::MatrixXd p = oracles::random_row_stochastic(n, rng);
  const Eigen::VectorXd pi = random_simplex(n, rng);
  const Eigen::MatrixXd a0 = pi.asDiagonal();
  SolverConfig tight;
  tight.max_iters = 3;
  SolveInfo info;
  const Eigen::MatrixXd est =
      solve_lag(k.transpose() * a0 * p * k, k, a0, tight, &info);
  CHECK_FALSE(info.converged);
  check_row_stochastic(est);
}

TEST_CASE("solver input validation") {
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd h0(2);
  h0 << 0.5, 0.5;
  CHECK_THROWS_AS(solve_stationary(h0, k), std::invalid_argument);
  CHECK_THROWS_AS(
      solve_lag(Eigen::MatrixXd::Identity(2, 2), k,
                Eigen::MatrixXd::Identity(3, 3)),
      std::invalid_argument);
  std::vector<Eigen::MatrixXd> short_seq{Eigen::MatrixXd::Identity(3, 3)};
  CHECK_THROWS_AS(solve_stacked(short_seq), std::invalid_argument);
}
