// geomhmm/hmm.cpp

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

#include "geomhmm/hmm.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "geomhmm/errors.hpp"

namespace geomhmm {

bool is_row_stochastic(const Eigen::Ref<const Eigen::MatrixXd>& p,
                       double tol) {
  if (p.rows() != p.cols() || p.rows() == 0) return false;
  if (!p.allFinite() || p.minCoeff() < 0.0) return false;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (std::abs(p.row(i).sum() - 1.0) > tol) return false;
  }
  return true;
}

void HmmModel::validate() const {
  const int n = n_states();
  if (n == 0) throw std::invalid_argument("model has no components");
  if (P.rows() != n || P.cols() != n) {
    throw std::invalid_argument("transition matrix size does not match the "
                                "number of components");
  }
  if (!is_row_stochastic(P)) {
    throw std::invalid_argument("transition matrix is not row-stochastic");
  }
  if (pi0.size() != n || pi0.minCoeff() < 0.0 ||
      std::abs(pi0.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("pi0 is not a distribution over the states");
  }
  for (const auto& g : components) {
    if (g.mean.kind() != manifold()) {
      throw std::invalid_argument("components live on different manifolds");
    }
  }
}

Trajectory simulate(const HmmModel& model, int length, int burn_in,
                    Rng& rng) {
  model.validate();
  if (length < 1) throw std::invalid_argument("simulate: length must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("simulate: negative burn-in");

  const int total = burn_in + length;
  std::vector<int> path(total);
  path[0] = rng.categorical(model.pi0);
  for (int k = 1; k < total; ++k) {
    path[k] = rng.categorical(model.P.row(path[k - 1]).transpose());
  }

  Trajectory out;
  out.states.assign(path.begin() + burn_in, path.end());
  out.observations.reserve(length);
  std::vector<GaussianSampler> samplers;
  samplers.reserve(model.n_states());
  for (const auto& g : model.components) samplers.emplace_back(g);
  for (int k = 0; k < length; ++k) {
    out.observations.push_back(samplers[out.states[k]].draw(rng));
  }
  return out;
}

Eigen::VectorXd stationary(const Eigen::Ref<const Eigen::MatrixXd>& p) {
  if (!is_row_stochastic(p)) {
    throw std::invalid_argument("stationary: matrix is not row-stochastic");
  }
  const Eigen::Index n = p.rows();

  // A unique stationary distribution needs the unit-circle eigenvalue to
  // be simple; multiplicity signals a reducible or periodic chain.
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(p);
  int on_circle = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eig.eigenvalues()[i]) > 1.0 - 1e-8) ++on_circle;
  }
  if (on_circle != 1) {
    std::ostringstream msg;
    msg << "chain is reducible or periodic: " << on_circle
        << " eigenvalues on the unit circle";
    throw NumericalError(msg.str());
  }

  // (P^T - I) pi = 0 with the last equation replaced by normalization.
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();

  const double residual =
      (pi.transpose() * p - pi.transpose()).lpNorm<Eigen::Infinity>();
  if (residual > 1e-12) {
    std::ostringstream msg;
    msg << "stationary solve residual " << residual << " exceeds 1e-12";
    throw NumericalError(msg.str());
  }
  return pi;
}

}  // namespace geomhmm
