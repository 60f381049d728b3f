// geomhmm/hmm.hpp

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

#pragma once

#include <vector>

#include <Eigen/Core>

#include "geomhmm/rgauss.hpp"
#include "geomhmm/rng.hpp"

namespace geomhmm {

/// Hidden Markov chain with Gaussian observation likelihoods on a
/// manifold. P is row-stochastic (P[i][j] is the probability of moving
/// from state i to state j), pi0 is the initial state distribution, and
/// components[i] is the observation density of state i.
struct HmmModel {
  Eigen::MatrixXd P;
  Eigen::VectorXd pi0;
  std::vector<RiemannianGaussian> components;

  int n_states() const { return static_cast<int>(components.size()); }
  ManifoldKind manifold() const { return components.at(0).mean.kind(); }

  /// Throws std::invalid_argument on shape mismatch, non-stochastic rows
  /// (tolerance 1e-12), or mixed manifolds.
  void validate() const;
};

/// Checks nonnegativity and unit row sums within tol.
bool is_row_stochastic(const Eigen::Ref<const Eigen::MatrixXd>& p,
                       double tol = 1e-12);

struct Trajectory {
  std::vector<int> states;  // 0-based
  std::vector<ManifoldPoint> observations;
};

/// Simulates `length` steps after discarding a burn_in prefix. States are
/// drawn first along the full path, observations afterwards, so the state
/// path depends only on (seed, burn_in + length).
Trajectory simulate(const HmmModel& model, int length, int burn_in, Rng& rng);

/// Stationary distribution of a row-stochastic matrix by direct linear
/// solve. Throws std::invalid_argument if P is not stochastic and
/// NumericalError if the unit-circle eigenvalue is not simple (reducible
/// or periodic chain) or the fixed-point residual exceeds 1e-12.
Eigen::VectorXd stationary(const Eigen::Ref<const Eigen::MatrixXd>& p);

}  // namespace geomhmm
