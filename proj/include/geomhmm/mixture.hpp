// geomhmm/mixture.hpp

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

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "geomhmm/rgauss.hpp"
#include "geomhmm/rng.hpp"

namespace geomhmm {

struct MixtureModel {
  Eigen::VectorXd weights;
  std::vector<RiemannianGaussian> components;

  int n_components() const { return static_cast<int>(components.size()); }
  ManifoldKind manifold() const { return components.at(0).mean.kind(); }
  void validate() const;
};

struct MixtureConfig {
  int n_restarts = 5;
  int max_iters = 500;
  double rel_tol = 1e-7;       // on the log-likelihood improvement
  double sigma_floor = 1e-3;   // dispersion floor during the M-step
  double weight_floor = 1e-6;  // below this a component has collapsed
  /// When set, skips the k-means++ seeding and runs a single EM pass from
  /// this model.
  std::optional<MixtureModel> init;
};

struct MixtureFit {
  MixtureModel model;
  std::vector<double> loglik_history;  // winning run, one entry per step
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Expectation-maximization fit of an n-component isotropic Gaussian
/// mixture: k-means++ style seeding on Riemannian distances, log-space
/// responsibilities, Karcher-mean M-steps warm-started from the previous
/// means, best of n_restarts runs. Throws ComponentCollapse (with the
/// offending index) when every restart loses a component, and
/// NumericalError when no restart converges.
MixtureFit fit_mixture(std::span<const ManifoldPoint> observations,
                       int n_components, const MixtureConfig& cfg, Rng& rng);

/// Posterior component probabilities for one observation, computed in
/// log space; always sums to one.
Eigen::VectorXd responsibilities(const MixtureModel& model,
                                 const ManifoldPoint& y);

double log_likelihood(const MixtureModel& model,
                      std::span<const ManifoldPoint> observations);

}  // namespace geomhmm
