// geomhmm/moments.hpp

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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "geomhmm/rgauss.hpp"
#include "geomhmm/rng.hpp"

namespace geomhmm {

/// Lagged pairwise second-order moments, lags 0..tau_bar. Lag 0 is
/// diagonal. In the discrete-alphabet case the matrices are Y x Y joint
/// probabilities; in the continuous case they are N x N expectations of
/// observation-density products.
struct MomentSequence {
  std::vector<Eigen::MatrixXd> lags;

  int tau_bar() const { return static_cast<int>(lags.size()) - 1; }
  int dim() const { return static_cast<int>(lags.at(0).rows()); }
};

/// Pairwise L2 inner products of the observation densities, estimated by
/// Monte Carlo and symmetrized. raw_k keeps the unsymmetrized estimate so
/// the symmetry defect stays inspectable.
struct EffectiveObservationMatrix {
  Eigen::MatrixXd K;
  long mc_samples = 0;
  Eigen::MatrixXd std_err;  // per entry of the symmetrized estimate
  Eigen::MatrixXd raw_k;

  double min_eigenvalue() const;
  double condition() const;
};

/// Analytic discrete moments: B^T diag(pi) P^tau B for tau >= 1 and
/// diag(B^T pi) for tau = 0. B is the N x Y row-stochastic observation
/// matrix.
Eigen::MatrixXd analytic_m2(const Eigen::Ref<const Eigen::MatrixXd>& p,
                            const Eigen::Ref<const Eigen::VectorXd>& pi_inf,
                            const Eigen::Ref<const Eigen::MatrixXd>& b,
                            int tau);

/// Empirical discrete moments from a 0-based symbol sequence:
/// [M(tau)]_{ij} = #{k : y_k = i, y_{k+tau} = j} / (D - tau).
MomentSequence empirical_m2(std::span<const int> symbols, int n_symbols,
                            int tau_bar);

/// Analytic continuous moments: K^T diag(pi) P^tau K for tau >= 1 and
/// diag(K pi) for tau = 0.
Eigen::MatrixXd analytic_h(const Eigen::Ref<const Eigen::MatrixXd>& p,
                           const Eigen::Ref<const Eigen::VectorXd>& pi_inf,
                           const Eigen::Ref<const Eigen::MatrixXd>& k,
                           int tau);

/// Empirical continuous moments:
///   [H(0)]_{ii} = mean_k B_i(y_k),
///   [H(tau)]_{ij} = mean_k B_i(y_k) B_j(y_{k+tau}).
MomentSequence empirical_h(std::span<const ManifoldPoint> observations,
                           std::span<const RiemannianGaussian> components,
                           int tau_bar);

/// Length-weighted average of per-chain moment sequences; lag tau is
/// weighted by (D_c - tau), matching the pair counts behind each entry.
MomentSequence combine_moments(std::span<const MomentSequence> seqs,
                               std::span<const int> chain_lengths);

/// Monte Carlo estimate of the density Gram matrix: row i averages
/// B_j over mc_samples draws from component i (one child rng stream per
/// row), then the estimate is symmetrized. threads > 1 distributes rows
/// without changing the result.
EffectiveObservationMatrix effective_obs_matrix(
    std::span<const RiemannianGaussian> components, long mc_samples,
    const Rng& rng, int threads = 1);

}  // namespace geomhmm
