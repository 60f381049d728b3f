// geomhmm/learner.hpp

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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geomhmm/hmm.hpp"
#include "geomhmm/mixture.hpp"
#include "geomhmm/moments.hpp"
#include "geomhmm/optim.hpp"

namespace geomhmm {

using Chain = std::vector<ManifoldPoint>;

struct LearnConfig {
  int tau_bar = 1;
  long mc_samples = 100000;  // per row of the density Gram matrix
  MixtureConfig mixture;
  SolverConfig solver;
  int burn_in = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Error metrics between a reference model and an aligned estimate:
/// sqrt-sum-of-squares over means and dispersions, and Frobenius /
/// relative / mean-absolute errors of the transition matrix.
struct Metrics {
  double mean_error = 0.0;
  double dispersion_error = 0.0;
  double transition_error = 0.0;
  double relative_transition_error = 0.0;
  double mean_abs_entry_error = 0.0;
};

struct StageInfo {
  std::string stage;
  SolveInfo info;
};

/// Evaluation against a ground-truth model: the matching permutation
/// (alignment[i] is the estimate index for reference state i), metrics,
/// and the aligned copies used to compute them.
struct Evaluation {
  std::vector<int> alignment;
  Metrics metrics;
  Eigen::MatrixXd p_aligned;
  Eigen::VectorXd pi_inf_aligned;
  std::vector<RiemannianGaussian> components_aligned;
};

/// Output of a learning run. Estimates are stored unaligned, exactly as
/// produced; evaluation (when ground truth is available) adds the aligned
/// view without overwriting them.
struct LearnReport {
  int n_states = 0;
  int tau_bar = 0;
  std::uint64_t seed = 0;
  bool known_sensor = false;

  MixtureModel mixture;    // stage-1 estimate, or the known sensor
  Eigen::VectorXd pi_inf;  // stage-2 moment-matched stationary estimate
  Eigen::MatrixXd P;
  std::vector<Eigen::MatrixXd> a_seq;
  MomentSequence moments;
  EffectiveObservationMatrix K;
  double k_condition = 0.0;

  std::vector<StageInfo> solver_info;
  double stage1_seconds = 0.0;
  double stage2_seconds = 0.0;

  std::optional<Evaluation> evaluation;

  ManifoldKind manifold() const { return mixture.manifold(); }
};

struct MomentMatch {
  Eigen::VectorXd pi;
  std::vector<Eigen::MatrixXd> a_seq;      // lags 0..tau_bar
  std::vector<Eigen::MatrixXd> p_per_lag;  // lags 1..tau_bar
  Eigen::MatrixXd p;                       // stacked least-squares estimate
  std::vector<StageInfo> info;
};

/// Moment-matching core shared by the discrete and continuous pipelines:
/// fits the stationary distribution to the lag-0 diagonal, peels one
/// row-stochastic factor per lag, then solves the stacked least-squares
/// problem for the transition matrix. obs_matrix is the discrete
/// observation matrix (N x Y) or the density Gram matrix (N x N).
MomentMatch match_moments(const MomentSequence& moments,
                          const Eigen::Ref<const Eigen::MatrixXd>& obs_matrix,
                          const SolverConfig& cfg = {});

/// Stage 2 alone: estimates the transition matrix from observation chains
/// when the observation densities are known.
LearnReport learn_known_sensor(std::span<const Chain> chains,
                               std::span<const RiemannianGaussian> sensor,
                               const LearnConfig& cfg);

/// Full two-stage learner: mixture estimation over the pooled
/// observations, then the known-sensor pipeline with the estimated
/// densities. For a fixed seed, stage 2 is a pure function of the stage-1
/// output and the observations.
LearnReport learn_full(std::span<const Chain> chains, int n_states,
                       const LearnConfig& cfg);

/// Minimum-cost matching of estimated components to reference ones under
/// squared mean distances (O(N^3) assignment).
std::vector<int> align_components(
    std::span<const RiemannianGaussian> reference,
    std::span<const RiemannianGaussian> estimate);

/// Metrics for an already-aligned estimate.
Metrics compute_metrics(const HmmModel& reference,
                        std::span<const RiemannianGaussian> aligned_components,
                        const Eigen::Ref<const Eigen::MatrixXd>& aligned_p);

/// Aligns the report against a reference model and computes metrics.
Evaluation evaluate(const HmmModel& reference, const LearnReport& report);

}  // namespace geomhmm
