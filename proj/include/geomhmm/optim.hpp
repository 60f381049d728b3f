// geomhmm/optim.hpp

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

namespace geomhmm {

struct SolverConfig {
  int max_iters = 50000;
  double tol = 1e-12;     // relative objective-decrease threshold
  int power_iters = 100;  // for the Lipschitz constant
  double step_safety = 1.01;
};

struct SolveInfo {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double lipschitz = 0.0;
};

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v);

/// min over the simplex of || obs_matrix^T pi - h0_diag ||_F^2, by
/// projected gradient with a fixed 1/L step. obs_matrix is N x Y (rows
/// indexed by states); h0_diag has length Y. The returned vector is
/// feasible regardless of convergence status.
Eigen::VectorXd solve_stationary(
    const Eigen::Ref<const Eigen::VectorXd>& h0_diag,
    const Eigen::Ref<const Eigen::MatrixXd>& obs_matrix,
    const SolverConfig& cfg = {}, SolveInfo* info = nullptr);

/// min over row-stochastic P of
///   || h_tau - obs_matrix^T a_prev P obs_matrix ||_F^2.
Eigen::MatrixXd solve_lag(const Eigen::Ref<const Eigen::MatrixXd>& h_tau,
                          const Eigen::Ref<const Eigen::MatrixXd>& obs_matrix,
                          const Eigen::Ref<const Eigen::MatrixXd>& a_prev,
                          const SolverConfig& cfg = {},
                          SolveInfo* info = nullptr);

/// min over row-stochastic P of the stacked residual
///   || [A(0); ...; A(tau_bar - 1)] P - [A(1); ...; A(tau_bar)] ||_F^2,
/// which folds every lag into one least-squares problem.
Eigen::MatrixXd solve_stacked(std::span<const Eigen::MatrixXd> a_seq,
                              const SolverConfig& cfg = {},
                              SolveInfo* info = nullptr);

}  // namespace geomhmm
