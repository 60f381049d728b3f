// geomhmm/optim.cpp

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

#include "geomhmm/optim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "geomhmm/errors.hpp"

namespace geomhmm {

namespace {

constexpr double kObjectiveFloor = 1e-30;
// consecutive low-progress iterations before declaring convergence, so a
// momentum restart cannot masquerade as a stall
constexpr int kStallPatience = 5;

void check_monotone(double before, double after) {
  if (after > before + 1e-12 * std::max(1.0, std::abs(before))) {
    std::ostringstream msg;
    msg << "projected gradient objective increased from " << before << " to "
        << after;
    throw NumericalError(msg.str());
  }
}

// Largest eigenvalue of the PSD operator X -> left X right (left, right
// symmetric PSD; right may be empty for the identity), by power iteration
// on matrices.
double operator_lambda_max(const Eigen::MatrixXd& left,
                           const Eigen::MatrixXd& right, Eigen::Index rows,
                           Eigen::Index cols, int iters) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(rows, cols);
  x(0, 0) += 0.5;  // break symmetry so the top eigenvector is reachable
  x /= x.norm();
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Eigen::MatrixXd y = left * x;
    if (right.size() > 0) y = y * right;
    const double n = y.norm();
    if (n <= 0.0) return 0.0;
    lambda = x.cwiseProduct(y).sum();
    x = y / n;
  }
  return std::max(lambda, 0.0);
}

// Accelerated projected gradient with a monotone safeguard: the momentum
// candidate is kept only when it does not increase the objective,
// otherwise the momentum is restarted and a plain projected step is
// taken. The objective therefore never increases, feasibility holds at
// every iterate, and ill-conditioned quadratics converge at the
// square-root-of-kappa rate that plain projected gradient lacks.
Eigen::MatrixXd accelerated_pg(
    const std::function<double(const Eigen::MatrixXd&)>& objective,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& gradient,
    const std::function<void(Eigen::MatrixXd&)>& project,
    Eigen::MatrixXd x, double lipschitz, const SolverConfig& cfg,
    SolveInfo* info) {
  SolveInfo out;
  out.lipschitz = lipschitz;
  double f = objective(x);
  if (lipschitz <= 0.0) {
    // constant objective: the start point is optimal
    out.converged = true;
    out.objective = f;
    if (info) *info = out;
    return x;
  }
  const double step = 1.0 / lipschitz;
  Eigen::MatrixXd x_prev = x;
  double t = 1.0;
  int stall = 0;
  for (out.iterations = 1; out.iterations <= cfg.max_iters;
       ++out.iterations) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    Eigen::MatrixXd y = x + beta * (x - x_prev);
    Eigen::MatrixXd candidate = y - step * gradient(y);
    project(candidate);
    double f_new = objective(candidate);
    double moved = 0.0;
    if (f_new <= f) {
      moved = (candidate - x).lpNorm<Eigen::Infinity>();
      x_prev = x;
      x = std::move(candidate);
      t = t_next;
    } else {
      // restart the momentum and fall back to a plain descent step
      t = 1.0;
      Eigen::MatrixXd plain = x - step * gradient(x);
      project(plain);
      f_new = objective(plain);
      check_monotone(f, f_new);
      moved = (plain - x).lpNorm<Eigen::Infinity>();
      x_prev = x;
      x = std::move(plain);
    }
    // an iteration counts as stalled when the objective stops improving
    // or the iterate sits at its floating-point resolution limit
    const bool no_progress =
        (f - f_new <= cfg.tol * std::max(f, 1e-300)) ||
        moved <= 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>());
    stall = no_progress ? stall + 1 : 0;
    f = f_new;
    if (stall >= kStallPatience || f <= kObjectiveFloor) {
      out.converged = true;
      break;
    }
  }
  out.objective = f;
  if (info) *info = out;
  return x;
}

// Shared driver for min || left X right - target ||_F^2 over row-
// stochastic X. An empty `right` means the identity.
Eigen::MatrixXd solve_row_stochastic(const Eigen::MatrixXd& left,
                                     const Eigen::MatrixXd& right,
                                     const Eigen::MatrixXd& target,
                                     Eigen::Index n, const SolverConfig& cfg,
                                     SolveInfo* info) {
  const Eigen::MatrixXd ltl = left.transpose() * left;
  Eigen::MatrixXd rrt;
  if (right.size() > 0) rrt = right * right.transpose();
  const double lambda = operator_lambda_max(ltl, rrt, n, n, cfg.power_iters);
  const double lips = 2.0 * lambda * cfg.step_safety;

  const auto objective = [&](const Eigen::MatrixXd& p) {
    if (right.size() > 0) return (left * p * right - target).squaredNorm();
    return (left * p - target).squaredNorm();
  };
  const auto gradient = [&](const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
    if (right.size() > 0) {
      return 2.0 * left.transpose() * (left * p * right - target) *
             right.transpose();
    }
    return 2.0 * left.transpose() * (left * p - target);
  };
  const auto project = [](Eigen::MatrixXd& p) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      p.row(i) = project_simplex(p.row(i).transpose()).transpose();
    }
  };
  const Eigen::MatrixXd start =
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return accelerated_pg(objective, gradient, project, start, lips, cfg,
                        info);
}

}  // namespace

Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
  if (!v.allFinite()) {
    throw std::invalid_argument("project_simplex: non-finite entries");
  }
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] > candidate) threshold = candidate;
  }
  return (v.array() - threshold).cwiseMax(0.0).matrix();
}

Eigen::VectorXd solve_stationary(
    const Eigen::Ref<const Eigen::VectorXd>& h0_diag,
    const Eigen::Ref<const Eigen::MatrixXd>& obs_matrix,
    const SolverConfig& cfg, SolveInfo* info) {
  const Eigen::Index n = obs_matrix.rows();
  if (obs_matrix.cols() != h0_diag.size()) {
    throw std::invalid_argument(
        "solve_stationary: observation matrix and moment diagonal disagree");
  }
  const Eigen::MatrixXd gram = obs_matrix * obs_matrix.transpose();
  const double lambda =
      operator_lambda_max(gram, Eigen::MatrixXd(), n, 1, cfg.power_iters);
  const double lips = 2.0 * lambda * cfg.step_safety;

  const auto objective = [&](const Eigen::MatrixXd& p) {
    return (obs_matrix.transpose() * p.col(0) - h0_diag).squaredNorm();
  };
  const auto gradient = [&](const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
    return 2.0 * obs_matrix *
           (obs_matrix.transpose() * p.col(0) - h0_diag);
  };
  const auto project = [](Eigen::MatrixXd& p) {
    p.col(0) = project_simplex(p.col(0));
  };
  const Eigen::MatrixXd start =
      Eigen::MatrixXd::Constant(n, 1, 1.0 / static_cast<double>(n));
  return accelerated_pg(objective, gradient, project, start, lips, cfg,
                        info)
      .col(0);
}

Eigen::MatrixXd solve_lag(const Eigen::Ref<const Eigen::MatrixXd>& h_tau,
                          const Eigen::Ref<const Eigen::MatrixXd>& obs_matrix,
                          const Eigen::Ref<const Eigen::MatrixXd>& a_prev,
                          const SolverConfig& cfg, SolveInfo* info) {
  const Eigen::Index n = obs_matrix.rows();
  if (a_prev.rows() != n || a_prev.cols() != n) {
    throw std::invalid_argument("solve_lag: a_prev has the wrong shape");
  }
  if (h_tau.rows() != obs_matrix.cols() || h_tau.cols() != obs_matrix.cols()) {
    throw std::invalid_argument("solve_lag: moment matrix has the wrong shape");
  }
  const Eigen::MatrixXd left = obs_matrix.transpose() * a_prev;
  return solve_row_stochastic(left, obs_matrix, h_tau, n, cfg, info);
}

Eigen::MatrixXd solve_stacked(std::span<const Eigen::MatrixXd> a_seq,
                              const SolverConfig& cfg, SolveInfo* info) {
  if (a_seq.size() < 2) {
    throw std::invalid_argument(
        "solve_stacked: need at least lags 0 and 1 of the A sequence");
  }
  const Eigen::Index n = a_seq[0].rows();
  const Eigen::Index tau_bar = static_cast<Eigen::Index>(a_seq.size()) - 1;
  Eigen::MatrixXd prev(tau_bar * n, n), next(tau_bar * n, n);
  for (Eigen::Index t = 0; t < tau_bar; ++t) {
    if (a_seq[t].rows() != n || a_seq[t].cols() != n ||
        a_seq[t + 1].rows() != n || a_seq[t + 1].cols() != n) {
      throw std::invalid_argument("solve_stacked: ragged A sequence");
    }
    prev.middleRows(t * n, n) = a_seq[t];
    next.middleRows(t * n, n) = a_seq[t + 1];
  }
  return solve_row_stochastic(prev, Eigen::MatrixXd(), next, n, cfg, info);
}

}  // namespace geomhmm
