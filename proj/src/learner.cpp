// geomhmm/learner.cpp

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

#include "geomhmm/learner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "geomhmm/errors.hpp"
#include "geomhmm/parallel.hpp"

namespace geomhmm {

namespace {

// Child stream ids, fixed so that stage 2 of learn_full and a direct
// learn_known_sensor call consume identical randomness for equal seeds.
constexpr std::uint64_t kStreamStage1 = 1;
constexpr std::uint64_t kStreamK = 2;

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Applies the learn-time burn-in trim and validates chain lengths.
std::vector<Chain> prepare_chains(std::span<const Chain> chains,
                                  const LearnConfig& cfg) {
  if (chains.empty()) {
    throw std::invalid_argument("learner: no observation chains");
  }
  if (cfg.burn_in < 0) {
    throw std::invalid_argument("learner: negative burn-in");
  }
  std::vector<Chain> out;
  out.reserve(chains.size());
  for (const auto& chain : chains) {
    if (static_cast<int>(chain.size()) <= cfg.burn_in + cfg.tau_bar) {
      throw std::invalid_argument(
          "learner: every chain must be longer than burn-in plus the lag "
          "count");
    }
    out.emplace_back(chain.begin() + cfg.burn_in, chain.end());
  }
  return out;
}

// O(n^3) shortest-augmenting-path assignment; returns row -> column.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Stage 2 of the learner; `rng` must already be the seed-root stream.
void run_moment_stage(std::span<const Chain> chains,
                      std::span<const RiemannianGaussian> sensor,
                      const LearnConfig& cfg, const Rng& rng,
                      LearnReport& report) {
  const auto start = std::chrono::steady_clock::now();
  report.K = effective_obs_matrix(sensor, cfg.mc_samples,
                                  rng.split(kStreamK), cfg.threads);
  report.k_condition = report.K.condition();

  const int n_chains = static_cast<int>(chains.size());
  std::vector<MomentSequence> per_chain(n_chains);
  std::vector<int> lengths(n_chains);
  parallel_for(n_chains, cfg.threads, [&](int c) {
    per_chain[c] = empirical_h(chains[c], sensor, cfg.tau_bar);
    lengths[c] = static_cast<int>(chains[c].size());
  });
  report.moments = combine_moments(per_chain, lengths);

  MomentMatch match = match_moments(report.moments, report.K.K, cfg.solver);
  report.pi_inf = std::move(match.pi);
  report.P = std::move(match.p);
  report.a_seq = std::move(match.a_seq);
  for (auto& stage : match.info) report.solver_info.push_back(stage);
  report.stage2_seconds = seconds_since(start);
}

}  // namespace

MomentMatch match_moments(const MomentSequence& moments,
                          const Eigen::Ref<const Eigen::MatrixXd>& obs_matrix,
                          const SolverConfig& cfg) {
  const int tau_bar = moments.tau_bar();
  if (tau_bar < 1) {
    throw std::invalid_argument("match_moments: need at least one lag");
  }
  if (moments.dim() != obs_matrix.cols()) {
    throw std::invalid_argument(
        "match_moments: moment dimension does not match the observation "
        "matrix");
  }
  MomentMatch out;
  SolveInfo info;
  out.pi = solve_stationary(moments.lags[0].diagonal(), obs_matrix, cfg,
                            &info);
  out.info.push_back({"stationary", info});

  out.a_seq.push_back(Eigen::MatrixXd(out.pi.asDiagonal()));
  for (int tau = 1; tau <= tau_bar; ++tau) {
    const Eigen::MatrixXd p_tau =
        solve_lag(moments.lags[tau], obs_matrix, out.a_seq.back(), cfg,
                  &info);
    std::ostringstream label;
    label << "lag-" << tau;
    out.info.push_back({label.str(), info});
    out.a_seq.push_back(out.a_seq.back() * p_tau);
    out.p_per_lag.push_back(p_tau);
  }

  out.p = solve_stacked(out.a_seq, cfg, &info);
  out.info.push_back({"stacked", info});
  return out;
}

LearnReport learn_known_sensor(std::span<const Chain> chains,
                               std::span<const RiemannianGaussian> sensor,
                               const LearnConfig& cfg) {
  const std::vector<Chain> trimmed = prepare_chains(chains, cfg);
  chains = trimmed;
  if (sensor.empty()) {
    throw std::invalid_argument("learn_known_sensor: empty sensor");
  }
  LearnReport report;
  report.n_states = static_cast<int>(sensor.size());
  report.tau_bar = cfg.tau_bar;
  report.seed = cfg.seed;
  report.known_sensor = true;
  report.mixture.components.assign(sensor.begin(), sensor.end());

  const Rng rng(cfg.seed);
  run_moment_stage(chains, sensor, cfg, rng, report);
  // with a known sensor the only stationary estimate is the matched one
  report.mixture.weights = report.pi_inf;
  return report;
}

LearnReport learn_full(std::span<const Chain> chains, int n_states,
                       const LearnConfig& cfg) {
  const std::vector<Chain> trimmed = prepare_chains(chains, cfg);
  chains = trimmed;
  if (n_states < 1) {
    throw std::invalid_argument("learn_full: need at least one state");
  }
  Chain pooled;
  for (const auto& chain : chains) {
    pooled.insert(pooled.end(), chain.begin(), chain.end());
  }

  LearnReport report;
  report.n_states = n_states;
  report.tau_bar = cfg.tau_bar;
  report.seed = cfg.seed;
  report.known_sensor = false;

  const Rng rng(cfg.seed);
  const auto start = std::chrono::steady_clock::now();
  Rng stage1_rng = rng.split(kStreamStage1);
  const MixtureFit fit =
      fit_mixture(pooled, n_states, cfg.mixture, stage1_rng);
  report.mixture = fit.model;
  report.stage1_seconds = seconds_since(start);

  run_moment_stage(chains, report.mixture.components, cfg, rng, report);
  return report;
}

std::vector<int> align_components(
    std::span<const RiemannianGaussian> reference,
    std::span<const RiemannianGaussian> estimate) {
  const int n = static_cast<int>(reference.size());
  if (static_cast<int>(estimate.size()) != n) {
    throw std::invalid_argument(
        "align_components: component counts differ");
  }
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = dist(reference[i].mean, estimate[j].mean);
      cost(i, j) = d * d;
    }
  }
  return min_cost_assignment(cost);
}

Metrics compute_metrics(
    const HmmModel& reference,
    std::span<const RiemannianGaussian> aligned_components,
    const Eigen::Ref<const Eigen::MatrixXd>& aligned_p) {
  const int n = reference.n_states();
  if (static_cast<int>(aligned_components.size()) != n ||
      aligned_p.rows() != n || aligned_p.cols() != n) {
    throw std::invalid_argument("compute_metrics: dimension mismatch");
  }
  Metrics m;
  double mean_sq = 0.0, disp_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d =
        dist(reference.components[i].mean, aligned_components[i].mean);
    mean_sq += d * d;
    const double ds =
        reference.components[i].sigma - aligned_components[i].sigma;
    disp_sq += ds * ds;
  }
  m.mean_error = std::sqrt(mean_sq);
  m.dispersion_error = std::sqrt(disp_sq);
  const Eigen::MatrixXd diff = reference.P - aligned_p;
  m.transition_error = diff.norm();
  m.relative_transition_error = diff.norm() / reference.P.norm();
  m.mean_abs_entry_error =
      diff.cwiseAbs().sum() / static_cast<double>(n * n);
  return m;
}

Evaluation evaluate(const HmmModel& reference, const LearnReport& report) {
  const int n = reference.n_states();
  if (report.n_states != n) {
    throw std::invalid_argument("evaluate: state counts differ");
  }
  Evaluation ev;
  ev.alignment =
      align_components(reference.components, report.mixture.components);

  ev.components_aligned.reserve(n);
  ev.pi_inf_aligned.resize(n);
  ev.p_aligned.resize(n, n);
  for (int i = 0; i < n; ++i) {
    ev.components_aligned.push_back(
        report.mixture.components[ev.alignment[i]]);
    ev.pi_inf_aligned[i] = report.pi_inf[ev.alignment[i]];
    for (int j = 0; j < n; ++j) {
      ev.p_aligned(i, j) = report.P(ev.alignment[i], ev.alignment[j]);
    }
  }
  ev.metrics = compute_metrics(reference, ev.components_aligned,
                               ev.p_aligned);
  return ev;
}

}  // namespace geomhmm
