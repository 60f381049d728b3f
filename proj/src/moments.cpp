// geomhmm/moments.cpp

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

#include "geomhmm/moments.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "geomhmm/errors.hpp"
#include "geomhmm/parallel.hpp"

namespace geomhmm {

namespace {

Eigen::MatrixXd matrix_power(const Eigen::Ref<const Eigen::MatrixXd>& p,
                             int tau) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  for (int t = 0; t < tau; ++t) out = out * p;
  return out;
}

// Density matrix with rows indexed by observations, columns by
// components, evaluated in log space to survive small dispersions.
Eigen::MatrixXd density_table(std::span<const ManifoldPoint> observations,
                              std::span<const RiemannianGaussian> components) {
  const int d = static_cast<int>(observations.size());
  const int n = static_cast<int>(components.size());
  Eigen::MatrixXd table(d, n);
  std::vector<double> log_z(n);
  for (int j = 0; j < n; ++j) {
    log_z[j] = log_normalization(components[j].mean.kind(),
                                 components[j].sigma);
  }
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < n; ++j) {
      const double dd = dist(components[j].mean, observations[k]);
      table(k, j) = std::exp(
          -dd * dd / (2.0 * components[j].sigma * components[j].sigma) -
          log_z[j]);
    }
  }
  return table;
}

}  // namespace

double EffectiveObservationMatrix::min_eigenvalue() const {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  return eig.eigenvalues().minCoeff();
}

double EffectiveObservationMatrix::condition() const {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
  const double smallest = svd.singularValues().minCoeff();
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return svd.singularValues().maxCoeff() / smallest;
}

Eigen::MatrixXd analytic_m2(const Eigen::Ref<const Eigen::MatrixXd>& p,
                            const Eigen::Ref<const Eigen::VectorXd>& pi_inf,
                            const Eigen::Ref<const Eigen::MatrixXd>& b,
                            int tau) {
  const Eigen::Index n = p.rows();
  if (p.cols() != n || pi_inf.size() != n || b.rows() != n) {
    throw std::invalid_argument("analytic_m2: dimension mismatch");
  }
  if (tau < 0) throw std::invalid_argument("analytic_m2: negative lag");
  if (tau == 0) {
    return Eigen::MatrixXd((b.transpose() * pi_inf).asDiagonal());
  }
  return b.transpose() * pi_inf.asDiagonal() * matrix_power(p, tau) * b;
}

MomentSequence empirical_m2(std::span<const int> symbols, int n_symbols,
                            int tau_bar) {
  const int d = static_cast<int>(symbols.size());
  if (tau_bar < 0 || d <= tau_bar) {
    throw std::invalid_argument(
        "empirical_m2: need more observations than lags");
  }
  for (const int s : symbols) {
    if (s < 0 || s >= n_symbols) {
      std::ostringstream msg;
      msg << "empirical_m2: symbol " << s << " outside [0, " << n_symbols
          << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  MomentSequence out;
  out.lags.reserve(tau_bar + 1);
  for (int tau = 0; tau <= tau_bar; ++tau) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_symbols, n_symbols);
    const double scale = 1.0 / static_cast<double>(d - tau);
    if (tau == 0) {
      for (int k = 0; k < d; ++k) m(symbols[k], symbols[k]) += scale;
    } else {
      for (int k = 0; k + tau < d; ++k) {
        m(symbols[k], symbols[k + tau]) += scale;
      }
    }
    out.lags.push_back(std::move(m));
  }
  return out;
}

Eigen::MatrixXd analytic_h(const Eigen::Ref<const Eigen::MatrixXd>& p,
                           const Eigen::Ref<const Eigen::VectorXd>& pi_inf,
                           const Eigen::Ref<const Eigen::MatrixXd>& k,
                           int tau) {
  const Eigen::Index n = p.rows();
  if (p.cols() != n || pi_inf.size() != n || k.rows() != n || k.cols() != n) {
    throw std::invalid_argument("analytic_h: dimension mismatch");
  }
  if (tau < 0) throw std::invalid_argument("analytic_h: negative lag");
  if (tau == 0) return Eigen::MatrixXd((k * pi_inf).asDiagonal());
  return k.transpose() * pi_inf.asDiagonal() * matrix_power(p, tau) * k;
}

MomentSequence empirical_h(std::span<const ManifoldPoint> observations,
                           std::span<const RiemannianGaussian> components,
                           int tau_bar) {
  const int d = static_cast<int>(observations.size());
  if (tau_bar < 0 || d <= tau_bar) {
    throw std::invalid_argument(
        "empirical_h: need more observations than lags");
  }
  const Eigen::MatrixXd table = density_table(observations, components);
  const int n = static_cast<int>(components.size());

  MomentSequence out;
  out.lags.reserve(tau_bar + 1);
  out.lags.push_back(
      Eigen::MatrixXd((table.colwise().mean()).asDiagonal()));
  for (int tau = 1; tau <= tau_bar; ++tau) {
    const int pairs = d - tau;
    Eigen::MatrixXd h(n, n);
    h.noalias() = table.topRows(pairs).transpose() *
                  table.bottomRows(pairs) /
                  static_cast<double>(pairs);
    out.lags.push_back(std::move(h));
  }
  return out;
}

MomentSequence combine_moments(std::span<const MomentSequence> seqs,
                               std::span<const int> chain_lengths) {
  if (seqs.empty() || seqs.size() != chain_lengths.size()) {
    throw std::invalid_argument("combine_moments: chain count mismatch");
  }
  const int tau_bar = seqs[0].tau_bar();
  const int n = seqs[0].dim();
  MomentSequence out;
  for (int tau = 0; tau <= tau_bar; ++tau) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    double total = 0.0;
    for (std::size_t c = 0; c < seqs.size(); ++c) {
      if (seqs[c].tau_bar() != tau_bar || seqs[c].dim() != n) {
        throw std::invalid_argument("combine_moments: ragged sequences");
      }
      const double w = static_cast<double>(chain_lengths[c] - tau);
      if (w <= 0.0) {
        throw std::invalid_argument(
            "combine_moments: chain shorter than the lag");
      }
      acc += w * seqs[c].lags[tau];
      total += w;
    }
    out.lags.push_back(acc / total);
  }
  return out;
}

EffectiveObservationMatrix effective_obs_matrix(
    std::span<const RiemannianGaussian> components, long mc_samples,
    const Rng& rng, int threads) {
  const int n = static_cast<int>(components.size());
  if (n == 0) {
    throw std::invalid_argument("effective_obs_matrix: no components");
  }
  if (mc_samples < 1000) {
    throw std::invalid_argument(
        "effective_obs_matrix: need at least 1000 samples per row");
  }
  const ManifoldKind kind = components[0].mean.kind();
  for (const auto& g : components) {
    if (g.mean.kind() != kind) {
      throw std::invalid_argument(
          "effective_obs_matrix: mixed manifold kinds");
    }
  }

  EffectiveObservationMatrix out;
  out.mc_samples = mc_samples;
  out.raw_k.resize(n, n);
  Eigen::MatrixXd raw_se(n, n);

  parallel_for(n, threads, [&](int i) {
    Rng row_rng = rng.split(static_cast<std::uint64_t>(i));
    const GaussianSampler sampler(components[i]);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
    for (long s = 0; s < mc_samples; ++s) {
      const auto y = sampler.draw(row_rng);
      for (int j = 0; j < n; ++j) {
        const double v = density(components[j], y);
        sum[j] += v;
        sum_sq[j] += v * v;
      }
    }
    const double m = static_cast<double>(mc_samples);
    for (int j = 0; j < n; ++j) {
      const double mean = sum[j] / m;
      const double var = std::max(0.0, sum_sq[j] / m - mean * mean);
      out.raw_k(i, j) = mean;
      raw_se(i, j) = std::sqrt(var / m);
    }
  });

  out.K = 0.5 * (out.raw_k + out.raw_k.transpose());
  out.std_err.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.std_err(i, j) = 0.5 * std::hypot(raw_se(i, j), raw_se(j, i));
    }
  }
  return out;
}

}  // namespace geomhmm
