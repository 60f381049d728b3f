// geomhmm/mixture.cpp

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

#include "geomhmm/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geomhmm/errors.hpp"

namespace geomhmm {

namespace {

struct EStep {
  Eigen::MatrixXd resp;  // observations x components
  double loglik = 0.0;
};

EStep e_step(std::span<const ManifoldPoint> obs, const MixtureModel& model) {
  const int d = static_cast<int>(obs.size());
  const int n = model.n_components();
  EStep out;
  out.resp.resize(d, n);
  Eigen::VectorXd offset(n), inv_two_s2(n);
  for (int j = 0; j < n; ++j) {
    const auto& g = model.components[j];
    offset[j] = std::log(std::max(model.weights[j], 1e-300)) -
                log_normalization(g.mean.kind(), g.sigma);
    inv_two_s2[j] = 1.0 / (2.0 * g.sigma * g.sigma);
  }
  Eigen::VectorXd l(n);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < n; ++j) {
      const double dd = dist(model.components[j].mean, obs[k]);
      l[j] = offset[j] - dd * dd * inv_two_s2[j];
    }
    const double m = l.maxCoeff();
    const Eigen::VectorXd r = (l.array() - m).exp();
    const double s = r.sum();
    out.resp.row(k) = (r / s).transpose();
    out.loglik += m + std::log(s);
  }
  return out;
}

// Weighted M-step for one component, warm-started at the previous mean.
RiemannianGaussian m_step_component(std::span<const ManifoldPoint> obs,
                                    const Eigen::VectorXd& resp_col,
                                    const RiemannianGaussian& previous,
                                    double sigma_floor, int index) {
  KarcherOptions opts;
  opts.init = previous.mean;
  const ManifoldPoint mean = karcher_mean(obs, resp_col, opts);
  double msd = 0.0;
  for (int k = 0; k < static_cast<int>(obs.size()); ++k) {
    if (resp_col[k] == 0.0) continue;
    const double dd = dist(mean, obs[k]);
    msd += resp_col[k] * dd * dd;
  }
  msd /= resp_col.sum();
  const SigmaFit sf = solve_sigma(mean.kind(), msd);
  if (sf.degenerate && sf.sigma == kSigmaLo) {
    std::ostringstream msg;
    msg << "component " << index << " collapsed onto a single point";
    throw ComponentCollapse(index, msg.str());
  }
  return RiemannianGaussian(mean, std::max(sf.sigma, sigma_floor));
}

MixtureModel seed_kmeanspp(std::span<const ManifoldPoint> obs,
                           int n_components, double sigma_floor, Rng& rng) {
  const int d = static_cast<int>(obs.size());
  std::vector<int> centers;
  centers.push_back(static_cast<int>(rng.uniform() * d));
  Eigen::VectorXd min_sq = Eigen::VectorXd::Constant(d, 1.0);
  for (int k = 0; k < d; ++k) {
    const double dd = dist(obs[centers[0]], obs[k]);
    min_sq[k] = dd * dd;
  }
  while (static_cast<int>(centers.size()) < n_components) {
    const int next = rng.categorical(min_sq);
    centers.push_back(next);
    for (int k = 0; k < d; ++k) {
      const double dd = dist(obs[next], obs[k]);
      min_sq[k] = std::min(min_sq[k], dd * dd);
    }
  }

  // hard assignment to the nearest center, then a per-cluster fit
  std::vector<std::vector<ManifoldPoint>> clusters(n_components);
  for (int k = 0; k < d; ++k) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_components; ++j) {
      const double dd = dist(obs[centers[j]], obs[k]);
      if (dd < best_d) {
        best_d = dd;
        best = j;
      }
    }
    clusters[best].push_back(obs[k]);
  }

  MixtureModel model;
  model.weights.resize(n_components);
  for (int j = 0; j < n_components; ++j) {
    model.weights[j] =
        static_cast<double>(clusters[j].size()) / static_cast<double>(d);
    if (clusters[j].empty()) {
      // keep the component alive at its seeding point
      clusters[j].push_back(obs[centers[j]]);
    }
    KarcherOptions opts;
    opts.init = obs[centers[j]];
    const ManifoldPoint mean = karcher_mean(
        clusters[j],
        Eigen::VectorXd::Ones(static_cast<int>(clusters[j].size())), opts);
    double msd = 0.0;
    for (const auto& y : clusters[j]) {
      const double dd = dist(mean, y);
      msd += dd * dd;
    }
    msd /= static_cast<double>(clusters[j].size());
    const SigmaFit sf = solve_sigma(mean.kind(), msd);
    model.components.emplace_back(
        mean, std::clamp(sf.sigma, std::max(sigma_floor, 0.01), kSigmaHi));
  }
  // uniform mixing proportions at the start
  model.weights.setConstant(1.0 / static_cast<double>(n_components));
  return model;
}

struct EmRun {
  MixtureFit fit;
  bool collapsed = false;
  int collapsed_component = -1;
};

EmRun run_em(std::span<const ManifoldPoint> obs, MixtureModel model,
             const MixtureConfig& cfg) {
  const int d = static_cast<int>(obs.size());
  const int n = model.n_components();
  EmRun run;
  double prev_ll = -std::numeric_limits<double>::infinity();
  try {
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      const EStep e = e_step(obs, model);
      run.fit.loglik_history.push_back(e.loglik);
      run.fit.iterations = iter + 1;
      if (std::isfinite(prev_ll) &&
          e.loglik - prev_ll <= cfg.rel_tol * std::abs(e.loglik)) {
        run.fit.converged = true;
        run.fit.loglik = e.loglik;
        break;
      }
      prev_ll = e.loglik;

      for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd col = e.resp.col(j);
        const double mass = col.sum();
        model.weights[j] = mass / static_cast<double>(d);
        if (model.weights[j] < cfg.weight_floor) {
          std::ostringstream msg;
          msg << "component " << j << " weight fell to " << model.weights[j];
          throw ComponentCollapse(j, msg.str());
        }
        model.components[j] = m_step_component(
            obs, col, model.components[j], cfg.sigma_floor, j);
      }
      run.fit.loglik = e.loglik;
    }
  } catch (const ComponentCollapse& c) {
    run.collapsed = true;
    run.collapsed_component = c.component();
    return run;
  }
  run.fit.model = std::move(model);
  return run;
}

}  // namespace

void MixtureModel::validate() const {
  const int n = n_components();
  if (n == 0) throw std::invalid_argument("mixture has no components");
  if (weights.size() != n || weights.minCoeff() < 0.0 ||
      std::abs(weights.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights are not a distribution");
  }
  for (const auto& g : components) {
    if (g.mean.kind() != manifold()) {
      throw std::invalid_argument("mixture components on different manifolds");
    }
  }
}

MixtureFit fit_mixture(std::span<const ManifoldPoint> observations,
                       int n_components, const MixtureConfig& cfg, Rng& rng) {
  const int d = static_cast<int>(observations.size());
  if (n_components < 1) {
    throw std::invalid_argument("fit_mixture: need at least one component");
  }
  if (d < n_components) {
    throw std::invalid_argument(
        "fit_mixture: fewer observations than components");
  }

  if (n_components == 1) {
    // closed form: single weighted MLE
    const auto mle = fit_mle(observations);
    MixtureFit fit;
    fit.model.weights = Eigen::VectorXd::Ones(1);
    fit.model.components = {RiemannianGaussian(
        mle.gaussian.mean, std::max(mle.gaussian.sigma, cfg.sigma_floor))};
    fit.loglik = log_likelihood(fit.model, observations);
    fit.loglik_history = {fit.loglik};
    fit.converged = true;
    fit.iterations = 1;
    return fit;
  }

  const int restarts = cfg.init ? 1 : std::max(1, cfg.n_restarts);
  std::optional<MixtureFit> best;
  int last_collapse = -1;
  bool any_ran_out = false;
  for (int r = 0; r < restarts; ++r) {
    Rng restart_rng = rng.split(static_cast<std::uint64_t>(r));
    MixtureModel start =
        cfg.init ? *cfg.init
                 : seed_kmeanspp(observations, n_components, cfg.sigma_floor,
                                 restart_rng);
    start.validate();
    if (start.n_components() != n_components) {
      throw std::invalid_argument("fit_mixture: init has the wrong size");
    }
    EmRun run = run_em(observations, std::move(start), cfg);
    if (run.collapsed) {
      last_collapse = run.collapsed_component;
      continue;
    }
    if (!run.fit.converged) {
      any_ran_out = true;
      continue;
    }
    if (!best || run.fit.loglik > best->loglik) {
      best = std::move(run.fit);
    }
  }
  if (!best) {
    if (any_ran_out) {
      std::ostringstream msg;
      msg << "EM did not converge in " << cfg.max_iters << " iterations";
      throw NumericalError(msg.str());
    }
    std::ostringstream msg;
    msg << "every EM restart lost a component (last: " << last_collapse
        << ")";
    throw ComponentCollapse(last_collapse, msg.str());
  }
  return *best;
}

Eigen::VectorXd responsibilities(const MixtureModel& model,
                                 const ManifoldPoint& y) {
  model.validate();
  const int n = model.n_components();
  Eigen::VectorXd l(n);
  for (int j = 0; j < n; ++j) {
    const auto& g = model.components[j];
    l[j] = std::log(std::max(model.weights[j], 1e-300)) + log_density(g, y);
  }
  const double m = l.maxCoeff();
  Eigen::VectorXd r = (l.array() - m).exp();
  r /= r.sum();
  return r;
}

double log_likelihood(const MixtureModel& model,
                      std::span<const ManifoldPoint> observations) {
  model.validate();
  return e_step(observations, model).loglik;
}

}  // namespace geomhmm
