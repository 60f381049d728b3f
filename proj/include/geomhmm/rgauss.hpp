// geomhmm/rgauss.hpp

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

#include "geomhmm/manifold.hpp"
#include "geomhmm/rng.hpp"

namespace geomhmm {

/// Isotropic Gaussian on a manifold: density proportional to
/// exp(-d^2(y, mean) / (2 sigma^2)) with respect to the Riemannian volume.
struct RiemannianGaussian {
  ManifoldPoint mean;
  double sigma = 0.0;

  RiemannianGaussian(const ManifoldPoint& mean_, double sigma_);
};

/// Normalization factor Z(sigma), closed form on both manifolds:
///   disk: 2 pi sqrt(pi/2) sigma exp(sigma^2/2) erf(sigma/sqrt(2))
///   spd2: (2 pi)^{3/2} sigma^2 exp(sigma^2/4) erf(sigma/2)
/// Throws std::invalid_argument for sigma <= 0.
double normalization(ManifoldKind kind, double sigma);
double log_normalization(ManifoldKind kind, double sigma);

double density(const RiemannianGaussian& g, const ManifoldPoint& y);
double log_density(const RiemannianGaussian& g, const ManifoldPoint& y);

/// E[d^2(y, mean)] under the Gaussian: sigma^3 d/dsigma log Z(sigma).
double expected_sq_dist(ManifoldKind kind, double sigma);

/// Bracketed dispersion range for MLE fitting.
constexpr double kSigmaLo = 1e-4;
constexpr double kSigmaHi = 10.0;

struct SigmaFit {
  double sigma = 0.0;
  /// Set when the moment equation had no root inside [kSigmaLo, kSigmaHi]
  /// and sigma was pinned at the nearer bracket end.
  bool degenerate = false;
};

/// Inverts expected_sq_dist by bisection on [kSigmaLo, kSigmaHi].
SigmaFit solve_sigma(ManifoldKind kind, double mean_sq_dist);

/// Exact i.i.d. sampler. Radial draws use an inverse-CDF lookup table on
/// the disk and envelope rejection on spd2; draws are deterministic for a
/// fixed rng state. Reusable across calls for a fixed distribution.
class GaussianSampler {
 public:
  explicit GaussianSampler(const RiemannianGaussian& g);

  ManifoldPoint draw(Rng& rng) const;
  std::vector<ManifoldPoint> draw_many(int n, Rng& rng) const;

  /// Rejection acceptance rate observed so far (spd2 only; 1 for disk).
  double acceptance_rate() const;

 private:
  RiemannianGaussian g_;
  Eigen::Matrix2d mean_sqrt_;          // spd2 translation factor
  std::vector<double> radial_grid_;    // disk inverse-CDF support
  std::vector<double> radial_cdf_;
  double radial_total_ = 0.0;
  mutable long proposals_ = 0;
  mutable long accepts_ = 0;

  double draw_radius_disk(Rng& rng) const;
  double draw_eigengap_spd(Rng& rng) const;
};

std::vector<ManifoldPoint> sample(const RiemannianGaussian& g, int n,
                                  Rng& rng);

struct MleFit {
  RiemannianGaussian gaussian;
  bool degenerate = false;
};

/// Weighted maximum-likelihood fit: mean is the weighted Karcher mean,
/// sigma inverts the second-moment identity. Throws std::invalid_argument
/// on empty input or nonpositive total weight.
MleFit fit_mle(std::span<const ManifoldPoint> points,
               const Eigen::VectorXd& weights);
MleFit fit_mle(std::span<const ManifoldPoint> points);

}  // namespace geomhmm
