// geomhmm/rgauss.cpp

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

#include "geomhmm/rgauss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geomhmm/errors.hpp"

namespace geomhmm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr int kRadialKnots = 1024;
constexpr double kMinAcceptRate = 0.1;

// Unnormalized radial integrand on the disk: exp(-r^2/2s^2) sinh(r),
// in overflow-safe exponential form.
double disk_radial_pdf(double sigma, double r) {
  const double q = r * r / (2.0 * sigma * sigma);
  return 0.5 * (std::exp(r - q) - std::exp(-r - q));
}

// Closed form of \int_0^r exp(-t^2/2s^2) sinh(t) dt.
double disk_radial_cdf(double sigma, double r) {
  const double a = (r - sigma * sigma) / (kSqrt2 * sigma);
  const double b = (r + sigma * sigma) / (kSqrt2 * sigma);
  const double scale =
      0.25 * std::sqrt(2.0 * kPi) * sigma * std::exp(0.5 * sigma * sigma);
  return scale *
         (std::erf(a) - std::erf(b) + 2.0 * std::erf(sigma / kSqrt2));
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be positive and finite");
  }
}

}  // namespace

RiemannianGaussian::RiemannianGaussian(const ManifoldPoint& mean_,
                                       double sigma_)
    : mean(mean_), sigma(sigma_) {
  check_sigma(sigma);
}

double log_normalization(ManifoldKind kind, double sigma) {
  check_sigma(sigma);
  if (kind == ManifoldKind::kPoincareDisk) {
    return std::log(2.0 * kPi) + 0.5 * std::log(0.5 * kPi) +
           std::log(sigma) + 0.5 * sigma * sigma +
           std::log(std::erf(sigma / kSqrt2));
  }
  return 1.5 * std::log(2.0 * kPi) + 2.0 * std::log(sigma) +
         0.25 * sigma * sigma + std::log(std::erf(0.5 * sigma));
}

double normalization(ManifoldKind kind, double sigma) {
  return std::exp(log_normalization(kind, sigma));
}

double log_density(const RiemannianGaussian& g, const ManifoldPoint& y) {
  const double d = dist(g.mean, y);
  return -d * d / (2.0 * g.sigma * g.sigma) -
         log_normalization(g.mean.kind(), g.sigma);
}

double density(const RiemannianGaussian& g, const ManifoldPoint& y) {
  return std::exp(log_density(g, y));
}

double expected_sq_dist(ManifoldKind kind, double sigma) {
  check_sigma(sigma);
  const double s2 = sigma * sigma;
  if (kind == ManifoldKind::kPoincareDisk) {
    const double erf_term = std::sqrt(2.0 / kPi) * std::exp(-0.5 * s2) /
                            std::erf(sigma / kSqrt2);
    return s2 + s2 * s2 + sigma * s2 * erf_term;
  }
  const double erf_term =
      std::exp(-0.25 * s2) / (std::sqrt(kPi) * std::erf(0.5 * sigma));
  return 2.0 * s2 + 0.5 * s2 * s2 + sigma * s2 * erf_term;
}

SigmaFit solve_sigma(ManifoldKind kind, double mean_sq_dist) {
  if (!(mean_sq_dist >= 0.0)) {
    throw std::invalid_argument("mean squared distance must be nonnegative");
  }
  if (mean_sq_dist <= expected_sq_dist(kind, kSigmaLo)) {
    return {kSigmaLo, true};
  }
  if (mean_sq_dist >= expected_sq_dist(kind, kSigmaHi)) {
    return {kSigmaHi, true};
  }
  double lo = kSigmaLo, hi = kSigmaHi;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (expected_sq_dist(kind, mid) < mean_sq_dist) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

GaussianSampler::GaussianSampler(const RiemannianGaussian& g) : g_(g) {
  if (g_.mean.kind() == ManifoldKind::kPoincareDisk) {
    const double sigma = g_.sigma;
    const double r_max = sigma * sigma + 12.0 * sigma;
    radial_grid_.resize(kRadialKnots);
    radial_cdf_.resize(kRadialKnots);
    double running = 0.0;
    for (int i = 0; i < kRadialKnots; ++i) {
      const double r = r_max * i / (kRadialKnots - 1);
      radial_grid_[i] = r;
      running = std::max(running, disk_radial_cdf(sigma, r));
      radial_cdf_[i] = running;
    }
    radial_total_ = radial_cdf_.back();
  } else {
    mean_sqrt_ = spd2::spd_sqrt(g_.mean.spd_matrix());
  }
}

double GaussianSampler::draw_radius_disk(Rng& rng) const {
  const double target = rng.uniform() * radial_total_;
  const auto it =
      std::lower_bound(radial_cdf_.begin(), radial_cdf_.end(), target);
  int hi = static_cast<int>(it - radial_cdf_.begin());
  hi = std::min(std::max(hi, 1), kRadialKnots - 1);
  const int lo = hi - 1;
  const double span = radial_cdf_[hi] - radial_cdf_[lo];
  double r = radial_grid_[lo];
  if (span > 0.0) {
    r += (target - radial_cdf_[lo]) / span *
         (radial_grid_[hi] - radial_grid_[lo]);
  }
  // Newton refinement against the exact CDF, clamped to the bracket.
  for (int k = 0; k < 3; ++k) {
    const double f = disk_radial_pdf(g_.sigma, r);
    if (f <= 0.0) break;
    r -= (disk_radial_cdf(g_.sigma, r) - target) / f;
    r = std::min(std::max(r, radial_grid_[lo]), radial_grid_[hi]);
  }
  return r;
}

double GaussianSampler::draw_eigengap_spd(Rng& rng) const {
  const double sigma = g_.sigma;
  for (long attempt = 0; attempt < 100000; ++attempt) {
    ++proposals_;
    double x;
    double accept;
    if (sigma <= 1.5) {
      // Rayleigh envelope from sinh(z) <= z exp(z^2/6).
      const double inv_s2 = 1.0 / (sigma * sigma) - 1.0 / 6.0;
      const double s_r = 1.0 / std::sqrt(inv_s2);
      x = s_r * std::sqrt(-2.0 * std::log(rng.uniform_pos()));
      const double z = x / kSqrt2;
      accept = z > 0.0 ? std::sinh(z) / (z * std::exp(z * z / 6.0)) : 1.0;
    } else {
      // Exponential envelope from sinh(z) <= exp(z)/2, which shifts the
      // Gaussian proposal by sigma^2/sqrt(2).
      x = sigma * sigma / kSqrt2 + sigma * rng.normal();
      if (x < 0.0) continue;
      accept = -std::expm1(-kSqrt2 * x);
    }
    if (rng.uniform() < accept) {
      ++accepts_;
      return x;
    }
    if (proposals_ >= 1000 &&
        static_cast<double>(accepts_) < kMinAcceptRate * proposals_) {
      std::ostringstream msg;
      msg << "spd2 sampler acceptance rate "
          << static_cast<double>(accepts_) / proposals_
          << " fell below " << kMinAcceptRate << " (sigma = " << sigma << ")";
      throw NumericalError(msg.str());
    }
  }
  throw NumericalError("spd2 sampler exhausted its proposal budget");
}

double GaussianSampler::acceptance_rate() const {
  return proposals_ == 0
             ? 1.0
             : static_cast<double>(accepts_) / static_cast<double>(proposals_);
}

ManifoldPoint GaussianSampler::draw(Rng& rng) const {
  if (g_.mean.kind() == ManifoldKind::kPoincareDisk) {
    const double r = draw_radius_disk(rng);
    const double theta = 2.0 * kPi * rng.uniform();
    const std::complex<double> w =
        std::tanh(0.5 * r) * std::complex<double>(std::cos(theta),
                                                  std::sin(theta));
    const std::complex<double> y = g_.mean.disk_coords();
    return ManifoldPoint::disk((w + y) / (1.0 + std::conj(y) * w));
  }
  // Polar sampling at the identity, then congruence to the mean. The
  // eigenvalue pair of the tangent has joint density proportional to
  // exp(-(r1^2 + r2^2)/2 sigma^2) sinh(|r1 - r2| / 2).
  const double s = g_.sigma * rng.normal();
  double u = draw_eigengap_spd(rng);
  if (rng.uniform() < 0.5) u = -u;
  const double r1 = (s + u) / kSqrt2;
  const double r2 = (s - u) / kSqrt2;
  const double phi = kPi * rng.uniform();
  const double c = std::cos(phi), sn = std::sin(phi);
  Eigen::Matrix2d v;
  v(0, 0) = c * c * r1 + sn * sn * r2;
  v(1, 1) = sn * sn * r1 + c * c * r2;
  v(0, 1) = v(1, 0) = c * sn * (r1 - r2);
  const Eigen::Matrix2d e = spd2::sym_exp(v);
  return ManifoldPoint::spd2(mean_sqrt_ * e * mean_sqrt_);
}

std::vector<ManifoldPoint> GaussianSampler::draw_many(int n, Rng& rng) const {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  std::vector<ManifoldPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(draw(rng));
  return out;
}

std::vector<ManifoldPoint> sample(const RiemannianGaussian& g, int n,
                                  Rng& rng) {
  return GaussianSampler(g).draw_many(n, rng);
}

MleFit fit_mle(std::span<const ManifoldPoint> points,
               const Eigen::VectorXd& weights) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("fit_mle: empty input");
  if (weights.size() != n) {
    throw std::invalid_argument("fit_mle: weight count mismatch");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) {
    throw std::invalid_argument("fit_mle: total weight must be positive");
  }
  const ManifoldPoint mean = karcher_mean(points, weights);
  double msd = 0.0;
  for (int i = 0; i < n; ++i) {
    if (weights[i] == 0.0) continue;
    const double d = dist(mean, points[i]);
    msd += weights[i] * d * d;
  }
  msd /= total;
  const SigmaFit sf = solve_sigma(points[0].kind(), msd);
  return {RiemannianGaussian(mean, sf.sigma), sf.degenerate};
}

MleFit fit_mle(std::span<const ManifoldPoint> points) {
  return fit_mle(points,
                 Eigen::VectorXd::Ones(static_cast<int>(points.size())));
}

}  // namespace geomhmm
