// geomhmm/manifold.hpp

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

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace geomhmm {

/// Supported observation manifolds: the open unit disk with the hyperbolic
/// metric of curvature -1, and 2x2 symmetric positive definite matrices
/// with the affine-invariant metric.
enum class ManifoldKind { kPoincareDisk, kSpd2 };

/// Tangent-space dimension: 2 for the disk, 3 for Spd2.
int manifold_dim(ManifoldKind kind);

std::string to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(const std::string& name);

/// A point on one of the supported manifolds, stored as up to three reals:
/// (re, im, 0) for the disk, (a, b, c) meaning [[a, b], [b, c]] for Spd2.
///
/// Construction validates the manifold constraints with slack 1e-12:
/// violations within the slack are projected back (|y| clamped below 1,
/// SPD eigenvalues clamped positive), larger violations throw
/// std::invalid_argument. Instances are immutable.
class ManifoldPoint {
 public:
  static ManifoldPoint disk(double re, double im);
  static ManifoldPoint disk(std::complex<double> y) {
    return disk(y.real(), y.imag());
  }
  static ManifoldPoint spd2(double a, double b, double c);
  /// Symmetrizes the input before validating.
  static ManifoldPoint spd2(const Eigen::Matrix2d& m);

  ManifoldKind kind() const { return kind_; }

  std::complex<double> disk_coords() const;
  Eigen::Matrix2d spd_matrix() const;

  /// Raw storage: (re, im, 0) or (a, b, c).
  const Eigen::Vector3d& coords() const { return coords_; }

  bool operator==(const ManifoldPoint& other) const {
    return kind_ == other.kind_ && coords_ == other.coords_;
  }

 private:
  ManifoldPoint(ManifoldKind kind, const Eigen::Vector3d& coords)
      : kind_(kind), coords_(coords) {}

  ManifoldKind kind_;
  Eigen::Vector3d coords_;
};

/// A tangent vector attached to a base point. Components are (re, im, 0)
/// for the disk and (a, b, c) for a symmetric 2x2 matrix [[a, b], [b, c]].
struct TangentVector {
  ManifoldPoint base;
  Eigen::Vector3d components;

  ManifoldKind kind() const { return base.kind(); }
  Eigen::Matrix2d sym_matrix() const;
  std::complex<double> disk_components() const {
    return {components[0], components[1]};
  }
};

/// Riemannian distance. Throws std::invalid_argument on kind mismatch.
double dist(const ManifoldPoint& y, const ManifoldPoint& z);

/// Riemannian norm of a tangent vector at its base point.
double norm(const TangentVector& v);

ManifoldPoint exp_map(const TangentVector& v);
ManifoldPoint exp_map(const ManifoldPoint& base, const Eigen::Vector3d& components);

TangentVector log_map(const ManifoldPoint& y, const ManifoldPoint& z);

struct KarcherOptions {
  int max_iters = 200;
  double tol = 1e-9;  // on the Riemannian norm of the mean gradient
  std::optional<ManifoldPoint> init;
};

/// Weighted Karcher mean by Riemannian gradient descent with unit step.
/// Weights must be nonnegative with a positive sum; they are normalized
/// internally. Throws std::invalid_argument on empty input and a
/// NumericalError reporting the residual gradient norm if the tolerance is
/// not reached within max_iters.
ManifoldPoint karcher_mean(std::span<const ManifoldPoint> points,
                           const Eigen::VectorXd& weights,
                           const KarcherOptions& opts = {});

namespace spd2 {

// Closed-form 2x2 symmetric eigendecomposition helpers. All inputs are
// assumed symmetric; spd_sqrt and spd_inv_sqrt additionally assume
// positive definiteness.
Eigen::Matrix2d sym_exp(const Eigen::Matrix2d& s);
Eigen::Matrix2d sym_log(const Eigen::Matrix2d& s);
Eigen::Matrix2d spd_sqrt(const Eigen::Matrix2d& s);
Eigen::Matrix2d spd_inv_sqrt(const Eigen::Matrix2d& s);

}  // namespace spd2

}  // namespace geomhmm
