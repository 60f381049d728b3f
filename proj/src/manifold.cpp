// geomhmm/manifold.cpp

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

#include "geomhmm/manifold.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "geomhmm/errors.hpp"

namespace geomhmm {

namespace {

constexpr double kValiditySlack = 1e-12;
constexpr double kDiskRadiusCap = 1.0 - 1e-12;

void require_same_kind(ManifoldKind a, ManifoldKind b) {
  if (a != b) {
    throw std::invalid_argument("manifold kind mismatch between operands");
  }
}

// Eigenpairs of a symmetric 2x2 matrix, closed form. Returns eigenvalues
// ascending and the rotation whose columns are the eigenvectors.
struct SymEigen2 {
  double l0, l1;
  Eigen::Matrix2d vectors;
};

SymEigen2 sym_eigen(const Eigen::Matrix2d& s) {
  const double a = s(0, 0), b = s(0, 1), c = s(1, 1);
  const double half_tr = 0.5 * (a + c);
  const double gap = std::hypot(0.5 * (a - c), b);
  SymEigen2 out;
  out.l0 = half_tr - gap;
  out.l1 = half_tr + gap;
  if (gap <= std::abs(half_tr) * 1e-18 || gap == 0.0) {
    out.vectors = Eigen::Matrix2d::Identity();
    return out;
  }
  // Eigenvector for l1 from the better-conditioned row.
  Eigen::Vector2d v1;
  if (std::abs(a - out.l1) > std::abs(c - out.l1)) {
    v1 << -b, a - out.l1;
  } else {
    v1 << c - out.l1, -b;
  }
  const double n = v1.norm();
  if (n == 0.0) {
    out.vectors = Eigen::Matrix2d::Identity();
    return out;
  }
  v1 /= n;
  out.vectors.col(1) = v1;
  // The orthogonal complement of the l1 eigenvector carries l0.
  out.vectors.col(0) = Eigen::Vector2d(-v1[1], v1[0]);
  return out;
}

Eigen::Matrix2d sym_apply(const Eigen::Matrix2d& s, double (*fn)(double)) {
  const SymEigen2 eig = sym_eigen(s);
  const Eigen::Vector2d d(fn(eig.l0), fn(eig.l1));
  Eigen::Matrix2d out =
      eig.vectors * d.asDiagonal() * eig.vectors.transpose();
  // exact symmetry
  const double off = 0.5 * (out(0, 1) + out(1, 0));
  out(0, 1) = off;
  out(1, 0) = off;
  return out;
}

Eigen::Vector3d sym_to_vec(const Eigen::Matrix2d& m) {
  return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

Eigen::Matrix2d vec_to_sym(const Eigen::Vector3d& v) {
  Eigen::Matrix2d m;
  m << v[0], v[1], v[1], v[2];
  return m;
}

// Generalized eigenvalues of the pencil (z, y) for SPD y, i.e. the
// eigenvalues of y^{-1} z, as roots of det(z - lambda y) = 0.
void pencil_eigenvalues(const Eigen::Matrix2d& y, const Eigen::Matrix2d& z,
                        double* l0, double* l1) {
  const double det_y = y.determinant();
  // tr(adj(y) z)
  const double m = y(1, 1) * z(0, 0) - 2.0 * y(0, 1) * z(0, 1) +
                   y(0, 0) * z(1, 1);
  const double det_z = z.determinant();
  // det_y * l^2 - m * l + det_z = 0
  double disc = m * m - 4.0 * det_y * det_z;
  disc = disc > 0.0 ? std::sqrt(disc) : 0.0;
  const double q = 0.5 * (m + (m >= 0.0 ? disc : -disc));
  if (q == 0.0) {
    *l0 = *l1 = m / (2.0 * det_y);
    return;
  }
  *l0 = q / det_y;
  *l1 = det_z / q;
}

double dist_disk(const std::complex<double>& y, const std::complex<double>& z) {
  const double num = std::norm(y - z);
  if (num == 0.0) return 0.0;
  const double den = (1.0 - std::norm(y)) * (1.0 - std::norm(z));
  const double t = 2.0 * num / den;
  // acosh(1 + t) without cancellation near t = 0
  return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

double dist_spd(const Eigen::Matrix2d& y, const Eigen::Matrix2d& z) {
  double l0, l1;
  pencil_eigenvalues(y, z, &l0, &l1);
  const double a = std::log(l0), b = std::log(l1);
  return std::hypot(a, b);
}

// Moebius translation sending y to the origin and its inverse.
std::complex<double> moebius_to_origin(const std::complex<double>& y,
                                       const std::complex<double>& z) {
  return (z - y) / (1.0 - std::conj(y) * z);
}

std::complex<double> moebius_from_origin(const std::complex<double>& y,
                                         const std::complex<double>& w) {
  return (w + y) / (1.0 + std::conj(y) * w);
}

}  // namespace

int manifold_dim(ManifoldKind kind) {
  return kind == ManifoldKind::kPoincareDisk ? 2 : 3;
}

std::string to_string(ManifoldKind kind) {
  return kind == ManifoldKind::kPoincareDisk ? "poincare_disk" : "spd2";
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
  if (name == "poincare_disk") return ManifoldKind::kPoincareDisk;
  if (name == "spd2") return ManifoldKind::kSpd2;
  throw std::invalid_argument("unknown manifold kind: " + name);
}

ManifoldPoint ManifoldPoint::disk(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw std::invalid_argument("disk point has non-finite coordinates");
  }
  const double r = std::hypot(re, im);
  if (r > kDiskRadiusCap) {
    if (r > 1.0 + kValiditySlack) {
      std::ostringstream msg;
      msg << "disk point lies outside the unit disk: |y| = " << r;
      throw std::invalid_argument(msg.str());
    }
    const double scale = kDiskRadiusCap / r;
    re *= scale;
    im *= scale;
  }
  return ManifoldPoint(ManifoldKind::kPoincareDisk, {re, im, 0.0});
}

ManifoldPoint ManifoldPoint::spd2(double a, double b, double c) {
  Eigen::Matrix2d m;
  m << a, b, b, c;
  return spd2(m);
}

ManifoldPoint ManifoldPoint::spd2(const Eigen::Matrix2d& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("spd2 point has non-finite entries");
  }
  Eigen::Matrix2d s = 0.5 * (m + m.transpose());
  const SymEigen2 eig = sym_eigen(s);
  const double scale = std::max(1.0, std::abs(eig.l1));
  if (eig.l0 <= 0.0) {
    if (eig.l0 < -kValiditySlack * scale) {
      std::ostringstream msg;
      msg << "spd2 point is not positive definite: min eigenvalue = "
          << eig.l0;
      throw std::invalid_argument(msg.str());
    }
    // Within slack: clamp the offending eigenvalue.
    const Eigen::Vector2d d(std::max(eig.l0, kValiditySlack * scale),
                            eig.l1);
    s = eig.vectors * d.asDiagonal() * eig.vectors.transpose();
  }
  return ManifoldPoint(ManifoldKind::kSpd2, sym_to_vec(s));
}

std::complex<double> ManifoldPoint::disk_coords() const {
  if (kind_ != ManifoldKind::kPoincareDisk) {
    throw std::invalid_argument("disk_coords() on a non-disk point");
  }
  return {coords_[0], coords_[1]};
}

Eigen::Matrix2d ManifoldPoint::spd_matrix() const {
  if (kind_ != ManifoldKind::kSpd2) {
    throw std::invalid_argument("spd_matrix() on a non-spd2 point");
  }
  return vec_to_sym(coords_);
}

Eigen::Matrix2d TangentVector::sym_matrix() const {
  if (kind() != ManifoldKind::kSpd2) {
    throw std::invalid_argument("sym_matrix() on a non-spd2 tangent");
  }
  return vec_to_sym(components);
}

double dist(const ManifoldPoint& y, const ManifoldPoint& z) {
  require_same_kind(y.kind(), z.kind());
  if (y.coords() == z.coords()) return 0.0;
  if (y.kind() == ManifoldKind::kPoincareDisk) {
    return dist_disk(y.disk_coords(), z.disk_coords());
  }
  return dist_spd(y.spd_matrix(), z.spd_matrix());
}

double norm(const TangentVector& v) {
  if (v.kind() == ManifoldKind::kPoincareDisk) {
    const double r2 = std::norm(v.base.disk_coords());
    return 2.0 * std::abs(v.disk_components()) / (1.0 - r2);
  }
  const Eigen::Matrix2d si = spd2::spd_inv_sqrt(v.base.spd_matrix());
  return (si * v.sym_matrix() * si).norm();
}

ManifoldPoint exp_map(const ManifoldPoint& base,
                      const Eigen::Vector3d& components) {
  if (base.kind() == ManifoldKind::kPoincareDisk) {
    const std::complex<double> y = base.disk_coords();
    const std::complex<double> v(components[0], components[1]);
    const std::complex<double> v0 = v / (1.0 - std::norm(y));
    const double rho = std::abs(v0);
    if (rho == 0.0) return base;
    const std::complex<double> w = std::tanh(rho) * (v0 / rho);
    return ManifoldPoint::disk(moebius_from_origin(y, w));
  }
  const Eigen::Matrix2d s = spd2::spd_sqrt(base.spd_matrix());
  const Eigen::Matrix2d si = spd2::spd_inv_sqrt(base.spd_matrix());
  const Eigen::Matrix2d inner = si * vec_to_sym(components) * si;
  const Eigen::Matrix2d e = spd2::sym_exp(0.5 * (inner + inner.transpose()));
  return ManifoldPoint::spd2(s * e * s);
}

ManifoldPoint exp_map(const TangentVector& v) {
  return exp_map(v.base, v.components);
}

TangentVector log_map(const ManifoldPoint& y, const ManifoldPoint& z) {
  require_same_kind(y.kind(), z.kind());
  if (y.kind() == ManifoldKind::kPoincareDisk) {
    const std::complex<double> yc = y.disk_coords();
    const std::complex<double> w = moebius_to_origin(yc, z.disk_coords());
    const double r = std::abs(w);
    std::complex<double> v(0.0, 0.0);
    if (r > 0.0) {
      v = std::atanh(r) * (w / r) * (1.0 - std::norm(yc));
    }
    return TangentVector{y, {v.real(), v.imag(), 0.0}};
  }
  const Eigen::Matrix2d s = spd2::spd_sqrt(y.spd_matrix());
  const Eigen::Matrix2d si = spd2::spd_inv_sqrt(y.spd_matrix());
  const Eigen::Matrix2d inner = si * z.spd_matrix() * si;
  const Eigen::Matrix2d l = spd2::sym_log(0.5 * (inner + inner.transpose()));
  return TangentVector{y, sym_to_vec(s * l * s)};
}

ManifoldPoint karcher_mean(std::span<const ManifoldPoint> points,
                           const Eigen::VectorXd& weights,
                           const KarcherOptions& opts) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("karcher_mean: empty input");
  if (weights.size() != n) {
    throw std::invalid_argument("karcher_mean: weight count mismatch");
  }
  const double total = weights.sum();
  if (!(total > 0.0) || weights.minCoeff() < 0.0) {
    throw std::invalid_argument(
        "karcher_mean: weights must be nonnegative with positive sum");
  }
  const Eigen::VectorXd w = weights / total;

  ManifoldPoint m = points[0];
  if (opts.init) {
    m = *opts.init;
  } else if (n > 1) {
    // Start at the input point with the smallest weighted sum of squared
    // distances. Pairwise search is capped by striding the candidate set
    // so initialization stays O(n) for large inputs; any start converges
    // on these manifolds, the medoid just shortens the descent.
    const int max_candidates = 256;
    const int stride = std::max(1, n / max_candidates);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; i += stride) {
      double cost = 0.0;
      for (int j = 0; j < n; ++j) {
        if (w[j] == 0.0) continue;
        const double d = dist(points[i], points[j]);
        cost += w[j] * d * d;
        if (cost >= best) break;
      }
      if (cost < best) {
        best = cost;
        m = points[i];
      }
    }
  }

  double grad_norm = 0.0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    Eigen::Vector3d step = Eigen::Vector3d::Zero();
    for (int j = 0; j < n; ++j) {
      if (w[j] == 0.0) continue;
      step += w[j] * log_map(m, points[j]).components;
    }
    grad_norm = norm(TangentVector{m, step});
    if (grad_norm <= opts.tol) return m;
    m = exp_map(m, step);
  }
  std::ostringstream msg;
  msg << "karcher_mean did not converge in " << opts.max_iters
      << " iterations; gradient norm = " << grad_norm;
  throw NumericalError(msg.str());
}

namespace spd2 {

Eigen::Matrix2d sym_exp(const Eigen::Matrix2d& s) {
  return sym_apply(s, +[](double x) { return std::exp(x); });
}

Eigen::Matrix2d sym_log(const Eigen::Matrix2d& s) {
  return sym_apply(s, +[](double x) { return std::log(x); });
}

Eigen::Matrix2d spd_sqrt(const Eigen::Matrix2d& s) {
  return sym_apply(s, +[](double x) { return std::sqrt(x); });
}

Eigen::Matrix2d spd_inv_sqrt(const Eigen::Matrix2d& s) {
  return sym_apply(s, +[](double x) { return 1.0 / std::sqrt(x); });
}

}  // namespace spd2

}  // namespace geomhmm
