// geomhmm/rng.hpp

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

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace geomhmm {

/// Seeded random stream. All draws are produced from explicit bit
/// manipulation of the mt19937_64 output, so a (seed, call sequence) pair
/// reproduces exactly, independent of the standard library's distribution
/// implementations. Parallel code must use split() to derive one
/// independent child stream per work unit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed), gen_(mix(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (two uniforms per draw, no cache).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Index draw from unnormalized nonnegative weights, by inverse CDF.
  int categorical(const Eigen::Ref<const Eigen::VectorXd>& weights) {
    const double total = weights.sum();
    double u = uniform() * total;
    const int n = static_cast<int>(weights.size());
    for (int i = 0; i < n; ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return n - 1;
  }

  /// Independent child stream for work unit `stream`. Children derived
  /// from the same root with distinct stream ids never share state.
  Rng split(std::uint64_t stream) const {
    return Rng(mix(root_ ^ mix(stream + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t root_seed() const { return root_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t root_;
  std::mt19937_64 gen_;
};

}  // namespace geomhmm
