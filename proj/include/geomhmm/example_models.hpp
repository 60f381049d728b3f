// geomhmm/example_models.hpp

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

#include "geomhmm/hmm.hpp"

namespace geomhmm::examples {

/// Benchmark model 1: three states observed on the hyperbolic disk, one
/// tight component at the origin and two wider ones near the boundary.
/// The chain starts deterministically in state 1.
inline HmmModel example1_model() {
  HmmModel m;
  m.P.resize(3, 3);
  m.P << 0.4, 0.3, 0.3,
         0.2, 0.6, 0.2,
         0.1, 0.1, 0.8;
  m.pi0.resize(3);
  m.pi0 << 1.0, 0.0, 0.0;
  m.components = {
      RiemannianGaussian(ManifoldPoint::disk(0.0, 0.0), 0.1),
      RiemannianGaussian(ManifoldPoint::disk(0.29, 0.82), 0.4),
      RiemannianGaussian(ManifoldPoint::disk(-0.29, 0.82), 0.4),
  };
  m.validate();
  return m;
}

/// Benchmark model 2: five states observed as 2x2 SPD matrices, all with
/// dispersion 0.1. The chain starts from its stationary distribution.
inline HmmModel example2_model() {
  HmmModel m;
  m.P.resize(5, 5);
  m.P << 0.3, 0.1, 0.2, 0.1, 0.3,
         0.1, 0.4, 0.2, 0.2, 0.1,
         0.2, 0.2, 0.3, 0.1, 0.2,
         0.1, 0.1, 0.2, 0.5, 0.1,
         0.4, 0.1, 0.1, 0.1, 0.3;
  m.components = {
      RiemannianGaussian(ManifoldPoint::spd2(1.646, 0.056, 2.379), 0.1),
      RiemannianGaussian(ManifoldPoint::spd2(2.294, 0.744, 1.415), 0.1),
      RiemannianGaussian(ManifoldPoint::spd2(2.631, -0.127, 1.277), 0.1),
      RiemannianGaussian(ManifoldPoint::spd2(0.674, 0.454, 2.056), 0.1),
      RiemannianGaussian(ManifoldPoint::spd2(1.829, -0.919, 1.602), 0.1),
  };
  m.pi0 = stationary(m.P);
  m.validate();
  return m;
}

}  // namespace geomhmm::examples
