// geomhmm/io.hpp

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

#include <cstdint>
#include <string>
#include <vector>

#include "geomhmm/hmm.hpp"
#include "geomhmm/learner.hpp"

namespace geomhmm {

/// Comma-separated decimal coordinates with 17 significant digits:
/// "re,im" on the disk, "a,b,c" for [[a, b], [b, c]] on spd2. Used by
/// every file format that stores points.
std::string point_to_string(const ManifoldPoint& p);
ManifoldPoint point_from_string(ManifoldKind kind, const std::string& text);

/// Model files are JSON: {manifold, P, pi0, components: [{mean, sigma}]}.
/// Loading validates the model and reports the offending field.
void save_model(const HmmModel& model, const std::string& path);
HmmModel load_model(const std::string& path);

/// Observation files are plain text: '#'-prefixed header lines
/// (manifold, length, seed, with_states), then one point per line with an
/// optional trailing 1-based state column.
struct ObservationFile {
  ManifoldKind kind = ManifoldKind::kPoincareDisk;
  std::vector<ManifoldPoint> observations;
  std::vector<int> states;  // 0-based in memory, 1-based on disk
  std::uint64_t seed = 0;

  bool has_states() const { return !states.empty(); }
};
void save_observations(const ObservationFile& file, const std::string& path);
ObservationFile load_observations(const std::string& path);

/// Reports are JSON and round-trip all estimates, moments, diagnostics,
/// and (when present) the evaluation block.
void save_report(const LearnReport& report, const std::string& path);
LearnReport load_report(const std::string& path);

}  // namespace geomhmm
