// geomhmm/test_io.cpp

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

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "geomhmm/errors.hpp"
#include "geomhmm/example_models.hpp"
#include "geomhmm/io.hpp"
#include "geomhmm/learner.hpp"
#include "geomhmm/rng.hpp"
#include "support/oracles.hpp"

using namespace geomhmm;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "geomhmm_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("points round-trip exactly through their string form") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = oracles::random_disk_point(rng);
    const auto d2 =
        point_from_string(ManifoldKind::kPoincareDisk, point_to_string(d));
    CHECK(d2.coords() == d.coords());

    const auto s = oracles::random_spd_point(rng);
    const auto s2 =
        point_from_string(ManifoldKind::kSpd2, point_to_string(s));
    CHECK(s2.coords() == s.coords());
  }
  CHECK_THROWS_AS(point_from_string(ManifoldKind::kSpd2, "1.0,0.0"),
                  DataError);
  CHECK_THROWS_AS(point_from_string(ManifoldKind::kPoincareDisk, "2.0,0.0"),
                  DataError);
  CHECK_THROWS_AS(point_from_string(ManifoldKind::kPoincareDisk, "a,b"),
                  DataError);
}

TEST_CASE("model files round-trip exactly") {
  const auto dir = test_dir();
  for (const auto& model :
       {examples::example1_model(), examples::example2_model()}) {
    const std::string path = (dir / "model.json").string();
    save_model(model, path);
    const HmmModel loaded = load_model(path);
    CHECK((loaded.P - model.P).norm() == 0.0);
    CHECK((loaded.pi0 - model.pi0).norm() == 0.0);
    REQUIRE(loaded.n_states() == model.n_states());
    for (int i = 0; i < model.n_states(); ++i) {
      CHECK(loaded.components[i].mean.coords() ==
            model.components[i].mean.coords());
      CHECK(loaded.components[i].sigma == model.components[i].sigma);
    }
  }
}

TEST_CASE("malformed model files name the offending field") {
  const auto dir = test_dir();
  const std::string path = (dir / "bad_model.json").string();

  std::ofstream(path) << R"({"manifold": "poincare_disk", "pi0": [1, 0]})";
  CHECK_THROWS_WITH_AS(load_model(path),
                       doctest::Contains("missing field 'P'"), DataError);

  std::ofstream(path) << R"({"manifold": "spd9", "P": [[1]], "pi0": [1],
                             "components": []})";
  CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("spd9"),
                       DataError);

  std::ofstream(path) << R"({"manifold": "poincare_disk",
                             "P": [[0.5, 0.6], [0.5, 0.5]],
                             "pi0": [1, 0],
                             "components": [
                               {"mean": "0,0", "sigma": 0.1},
                               {"mean": "0.5,0", "sigma": 0.1}]})";
  CHECK_THROWS_WITH_AS(load_model(path),
                       doctest::Contains("not row-stochastic"), DataError);

  std::ofstream(path) << "{ not json";
  CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains(":1:"),
                       DataError);
}

TEST_CASE("observation files round-trip, with and without states") {
  const auto dir = test_dir();
  const auto model = examples::example2_model();
  Rng rng(77);
  const auto traj = simulate(model, 50, 0, rng);

  ObservationFile file;
  file.kind = model.manifold();
  file.observations = traj.observations;
  file.states = traj.states;
  file.seed = 77;
  const std::string path = (dir / "obs.txt").string();
  save_observations(file, path);
  const auto loaded = load_observations(path);
  CHECK(loaded.kind == file.kind);
  CHECK(loaded.seed == 77);
  REQUIRE(loaded.has_states());
  CHECK(loaded.states == file.states);
  REQUIRE(loaded.observations.size() == file.observations.size());
  for (std::size_t k = 0; k < file.observations.size(); ++k) {
    CHECK(loaded.observations[k].coords() == file.observations[k].coords());
  }

  file.states.clear();
  save_observations(file, path);
  CHECK_FALSE(load_observations(path).has_states());
}

TEST_CASE("observation parse errors carry line numbers") {
  const auto dir = test_dir();
  const std::string path = (dir / "bad_obs.txt").string();
  std::ofstream(path) << "# manifold: poincare_disk\n"
                      << "# with_states: 0\n"
                      << "0.1,0.2\n"
                      << "0.3\n";
  CHECK_THROWS_WITH_AS(load_observations(path), doctest::Contains(":4:"),
                       DataError);

  std::ofstream(path) << "0.1,0.2\n";
  CHECK_THROWS_WITH_AS(load_observations(path),
                       doctest::Contains("manifold"), DataError);
}

TEST_CASE("reports round-trip through JSON") {
  const auto dir = test_dir();
  const auto model = examples::example1_model();
  Rng rng(5);
  const auto traj = simulate(model, 1500, 0, rng);
  const std::vector<Chain> chains{traj.observations};
  LearnConfig cfg;
  cfg.tau_bar = 2;
  cfg.mc_samples = 5000;
  cfg.seed = 12;
  LearnReport report = learn_known_sensor(chains, model.components, cfg);
  report.evaluation = evaluate(model, report);

  const std::string path = (dir / "report.json").string();
  save_report(report, path);
  const LearnReport loaded = load_report(path);

  CHECK(loaded.n_states == report.n_states);
  CHECK(loaded.tau_bar == report.tau_bar);
  CHECK(loaded.seed == report.seed);
  CHECK(loaded.known_sensor == report.known_sensor);
  CHECK((loaded.P - report.P).norm() == 0.0);
  CHECK((loaded.pi_inf - report.pi_inf).norm() == 0.0);
  CHECK((loaded.K.K - report.K.K).norm() == 0.0);
  CHECK((loaded.K.std_err - report.K.std_err).norm() == 0.0);
  CHECK(loaded.K.mc_samples == report.K.mc_samples);
  REQUIRE(loaded.moments.lags.size() == report.moments.lags.size());
  for (std::size_t t = 0; t < report.moments.lags.size(); ++t) {
    CHECK((loaded.moments.lags[t] - report.moments.lags[t]).norm() == 0.0);
  }
  REQUIRE(loaded.solver_info.size() == report.solver_info.size());
  CHECK(loaded.solver_info[0].stage == "stationary");
  REQUIRE(loaded.evaluation.has_value());
  CHECK(loaded.evaluation->alignment == report.evaluation->alignment);
  CHECK(loaded.evaluation->metrics.transition_error ==
        report.evaluation->metrics.transition_error);

  // corrupting the file yields a parse error with a line number
  std::ofstream(path, std::ios::app) << "garbage";
  CHECK_THROWS_WITH_AS(load_report(path), doctest::Contains("report.json:"),
                       DataError);
}
