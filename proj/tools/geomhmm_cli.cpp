// geomhmm/geomhmm_cli.cpp

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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geomhmm/errors.hpp"
#include "geomhmm/example_models.hpp"
#include "geomhmm/io.hpp"
#include "geomhmm/learner.hpp"
#include "geomhmm/parallel.hpp"

namespace fs = std::filesystem;
using namespace geomhmm;

namespace {

// exit codes: 0 ok, 1 usage, 2 data, 3 numerical
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string chain_path(const std::string& output, int chain, int n_chains) {
  if (n_chains == 1) return output;
  const fs::path p(output);
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "_%02d", chain);
  return (p.parent_path() / (stem + suffix + ext)).string();
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%8.4f", v[i]);
    out << (i ? " " : "") << buf;
  }
  return out.str();
}

void print_metrics(std::ostream& out, const Metrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "mean_error:                %.6f\n"
                "dispersion_error:          %.6f\n"
                "transition_error:          %.6f\n"
                "relative_transition_error: %.6f\n"
                "mean_abs_entry_error:      %.6f\n",
                m.mean_error, m.dispersion_error, m.transition_error,
                m.relative_transition_error, m.mean_abs_entry_error);
  out << buf;
}

struct SimulateArgs {
  std::string model_path;
  std::string output;
  int length = 0;
  int chains = 1;
  int burn_in = 0;
  std::uint64_t seed = 0;
  bool with_states = false;
};

int cmd_simulate(const SimulateArgs& args) {
  if (args.length < 1) throw UsageError("--length must be at least 1");
  if (args.chains < 1) throw UsageError("--chains must be at least 1");
  if (args.burn_in < 0) throw UsageError("--burn-in must be nonnegative");
  const HmmModel model = load_model(args.model_path);
  const Rng root(args.seed);
  for (int c = 0; c < args.chains; ++c) {
    Rng rng = root.split(static_cast<std::uint64_t>(c));
    const Trajectory traj =
        simulate(model, args.length, args.burn_in, rng);
    ObservationFile file;
    file.kind = model.manifold();
    file.observations = traj.observations;
    if (args.with_states) file.states = traj.states;
    file.seed = args.seed;
    const std::string path = chain_path(args.output, c, args.chains);
    save_observations(file, path);
    std::cout << "wrote " << path << " (" << args.length
              << " observations)\n";
  }
  return 0;
}

struct LearnArgs {
  std::vector<std::string> obs_paths;
  std::string sensor_path;
  std::string output;
  int states = 0;
  int lags = 1;
  int burn_in = 0;
  long mc_samples = 100000;
  std::uint64_t seed = 0;
  int threads = 0;
  int restarts = 5;
};

LearnConfig make_config(const LearnArgs& args) {
  LearnConfig cfg;
  cfg.tau_bar = args.lags;
  cfg.burn_in = args.burn_in;
  cfg.mc_samples = args.mc_samples;
  cfg.seed = args.seed;
  cfg.threads = args.threads > 0 ? args.threads : default_thread_count();
  cfg.mixture.n_restarts = args.restarts;
  return cfg;
}

int cmd_learn(const LearnArgs& args) {
  if (args.lags < 1) throw UsageError("--lags must be at least 1");
  if (args.burn_in < 0) throw UsageError("--burn-in must be nonnegative");
  if (args.mc_samples < 1000) {
    throw UsageError("--mc-samples must be at least 1000");
  }
  if (args.sensor_path.empty() && args.states < 1) {
    throw UsageError("either --sensor or --states is required");
  }

  std::vector<Chain> chains;
  ManifoldKind kind = ManifoldKind::kPoincareDisk;
  for (std::size_t i = 0; i < args.obs_paths.size(); ++i) {
    ObservationFile file = load_observations(args.obs_paths[i]);
    if (i == 0) {
      kind = file.kind;
    } else if (file.kind != kind) {
      throw DataError("observation files mix manifolds: " +
                      args.obs_paths[i]);
    }
    if (static_cast<int>(file.observations.size()) <=
        args.lags + args.burn_in) {
      throw UsageError(
          "--lags plus --burn-in must be smaller than every chain length");
    }
    chains.push_back(std::move(file.observations));
  }

  const LearnConfig cfg = make_config(args);
  LearnReport report;
  if (!args.sensor_path.empty()) {
    const HmmModel sensor = load_model(args.sensor_path);
    if (sensor.manifold() != kind) {
      throw DataError("sensor model manifold does not match the data");
    }
    report = learn_known_sensor(chains, sensor.components, cfg);
  } else {
    report = learn_full(chains, args.states, cfg);
  }
  save_report(report, args.output);

  std::cout << "estimated transition matrix:\n" << report.P << "\n";
  std::cout << "pi_inf: " << format_vector(report.pi_inf) << "\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "K condition: %.3g | stage1: %.2f s | stage2: %.2f s\n",
                report.k_condition, report.stage1_seconds,
                report.stage2_seconds);
  std::cout << buf << "wrote " << args.output << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string report_path;
  std::string truth_path;
};

int cmd_evaluate(const EvaluateArgs& args) {
  LearnReport report = load_report(args.report_path);
  const HmmModel truth = load_model(args.truth_path);
  if (truth.n_states() != report.n_states) {
    throw DataError("state counts differ between the report and the model");
  }
  if (truth.manifold() != report.manifold()) {
    throw DataError("manifolds differ between the report and the model");
  }
  report.evaluation = evaluate(truth, report);
  print_metrics(std::cout, report.evaluation->metrics);
  save_report(report, args.report_path);
  std::cout << "evaluation appended to " << args.report_path << "\n";
  return 0;
}

struct ReproduceArgs {
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  long mc_samples = 100000;
  int threads = 0;
  int restarts = 5;
};

// Derived report for a shorter lag horizon, reusing the stage-1 fit, the
// Gram matrix, and the already-estimated moments.
LearnReport rematch(const LearnReport& base, int tau_bar,
                    const SolverConfig& solver) {
  LearnReport out = base;
  out.tau_bar = tau_bar;
  out.moments.lags.assign(base.moments.lags.begin(),
                          base.moments.lags.begin() + tau_bar + 1);
  MomentMatch match = match_moments(out.moments, out.K.K, solver);
  out.pi_inf = std::move(match.pi);
  out.P = std::move(match.p);
  out.a_seq = std::move(match.a_seq);
  out.solver_info = std::move(match.info);
  out.evaluation.reset();
  return out;
}

int cmd_reproduce_example1(const ReproduceArgs& args) {
  const fs::path dir(args.output_dir);
  fs::create_directories(dir);
  const HmmModel model = examples::example1_model();
  save_model(model, (dir / "model.json").string());

  const int n_chains = 20;
  const int length = 10000;
  std::vector<Chain> chains;
  const Rng root(args.seed);
  for (int c = 0; c < n_chains; ++c) {
    Rng rng = root.split(static_cast<std::uint64_t>(c));
    Trajectory traj = simulate(model, length, 0, rng);
    ObservationFile file;
    file.kind = model.manifold();
    file.observations = traj.observations;
    file.seed = args.seed;
    char name[32];
    std::snprintf(name, sizeof(name), "chain_%02d.obs", c);
    save_observations(file, (dir / name).string());
    chains.push_back(std::move(file.observations));
  }

  LearnConfig cfg;
  cfg.tau_bar = 3;
  cfg.mc_samples = args.mc_samples;
  cfg.seed = args.seed;
  cfg.threads = args.threads > 0 ? args.threads : default_thread_count();
  cfg.mixture.n_restarts = args.restarts;

  LearnReport full = learn_full(chains, 3, cfg);
  std::ostringstream summary;
  summary << "benchmark 1: hyperbolic disk, 3 states, " << n_chains
          << " chains x " << length << " observations, seed " << args.seed
          << "\n";
  char line[256];
  std::snprintf(line, sizeof(line),
                "stage 1 (mixture estimation): %.1f s | stage 2 (moment "
                "matching): %.1f s | K condition %.3g\n",
                full.stage1_seconds, full.stage2_seconds, full.k_condition);
  summary << line;

  double mean_err = 0.0, disp_err = 0.0;
  summary << "transition error |P - P_hat|_F by lag horizon:\n";
  for (int tau_bar = 1; tau_bar <= 3; ++tau_bar) {
    LearnReport report =
        tau_bar == 3 ? full : rematch(full, tau_bar, cfg.solver);
    report.evaluation = evaluate(model, report);
    char name[32];
    std::snprintf(name, sizeof(name), "report_tau%d.json", tau_bar);
    save_report(report, (dir / name).string());
    std::snprintf(line, sizeof(line), "  tau_bar = %d: %.4f\n", tau_bar,
                  report.evaluation->metrics.transition_error);
    summary << line;
    mean_err = report.evaluation->metrics.mean_error;
    disp_err = report.evaluation->metrics.dispersion_error;
  }
  std::snprintf(line, sizeof(line),
                "mean error: %.4f | dispersion error: %.4f\n", mean_err,
                disp_err);
  summary << line;
  summary << "pi_inf (true):      " << format_vector(stationary(model.P))
          << "\n";
  summary << "pi_inf (estimated): " << format_vector(full.pi_inf) << "\n";

  std::ofstream out(dir / "summary.txt");
  out << summary.str();
  std::cout << summary.str();
  return 0;
}

int cmd_reproduce_example2(const ReproduceArgs& args) {
  const fs::path dir(args.output_dir);
  fs::create_directories(dir);
  const HmmModel model = examples::example2_model();
  save_model(model, (dir / "model.json").string());

  const int length = 10000;
  Rng rng = Rng(args.seed).split(0);
  Trajectory traj = simulate(model, length, 0, rng);
  ObservationFile file;
  file.kind = model.manifold();
  file.observations = traj.observations;
  file.seed = args.seed;
  save_observations(file, (dir / "chain_00.obs").string());

  LearnConfig cfg;
  cfg.tau_bar = 1;
  cfg.mc_samples = args.mc_samples;
  cfg.seed = args.seed;
  cfg.threads = args.threads > 0 ? args.threads : default_thread_count();
  cfg.mixture.n_restarts = args.restarts;

  const std::vector<Chain> chains{traj.observations};
  LearnReport report = learn_full(chains, 5, cfg);
  report.evaluation = evaluate(model, report);
  save_report(report, (dir / "report.json").string());

  const Evaluation& ev = *report.evaluation;
  std::ostringstream summary;
  summary << "benchmark 2: 2x2 SPD matrices, 5 states, " << length
          << " observations, tau_bar = 1, seed " << args.seed << "\n";
  char line[256];
  std::snprintf(line, sizeof(line),
                "stage 1: %.1f s | stage 2: %.1f s | K condition %.3g\n",
                report.stage1_seconds, report.stage2_seconds,
                report.k_condition);
  summary << line;
  std::snprintf(
      line, sizeof(line),
      "relative transition error: %.4f | mean abs entry error: %.4f\n",
      ev.metrics.relative_transition_error,
      ev.metrics.mean_abs_entry_error);
  summary << line;
  std::snprintf(line, sizeof(line),
                "mean error: %.4f | dispersion error: %.4f\n",
                ev.metrics.mean_error, ev.metrics.dispersion_error);
  summary << line;
  summary << "sigma (estimated, aligned): ";
  for (const auto& g : ev.components_aligned) {
    std::snprintf(line, sizeof(line), " %.4f", g.sigma);
    summary << line;
  }
  summary << "\n";
  summary << "pi_inf (true):      " << format_vector(stationary(model.P))
          << "\n";
  summary << "pi_inf (estimated): " << format_vector(ev.pi_inf_aligned)
          << "\n";

  std::ofstream out(dir / "summary.txt");
  out << summary.str();
  std::cout << summary.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-stage moment-matching learner for hidden Markov models with "
      "observations on the hyperbolic disk or 2x2 SPD matrices"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Sample observation chains from a model");
  simulate_cmd->add_option("model", sim.model_path, "model file (JSON)")
      ->required();
  simulate_cmd->add_option("--length", sim.length, "observations per chain")
      ->required();
  simulate_cmd->add_option("--chains", sim.chains, "number of chains");
  simulate_cmd->add_option("--burn-in", sim.burn_in,
                           "steps discarded before recording");
  simulate_cmd->add_option("--seed", sim.seed, "random seed");
  simulate_cmd->add_flag("--with-states", sim.with_states,
                         "append the hidden state column");
  simulate_cmd->add_option("--output", sim.output, "output path")->required();

  LearnArgs learn;
  auto* learn_cmd =
      app.add_subcommand("learn", "Estimate a model from observation files");
  learn_cmd->add_option("observations", learn.obs_paths, "observation files")
      ->required();
  learn_cmd->add_option("--states", learn.states, "number of hidden states");
  learn_cmd->add_option("--sensor", learn.sensor_path,
                        "model file with known observation densities");
  learn_cmd->add_option("--lags", learn.lags, "lag horizon tau_bar");
  learn_cmd->add_option("--burn-in", learn.burn_in,
                        "observations trimmed from each chain");
  learn_cmd->add_option("--mc-samples", learn.mc_samples,
                        "Monte Carlo samples per row of K");
  learn_cmd->add_option("--seed", learn.seed, "random seed");
  learn_cmd->add_option("--threads", learn.threads,
                        "worker cap (default: GEOMHMM_THREADS or all cores)");
  learn_cmd->add_option("--restarts", learn.restarts,
                        "EM restarts in stage 1");
  learn_cmd->add_option("--output", learn.output, "report file (JSON)")
      ->required();

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Score a report against a ground-truth model");
  eval_cmd->add_option("report", eval.report_path, "report file")->required();
  eval_cmd->add_option("model", eval.truth_path, "ground-truth model file")
      ->required();

  ReproduceArgs rep1, rep2;
  auto* rep1_cmd = app.add_subcommand(
      "reproduce-example1", "Run the hyperbolic-disk benchmark end to end");
  rep1_cmd->add_option("--seed", rep1.seed, "random seed");
  rep1_cmd->add_option("--output-dir", rep1.output_dir, "artifact directory");
  rep1_cmd->add_option("--mc-samples", rep1.mc_samples,
                       "Monte Carlo samples per row of K");
  rep1_cmd->add_option("--threads", rep1.threads, "worker cap");
  rep1_cmd->add_option("--restarts", rep1.restarts, "EM restarts");

  auto* rep2_cmd = app.add_subcommand(
      "reproduce-example2", "Run the SPD-matrix benchmark end to end");
  rep2_cmd->add_option("--seed", rep2.seed, "random seed");
  rep2_cmd->add_option("--output-dir", rep2.output_dir, "artifact directory");
  rep2_cmd->add_option("--mc-samples", rep2.mc_samples,
                       "Monte Carlo samples per row of K");
  rep2_cmd->add_option("--threads", rep2.threads, "worker cap");
  rep2_cmd->add_option("--restarts", rep2.restarts, "EM restarts");

  try {
    app.parse(argc, argv);
    if (simulate_cmd->parsed()) return cmd_simulate(sim);
    if (learn_cmd->parsed()) return cmd_learn(learn);
    if (eval_cmd->parsed()) return cmd_evaluate(eval);
    if (rep1_cmd->parsed()) return cmd_reproduce_example1(rep1);
    if (rep2_cmd->parsed()) return cmd_reproduce_example2(rep2);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
