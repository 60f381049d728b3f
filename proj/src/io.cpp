// geomhmm/io.cpp

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

#include "geomhmm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geomhmm/errors.hpp"

namespace geomhmm {

namespace {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw DataError(where + ": cannot parse number '" + text + "'");
  }
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write to '" + path + "' failed");
}

json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << path << ":" << line_of_offset(text, e.byte)
        << ": " << e.what();
    throw DataError(msg.str());
  }
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw DataError(field + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError(field + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw DataError(field + ": expected a non-empty array of rows");
  }
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw DataError(field + ": ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw DataError(field + ": expected numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          j[i][c].get<double>();
    }
  }
  return m;
}

const json& require(const json& j, const std::string& key,
                    const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw DataError(context + ": missing field '" + key + "'");
  }
  return *it;
}

json gaussian_to_json(const RiemannianGaussian& g) {
  return json{{"mean", point_to_string(g.mean)}, {"sigma", g.sigma}};
}

RiemannianGaussian gaussian_from_json(ManifoldKind kind, const json& j,
                                      const std::string& context) {
  const json& mean = require(j, "mean", context);
  const json& sigma = require(j, "sigma", context);
  if (!mean.is_string()) throw DataError(context + ".mean: expected a string");
  if (!sigma.is_number()) throw DataError(context + ".sigma: expected a number");
  try {
    return RiemannianGaussian(
        point_from_string(kind, mean.get<std::string>()),
        sigma.get<double>());
  } catch (const std::invalid_argument& e) {
    throw DataError(context + ": " + e.what());
  }
}

json mixture_to_json(const MixtureModel& m) {
  json comps = json::array();
  for (const auto& g : m.components) comps.push_back(gaussian_to_json(g));
  return json{{"weights", vector_to_json(m.weights)},
              {"components", comps}};
}

MixtureModel mixture_from_json(ManifoldKind kind, const json& j,
                               const std::string& context) {
  MixtureModel m;
  m.weights = vector_from_json(require(j, "weights", context),
                               context + ".weights");
  const json& comps = require(j, "components", context);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::ostringstream c;
    c << context << ".components[" << i << "]";
    m.components.push_back(gaussian_from_json(kind, comps[i], c.str()));
  }
  return m;
}

}  // namespace

std::string point_to_string(const ManifoldPoint& p) {
  const Eigen::Vector3d& c = p.coords();
  if (p.kind() == ManifoldKind::kPoincareDisk) {
    return format_double(c[0]) + "," + format_double(c[1]);
  }
  return format_double(c[0]) + "," + format_double(c[1]) + "," +
         format_double(c[2]);
}

ManifoldPoint point_from_string(ManifoldKind kind, const std::string& text) {
  const auto parts = split(text, ',');
  const std::size_t expected =
      kind == ManifoldKind::kPoincareDisk ? 2u : 3u;
  if (parts.size() != expected) {
    std::ostringstream msg;
    msg << "point '" << text << "': expected " << expected
        << " coordinates for " << to_string(kind);
    throw DataError(msg.str());
  }
  try {
    if (kind == ManifoldKind::kPoincareDisk) {
      return ManifoldPoint::disk(parse_double(parts[0], "point"),
                                 parse_double(parts[1], "point"));
    }
    return ManifoldPoint::spd2(parse_double(parts[0], "point"),
                               parse_double(parts[1], "point"),
                               parse_double(parts[2], "point"));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("point '") + text + "': " + e.what());
  }
}

void save_model(const HmmModel& model, const std::string& path) {
  model.validate();
  json j;
  j["manifold"] = to_string(model.manifold());
  j["P"] = matrix_to_json(model.P);
  j["pi0"] = vector_to_json(model.pi0);
  json comps = json::array();
  for (const auto& g : model.components) comps.push_back(gaussian_to_json(g));
  j["components"] = comps;
  write_file(path, j.dump(2) + "\n");
}

HmmModel load_model(const std::string& path) {
  const json j = parse_json_file(path);
  const std::string context = "model file " + path;
  const json& manifold = require(j, "manifold", context);
  if (!manifold.is_string()) {
    throw DataError(context + ": field 'manifold' must be a string");
  }
  ManifoldKind kind;
  try {
    kind = manifold_kind_from_string(manifold.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DataError(context + ": " + e.what());
  }
  HmmModel model;
  model.P = matrix_from_json(require(j, "P", context), context + ": field 'P'");
  model.pi0 =
      vector_from_json(require(j, "pi0", context), context + ": field 'pi0'");
  const json& comps = require(j, "components", context);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::ostringstream c;
    c << context << ": field 'components[" << i << "]'";
    model.components.push_back(gaussian_from_json(kind, comps[i], c.str()));
  }
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(context + ": " + e.what());
  }
  return model;
}

void save_observations(const ObservationFile& file, const std::string& path) {
  if (file.has_states() &&
      file.states.size() != file.observations.size()) {
    throw std::invalid_argument(
        "observation file: state column length mismatch");
  }
  std::ostringstream out;
  out << "# manifold: " << to_string(file.kind) << "\n";
  out << "# length: " << file.observations.size() << "\n";
  out << "# seed: " << file.seed << "\n";
  out << "# with_states: " << (file.has_states() ? 1 : 0) << "\n";
  for (std::size_t k = 0; k < file.observations.size(); ++k) {
    out << point_to_string(file.observations[k]);
    if (file.has_states()) out << "," << (file.states[k] + 1);
    out << "\n";
  }
  write_file(path, out.str());
}

ObservationFile load_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  ObservationFile file;
  bool have_kind = false, with_states = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      const auto strip = [](std::string& s) {
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
      };
      strip(key);
      strip(value);
      try {
        if (key == "manifold") {
          file.kind = manifold_kind_from_string(value);
          have_kind = true;
        } else if (key == "seed") {
          file.seed = std::stoull(value);
        } else if (key == "with_states") {
          with_states = value == "1" || value == "true";
        }
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": bad header '" << key
            << "': " << e.what();
        throw DataError(msg.str());
      }
      continue;
    }
    if (!have_kind) {
      std::ostringstream msg;
      msg << path << ":" << line_no
          << ": data before the '# manifold:' header";
      throw DataError(msg.str());
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto parts = split(line, ',');
    const std::size_t coords =
        file.kind == ManifoldKind::kPoincareDisk ? 2u : 3u;
    const std::size_t expected = coords + (with_states ? 1u : 0u);
    if (parts.size() != expected) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << expected
          << " fields, got " << parts.size();
      throw DataError(msg.str());
    }
    std::string point_text = parts[0];
    for (std::size_t i = 1; i < coords; ++i) point_text += "," + parts[i];
    try {
      file.observations.push_back(point_from_string(file.kind, point_text));
      if (with_states) {
        const int s = static_cast<int>(
            parse_double(parts[coords], "state column"));
        if (s < 1) throw DataError("state column must be >= 1");
        file.states.push_back(s - 1);
      }
    } catch (const DataError& e) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": " << e.what();
      throw DataError(msg.str());
    }
  }
  if (file.observations.empty()) {
    throw DataError(path + ": no observations");
  }
  return file;
}

void save_report(const LearnReport& report, const std::string& path) {
  json j;
  j["manifold"] = to_string(report.manifold());
  j["n_states"] = report.n_states;
  j["tau_bar"] = report.tau_bar;
  j["seed"] = report.seed;
  j["known_sensor"] = report.known_sensor;
  j["mixture"] = mixture_to_json(report.mixture);
  j["pi_inf"] = vector_to_json(report.pi_inf);
  j["P"] = matrix_to_json(report.P);
  json a_seq = json::array();
  for (const auto& a : report.a_seq) a_seq.push_back(matrix_to_json(a));
  j["A_seq"] = a_seq;
  json lags = json::array();
  for (const auto& m : report.moments.lags) lags.push_back(matrix_to_json(m));
  j["moments"] = json{{"tau_bar", report.moments.tau_bar()}, {"lags", lags}};
  j["K"] = json{{"values", matrix_to_json(report.K.K)},
                {"raw", matrix_to_json(report.K.raw_k)},
                {"std_err", matrix_to_json(report.K.std_err)},
                {"mc_samples", report.K.mc_samples},
                {"condition", report.k_condition}};
  json solver = json::array();
  for (const auto& s : report.solver_info) {
    solver.push_back(json{{"stage", s.stage},
                          {"iterations", s.info.iterations},
                          {"converged", s.info.converged},
                          {"objective", s.info.objective},
                          {"lipschitz", s.info.lipschitz}});
  }
  j["solver"] = solver;
  j["timings"] = json{{"stage1_seconds", report.stage1_seconds},
                      {"stage2_seconds", report.stage2_seconds}};
  if (report.evaluation) {
    const Evaluation& ev = *report.evaluation;
    json comps = json::array();
    for (const auto& g : ev.components_aligned) {
      comps.push_back(gaussian_to_json(g));
    }
    j["evaluation"] =
        json{{"alignment", ev.alignment},
             {"P_aligned", matrix_to_json(ev.p_aligned)},
             {"pi_inf_aligned", vector_to_json(ev.pi_inf_aligned)},
             {"components_aligned", comps},
             {"metrics",
              json{{"mean_error", ev.metrics.mean_error},
                   {"dispersion_error", ev.metrics.dispersion_error},
                   {"transition_error", ev.metrics.transition_error},
                   {"relative_transition_error",
                    ev.metrics.relative_transition_error},
                   {"mean_abs_entry_error",
                    ev.metrics.mean_abs_entry_error}}}};
  }
  write_file(path, j.dump(2) + "\n");
}

LearnReport load_report(const std::string& path) {
  const json j = parse_json_file(path);
  const std::string context = "report file " + path;
  const json& manifold = require(j, "manifold", context);
  ManifoldKind kind;
  try {
    kind = manifold_kind_from_string(manifold.get<std::string>());
  } catch (const std::exception& e) {
    throw DataError(context + ": " + e.what());
  }
  LearnReport report;
  report.n_states = require(j, "n_states", context).get<int>();
  report.tau_bar = require(j, "tau_bar", context).get<int>();
  report.seed = require(j, "seed", context).get<std::uint64_t>();
  report.known_sensor = require(j, "known_sensor", context).get<bool>();
  report.mixture =
      mixture_from_json(kind, require(j, "mixture", context),
                        context + ": field 'mixture'");
  report.pi_inf = vector_from_json(require(j, "pi_inf", context),
                                   context + ": field 'pi_inf'");
  report.P = matrix_from_json(require(j, "P", context), context + ": field 'P'");
  for (const auto& a : require(j, "A_seq", context)) {
    report.a_seq.push_back(matrix_from_json(a, context + ": field 'A_seq'"));
  }
  const json& moments = require(j, "moments", context);
  for (const auto& m : require(moments, "lags", context + ".moments")) {
    report.moments.lags.push_back(
        matrix_from_json(m, context + ": field 'moments.lags'"));
  }
  const json& k = require(j, "K", context);
  report.K.K = matrix_from_json(require(k, "values", context + ".K"),
                                context + ": field 'K.values'");
  report.K.raw_k = matrix_from_json(require(k, "raw", context + ".K"),
                                    context + ": field 'K.raw'");
  report.K.std_err = matrix_from_json(require(k, "std_err", context + ".K"),
                                      context + ": field 'K.std_err'");
  report.K.mc_samples = require(k, "mc_samples", context + ".K").get<long>();
  report.k_condition = require(k, "condition", context + ".K").get<double>();
  for (const auto& s : require(j, "solver", context)) {
    StageInfo stage;
    stage.stage = require(s, "stage", context + ".solver").get<std::string>();
    stage.info.iterations =
        require(s, "iterations", context + ".solver").get<int>();
    stage.info.converged =
        require(s, "converged", context + ".solver").get<bool>();
    stage.info.objective =
        require(s, "objective", context + ".solver").get<double>();
    stage.info.lipschitz =
        require(s, "lipschitz", context + ".solver").get<double>();
    report.solver_info.push_back(stage);
  }
  const json& timings = require(j, "timings", context);
  report.stage1_seconds =
      require(timings, "stage1_seconds", context + ".timings").get<double>();
  report.stage2_seconds =
      require(timings, "stage2_seconds", context + ".timings").get<double>();
  if (j.contains("evaluation")) {
    const json& e = j["evaluation"];
    Evaluation ev;
    for (const auto& a : require(e, "alignment", context + ".evaluation")) {
      ev.alignment.push_back(a.get<int>());
    }
    ev.p_aligned =
        matrix_from_json(require(e, "P_aligned", context + ".evaluation"),
                         context + ": field 'evaluation.P_aligned'");
    ev.pi_inf_aligned = vector_from_json(
        require(e, "pi_inf_aligned", context + ".evaluation"),
        context + ": field 'evaluation.pi_inf_aligned'");
    for (const auto& g :
         require(e, "components_aligned", context + ".evaluation")) {
      ev.components_aligned.push_back(gaussian_from_json(
          kind, g, context + ": field 'evaluation.components_aligned'"));
    }
    const json& m = require(e, "metrics", context + ".evaluation");
    ev.metrics.mean_error =
        require(m, "mean_error", context + ".metrics").get<double>();
    ev.metrics.dispersion_error =
        require(m, "dispersion_error", context + ".metrics").get<double>();
    ev.metrics.transition_error =
        require(m, "transition_error", context + ".metrics").get<double>();
    ev.metrics.relative_transition_error =
        require(m, "relative_transition_error", context + ".metrics")
            .get<double>();
    ev.metrics.mean_abs_entry_error =
        require(m, "mean_abs_entry_error", context + ".metrics")
            .get<double>();
    report.evaluation = std::move(ev);
  }
  return report;
}

}  // namespace geomhmm
