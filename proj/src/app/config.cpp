// Copyright 2026 The ioncycle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "app/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ioncycle::app {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::schema, what); }

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) schema_error("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) schema_error(where + "." + key + " must be a boolean");
    } else if constexpr (std::is_arithmetic_v<T>) {
      if (!v.is_number()) schema_error(where + "." + key + " must be a number");
      if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) schema_error(where + "." + key + " must be an integer");
      }
    } else {
      if (!v.is_string()) schema_error(where + "." + key + " must be a string");
    }
    out = v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    schema_error(where + "." + key + ": " + e.what());
  }
}

struct Field {
  const char* key;
  double CalibrationParams::*member;
};

constexpr Field kCalibrationFields[] = {
    {"omega_rad_s", &CalibrationParams::omega},
    {"carrier_rabi_rad_s", &CalibrationParams::carrier_rabi},
    {"lamb_dicke", &CalibrationParams::lamb_dicke},
    {"pump_rate_per_s", &CalibrationParams::pump_rate},
    {"pump_duration_s", &CalibrationParams::pump_duration},
    {"dephasing_rate_per_s", &CalibrationParams::dephasing_rate},
    {"heating_rate_per_s", &CalibrationParams::heating_rate},
    {"heating_target_quanta", &CalibrationParams::heating_target},
    {"residual_engine_decay_per_s", &CalibrationParams::residual_engine_decay},
    {"sideband_duration_s", &CalibrationParams::sideband_duration},
    {"rap_half_span_rad_s", &CalibrationParams::rap_half_span},
    {"rap_duration_s", &CalibrationParams::rap_duration},
    {"laser_phase_rad", &CalibrationParams::laser_phase},
};

CalibrationParams parse_calibration(const Json& obj) {
  std::set<std::string> known;
  for (const auto& f : kCalibrationFields) known.insert(f.key);
  reject_unknown(obj, known, "cycle.calibration");
  CalibrationParams c;
  for (const auto& f : kCalibrationFields) read(obj, f.key, c.*(f.member), "cycle.calibration");
  return c;
}

CycleConfig parse_cycle(const Json& obj) {
  reject_unknown(obj,
                 {"p_D_A", "protocol", "direction", "n_cycles", "initial_nbar_quanta", "fock_dim", "ideal_timing",
                  "ideal_transfer", "randomize_phase", "lead_in_blue", "samples_per_stroke", "step_s", "calibration"},
                 "cycle");
  CycleConfig c;
  if (obj.contains("calibration")) c.calib = parse_calibration(obj.at("calibration"));
  read(obj, "p_D_A", c.p_D_A, "cycle");
  std::string protocol(to_string(c.protocol)), direction(to_string(c.direction));
  read(obj, "protocol", protocol, "cycle");
  read(obj, "direction", direction, "cycle");
  if (protocol == "resonant") c.protocol = Protocol::resonant;
  else if (protocol == "rap") c.protocol = Protocol::rap;
  else schema_error("cycle.protocol must be 'resonant' or 'rap'");
  if (direction == "forward") c.direction = Direction::forward;
  else if (direction == "reverse") c.direction = Direction::reverse;
  else schema_error("cycle.direction must be 'forward' or 'reverse'");
  read(obj, "n_cycles", c.n_cycles, "cycle");
  read(obj, "initial_nbar_quanta", c.initial_nbar, "cycle");
  long fock = c.fock_dim;
  read(obj, "fock_dim", fock, "cycle");
  c.fock_dim = fock;
  read(obj, "ideal_timing", c.ideal_timing, "cycle");
  read(obj, "ideal_transfer", c.ideal_transfer, "cycle");
  read(obj, "randomize_phase", c.randomize_phase, "cycle");
  read(obj, "lead_in_blue", c.lead_in_blue, "cycle");
  read(obj, "samples_per_stroke", c.samples_per_stroke, "cycle");
  read(obj, "step_s", c.step, "cycle");
  return c;
}

TomographySpec parse_tomography(const Json& obj) {
  reject_unknown(obj, {"shots", "grid_points", "grid_spacing_s", "reference_grid", "gamma_base_per_s", "n_levels",
                       "box_halfwidth", "seed"},
                 "tomography");
  TomographySpec t;
  read(obj, "shots", t.shots, "tomography");
  read(obj, "grid_points", t.grid_points, "tomography");
  read(obj, "grid_spacing_s", t.grid_spacing, "tomography");
  read(obj, "reference_grid", t.reference, "tomography");
  read(obj, "gamma_base_per_s", t.gamma_base, "tomography");
  long levels = t.n_levels;
  read(obj, "n_levels", levels, "tomography");
  t.n_levels = levels;
  read(obj, "box_halfwidth", t.box_halfwidth, "tomography");
  if (obj.contains("seed")) {
    std::uint64_t s = 0;
    read(obj, "seed", s, "tomography");
    t.seed = s;
  }
  return t;
}

Json calibration_json(const CalibrationParams& c) {
  Json j = Json::object();
  for (const auto& f : kCalibrationFields) j[f.key] = c.*(f.member);
  return j;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (name.empty()) throw Error(ErrorKind::invalid_config, "name must be nonempty");
  cycle.validate();
  if (tomography) {
    const auto& t = *tomography;
    if (t.shots <= 0) throw Error(ErrorKind::invalid_config, "tomography.shots must be > 0");
    if (t.grid_points < 1 || !(t.grid_spacing > 0.0)) throw Error(ErrorKind::invalid_config, "tomography grid is empty");
    if (t.n_levels < 1 || t.n_levels > cycle.fock_dim)
      throw Error(ErrorKind::invalid_config, "tomography.n_levels must lie in [1, fock_dim]");
    if (!(t.box_halfwidth >= 0.0)) throw Error(ErrorKind::invalid_config, "tomography.box_halfwidth must be >= 0");
    if (!(t.gamma_base >= 0.0)) throw Error(ErrorKind::invalid_config, "tomography.gamma_base_per_s must be >= 0");
  }
}

ExperimentSpec parse_spec(const Json& input) {
  const Json& doc = input.is_object() && input.contains("spec") && input.contains("version") ? input.at("spec") : input;
  reject_unknown(doc, {"name", "seed", "emit_snapshots", "cycle", "tomography", "grid", "outputs"}, "spec");
  ExperimentSpec s;
  read(doc, "name", s.name, "spec");
  read(doc, "seed", s.seed, "spec");
  read(doc, "emit_snapshots", s.emit_snapshots, "spec");
  if (doc.contains("cycle")) s.cycle = parse_cycle(doc.at("cycle"));
  if (doc.contains("tomography") && !doc.at("tomography").is_null()) s.tomography = parse_tomography(doc.at("tomography"));
  if (doc.contains("outputs")) {
    std::string out;
    read(doc, "outputs", out, "spec");
    s.outputs = out;
  }
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    if (!g.is_object()) schema_error("grid must be an object of key -> list");
    for (const auto& [key, values] : g.items()) {
      if (!values.is_array()) schema_error("grid." + key + " must be a list");
      s.grid.emplace_back(key, std::vector<Json>(values.begin(), values.end()));
    }
  }
  return s;
}

ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_config, "cannot open spec file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(std::string("spec is not valid JSON: ") + e.what());
  }
  return parse_spec(doc);
}

Json to_json(const ExperimentSpec& s) {
  const CycleConfig& c = s.cycle;
  Json cycle = {{"p_D_A", c.p_D_A},
                {"protocol", std::string(to_string(c.protocol))},
                {"direction", std::string(to_string(c.direction))},
                {"n_cycles", c.n_cycles},
                {"initial_nbar_quanta", c.initial_nbar},
                {"fock_dim", c.fock_dim},
                {"ideal_timing", c.ideal_timing},
                {"ideal_transfer", c.ideal_transfer},
                {"randomize_phase", c.randomize_phase},
                {"lead_in_blue", c.lead_in_blue},
                {"samples_per_stroke", c.samples_per_stroke},
                {"step_s", c.step},
                {"calibration", calibration_json(c.calib)}};
  Json j = {{"name", s.name}, {"seed", s.seed}, {"emit_snapshots", s.emit_snapshots}, {"cycle", cycle}};
  if (s.tomography) {
    const auto& t = *s.tomography;
    j["tomography"] = {{"shots", t.shots},
                       {"grid_points", t.grid_points},
                       {"grid_spacing_s", t.grid_spacing},
                       {"reference_grid", t.reference},
                       {"gamma_base_per_s", t.gamma_base},
                       {"n_levels", t.n_levels},
                       {"box_halfwidth", t.box_halfwidth}};
    if (t.seed) j["tomography"]["seed"] = *t.seed;
  }
  if (!s.grid.empty()) {
    Json g = Json::object();
    for (const auto& [key, values] : s.grid) g[key] = values;
    j["grid"] = g;
  }
  if (s.outputs) j["outputs"] = *s.outputs;
  return j;
}

void set_path(Json& doc, const std::string& dotted, const Json& value) {
  Json* node = &doc;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) schema_error("empty grid key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) schema_error("grid key '" + dotted + "' does not name a spec field");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = Json::object();
  }
  (*node)[parts.back()] = value;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ioncycle::app
