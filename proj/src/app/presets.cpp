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

#include "app/presets.hpp"

namespace ioncycle::app {

namespace {

Json forward(const char* name, double p_D_A, int cycles) {
  return {{"name", name},
          {"seed", 1},
          {"cycle", {{"p_D_A", p_D_A}, {"protocol", "resonant"}, {"direction", "forward"}, {"n_cycles", cycles}}}};
}

// Cooling needs a hot start; the broader thermal tail needs more levels.
Json reverse(const char* name, int cycles) {
  return {{"name", name},
          {"seed", 1},
          {"cycle",
           {{"p_D_A", 0.5}, {"direction", "reverse"}, {"n_cycles", cycles}, {"initial_nbar_quanta", 5.0}, {"fock_dim", 80}}}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1c", "fig2a", "fig2a_reverse", "fig2b", "fig2c", "fig3", "refrigerator15", "ideal_oracle"};
}

Json preset(const std::string& name) {
  if (name == "fig1c") {
    Json j = forward("fig1c", 0.32, 8);
    j["cycle"]["samples_per_stroke"] = 8;
    return j;
  }
  if (name == "fig2a") {
    Json j = forward("fig2a", 0.5, 8);
    j["tomography"] = {{"shots", 150}, {"reference_grid", true}};
    return j;
  }
  if (name == "fig2a_reverse") return reverse("fig2a_reverse", 8);
  if (name == "fig2b") {
    Json j = forward("fig2b", 0.32, 8);
    j["grid"] = {{"cycle.p_D_A", {0.15, 0.32, 0.5}}};
    return j;
  }
  if (name == "fig2c") {
    // five cycles, as in the experiment; the RAP strokes heat the tail enough to need 60 levels
    Json j = forward("fig2c", 0.32, 5);
    j["cycle"]["fock_dim"] = 60;
    j["grid"] = {{"cycle.protocol", {"resonant", "rap"}}};
    return j;
  }
  if (name == "fig3") {
    Json j = forward("fig3", 0.32, 8);
    j["tomography"] = {{"shots", 150}};
    return j;
  }
  if (name == "refrigerator15") return reverse("refrigerator15", 15);
  if (name == "ideal_oracle") {
    const CycleConfig c = CycleConfig::ideal(0.25, 10, 26);
    ExperimentSpec s;
    s.name = "ideal_oracle";
    s.seed = 1;
    s.cycle = c;
    return to_json(s);
  }
  throw Error(ErrorKind::invalid_config, "unknown preset '" + name + "'");
}

}  // namespace ioncycle::app
