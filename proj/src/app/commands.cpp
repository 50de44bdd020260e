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

#include "app/commands.hpp"

#include <filesystem>
#include <ostream>

#include "app/output.hpp"
#include "app/presets.hpp"
#include "ioncycle/cycle.hpp"
#include "ioncycle/thermo.hpp"
#include "ioncycle/tomography.hpp"

namespace ioncycle::app {

namespace fs = std::filesystem;

namespace {

struct RunOutcome {
  Json results = Json::object();
  std::optional<Error> error;
};

Json mean_over_cycles(const SimulationTrace& trace, BoundaryPoint point) {
  const int cycles = trace.completed_cycles();
  if (cycles < 1) return nullptr;
  double acc = 0.0;
  for (int c = 1; c <= cycles; ++c) acc += excited_population(trace.at(c, point).state);
  return acc / cycles;
}

Json states_json(const SimulationTrace& trace) {
  Json out = Json::array();
  for (const auto& b : trace.boundaries) {
    const auto load = partial_trace(b.state, Keep::load);
    Json re = Json::array(), im = Json::array();
    for (Index r = 0; r < load.dim(); ++r) {
      Json rr = Json::array(), ir = Json::array();
      for (Index c = 0; c < load.dim(); ++c) {
        rr.push_back(load.matrix()(r, c).real());
        ir.push_back(load.matrix()(r, c).imag());
      }
      re.push_back(rr);
      im.push_back(ir);
    }
    out.push_back({{"cycle", b.cycle}, {"point", std::string(1, to_char(b.point))}, {"time_s", b.time},
                   {"p_D", excited_population(b.state)}, {"load_real", re}, {"load_imag", im}});
  }
  return out;
}

// One experiment into `dir`. Physics errors are captured; everything computed before them is written.
RunOutcome execute(const ExperimentSpec& spec, const fs::path& dir) {
  RunOutcome outcome;
  std::exception_ptr failure;
  const SimulationTrace trace = run_cycles(spec.cycle, &failure);
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const Error& e) {
      outcome.error = e;
    }
  }
  const std::string status = outcome.error ? "status=failed" : "status=ok";
  const std::string banner = csv_banner(spec.name, spec.seed, status);

  Json& r = outcome.results;
  const DensityMatrix<double>& last = trace.final_state();
  const ThermoReport final_report = thermo_report(last);
  r["completed_cycles"] = trace.completed_cycles();
  r["final_mean_n"] = final_report.mean_n;
  r["final_p_D"] = excited_population(last);
  r["final_entropy_nats"] = final_report.entropy_nats;
  r["final_ergotropy_hw"] = final_report.ergotropy_units_hw;
  r["final_ergotropy_diag_hw"] = final_report.ergotropy_diag_units_hw;
  r["end_of_cycle_mean_n"] = end_of_cycle_mean_n(trace);
  r["mean_p_D_B"] = mean_over_cycles(trace, BoundaryPoint::B);
  r["mean_p_D_D"] = mean_over_cycles(trace, BoundaryPoint::D);
  r["delta_n_per_cycle"] = trace.completed_cycles() > 0 ? Json(delta_n_per_cycle(trace)) : Json(nullptr);
  r["quanta_efficiency"] = trace.completed_cycles() > 0 && spec.cycle.direction == Direction::forward
                               ? Json(quanta_efficiency(trace))
                               : Json(nullptr);

  PhononDistribution dist = PhononDistribution::from_state(last);
  if (spec.tomography && !outcome.error) {
    const TomographySpec& t = *spec.tomography;
    try {
      const PhononDistribution truth = measured_distribution(last, spec.cycle.calib);
      const Eigen::VectorXd times = t.times();
      const Eigen::VectorXd ideal = rabi_signal(truth, times, spec.cycle.calib, t.gamma_base);
      const std::uint64_t seed = t.seed.value_or(spec.seed);
      const RabiScan scan = sample_scan(times, ideal, t.shots, seed);
      atomic_write(dir / "scan.csv", scan_csv(scan, csv_banner(spec.name, seed)));
      const FitResult fit = fit_distribution(scan, truth, spec.cycle.calib,
                                             FitOptions{t.box_halfwidth, t.n_levels, t.gamma_base, 0});
      const ThermoReport obs = reconstruct_observables(fit);
      Json fj = {{"reduced_chi2", fit.reduced_chi2},
                 {"chi2", fit.chi2},
                 {"n_levels", fit.n_levels_used},
                 {"points", scan.times.size()},
                 {"iterations", fit.iterations},
                 {"box_halfwidth", t.box_halfwidth},
                 {"gamma_base_per_s", t.gamma_base},
                 {"seed", seed},
                 {"mean_n", obs.mean_n},
                 {"sigma_mean_n", obs.sigma->mean_n},
                 {"entropy_nats", obs.entropy_nats},
                 {"sigma_entropy_nats", obs.sigma->entropy_nats},
                 {"ergotropy_hw", obs.ergotropy_units_hw},
                 {"sigma_ergotropy_hw", obs.sigma->ergotropy_units_hw}};
      atomic_write(dir / "fit.csv", distribution_csv(fit.p_fit, csv_banner(spec.name, seed)));
      atomic_write(dir / "fit.json", fj.dump(2) + "\n");
      r["tomography"] = fj;
      dist = fit.p_fit;
    } catch (const Error& e) {
      outcome.error = e;
    }
  }

  atomic_write(dir / "trace.csv", trace_csv(trace, banner));
  atomic_write(dir / "boundaries.csv", boundaries_csv(trace, banner));
  atomic_write(dir / "distribution.csv", distribution_csv(dist, banner));
  if (spec.emit_snapshots) atomic_write(dir / "states.json", states_json(trace).dump() + "\n");

  Json doc = {{"version", kVersion},
              {"status", outcome.error ? "failed" : "ok"},
              {"spec", to_json(spec)},
              {"results", r}};
  if (outcome.error) doc["error"] = error_json(*outcome.error);
  atomic_write(dir / "run.json", doc.dump(2) + "\n");
  return outcome;
}

fs::path output_dir(const CommonOptions& options, const ExperimentSpec& spec) {
  if (options.out) return *options.out;
  if (spec.outputs) return *spec.outputs;
  return fs::path("out") / spec.name;
}

int report(const Error& e, std::ostream& err) {
  err << error_json(e).dump() << "\n";
  return exit_code_for(e.kind());
}

// Points of the lexicographic product of the grid axes.
std::vector<std::vector<Json>> grid_points(const ExperimentSpec& spec) {
  std::vector<std::vector<Json>> points{{}};
  for (const auto& [key, values] : spec.grid) {
    std::vector<std::vector<Json>> next;
    for (const auto& p : points)
      for (const auto& v : values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  if (spec.grid.empty()) return {};
  return points;
}

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return number(v.get<double>());
  return v.dump();
}

}  // namespace

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_config:
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_distribution:
    case ErrorKind::schema:
      return kValidation;
    default:
      return kPhysics;
  }
}

Json error_json(const Error& e) { return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}; }

ExperimentSpec resolve_spec(const CommonOptions& options) {
  if (options.spec && options.preset) throw Error(ErrorKind::invalid_config, "give either --spec or --preset");
  if (!options.spec && !options.preset) throw Error(ErrorKind::invalid_config, "--spec or --preset is required");
  ExperimentSpec spec = options.spec ? load_spec_file(*options.spec) : parse_spec(preset(*options.preset));
  if (options.seed) spec.seed = *options.seed;
  return spec;
}

int cmd_validate(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentSpec spec = resolve_spec(options);
    spec.validate();
    out << to_json(spec).dump(2) << "\n";
    return kOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_run(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentSpec spec = resolve_spec(options);
    spec.validate();
    if (!spec.grid.empty()) throw Error(ErrorKind::invalid_config, "spec has a grid; use the sweep command");
    const fs::path dir = output_dir(options, spec);
    const RunOutcome outcome = execute(spec, dir);
    if (outcome.error) return report(*outcome.error, err);
    out << Json({{"status", "ok"}, {"out", dir.string()}, {"results", outcome.results}}).dump(2) << "\n";
    return kOk;
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << Json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return kInternal;
  }
}

int cmd_sweep(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentSpec base = resolve_spec(options);
    base.validate();
    const fs::path dir = output_dir(options, base);
    const Json base_doc = to_json(base);

    std::string summary = csv_banner(base.name, base.seed) + "index,status,seed";
    for (const auto& [key, values] : base.grid) summary += "," + key;
    summary +=
        ",final_mean_n,delta_n_per_cycle,quanta_efficiency,mean_p_D_B,mean_p_D_D,final_entropy_nats,"
        "final_ergotropy_hw,error\n";

    // a key that names no field is a spec error, not a failed point
    for (const auto& [key, values] : base.grid) {
      if (values.empty()) continue;
      Json probe = base_doc;
      probe.erase("grid");
      set_path(probe, key, values.front());
      try {
        parse_spec(probe);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::schema) throw;
      }
    }

    int failed = 0;
    const auto points = grid_points(base);
    for (std::size_t i = 0; i < points.size(); ++i) {
      Json doc = base_doc;
      doc.erase("grid");
      doc.erase("outputs");
      for (std::size_t a = 0; a < base.grid.size(); ++a) set_path(doc, base.grid[a].first, points[i][a]);
      const std::uint64_t seed = derive_seed(base.seed, i);
      doc["seed"] = seed;
      char label[32];
      std::snprintf(label, sizeof label, "point_%03zu", i);
      doc["name"] = base.name + "_" + label;

      std::string row = std::to_string(i);
      Json results = Json::object();
      std::string status = "ok", message;
      try {
        const ExperimentSpec spec = parse_spec(doc);
        spec.validate();
        const RunOutcome outcome = execute(spec, dir / label);
        results = outcome.results;
        if (outcome.error) {
          status = "failed";
          message = outcome.error->what();
        }
      } catch (const Error& e) {
        status = "failed";
        message = e.what();
      }
      if (status != "ok") ++failed;
      row += "," + status + "," + std::to_string(seed);
      for (const auto& v : points[i]) row += "," + cell(v);
      for (const char* key : {"final_mean_n", "delta_n_per_cycle", "quanta_efficiency", "mean_p_D_B", "mean_p_D_D",
                              "final_entropy_nats", "final_ergotropy_hw"})
        row += "," + (results.contains(key) ? cell(results[key]) : std::string());
      for (char& c : message)
        if (c == ',' || c == '\n') c = ';';
      summary += row + "," + message + "\n";
    }
    atomic_write(dir / "summary.csv", summary);
    out << Json({{"status", failed ? "partial" : "ok"}, {"out", dir.string()}, {"points", points.size()},
                 {"failed", failed}})
               .dump(2)
        << "\n";
    return failed ? kPhysics : kOk;
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << Json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return kInternal;
  }
}

int cmd_tomo(const TomoOptions& options, std::ostream& out, std::ostream& err) {
  try {
    CalibrationParams calib;
    if (options.spec) calib = load_spec_file(*options.spec).cycle.calib;
    const RabiScan scan = read_scan(options.scan);
    const PhononDistribution prior = read_distribution(options.prior);

    if (options.grid_points || options.grid_spacing || options.reference_grid) {
      const Eigen::VectorXd expected =
          options.reference_grid ? reference_grid() : scan_grid(options.grid_points.value_or(35), options.grid_spacing.value_or(3e-6));
      if (expected.size() != scan.times.size() || (expected - scan.times).cwiseAbs().maxCoeff() > 1e-12)
        throw Error(ErrorKind::schema, "scan time grid does not match the grid flags");
    }

    const FitResult fit = fit_distribution(scan, prior, calib,
                                           FitOptions{options.box_halfwidth, options.n_levels, options.gamma_base, 0});
    const ThermoReport obs = reconstruct_observables(fit);
    const fs::path dir = options.out ? fs::path(*options.out) : fs::path("out") / "tomo";
    Json fj = {{"reduced_chi2", fit.reduced_chi2},
               {"chi2", fit.chi2},
               {"n_levels", fit.n_levels_used},
               {"points", scan.times.size()},
               {"iterations", fit.iterations},
               {"box_halfwidth", options.box_halfwidth},
               {"gamma_base_per_s", options.gamma_base},
               {"scan", options.scan},
               {"prior", options.prior},
               {"mean_n", obs.mean_n},
               {"sigma_mean_n", obs.sigma->mean_n},
               {"entropy_nats", obs.entropy_nats},
               {"sigma_entropy_nats", obs.sigma->entropy_nats},
               {"ergotropy_hw", obs.ergotropy_units_hw},
               {"sigma_ergotropy_hw", obs.sigma->ergotropy_units_hw}};
    atomic_write(dir / "fit.csv", distribution_csv(fit.p_fit, csv_banner("tomo", 0)));
    atomic_write(dir / "fit.json", fj.dump(2) + "\n");
    out << fj.dump(2) << "\n";
    return kOk;
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << Json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return kInternal;
  }
}

}  // namespace ioncycle::app
