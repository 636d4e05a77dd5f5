// Copyright 2026 The tmsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tmsq/circuit.hpp"
#include "tmsq/curves.hpp"
#include "tmsq/estimator.hpp"
#include "tmsq/measurements.hpp"
#include "tmsq/noise_model.hpp"

namespace tmsq::cli {
namespace {

using nlohmann::ordered_json;

enum class Format { kCsv, kJson };

// Raised for anything the user can fix: bad flags, unreadable files,
// malformed tables or circuits.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

ordered_json number(const std::optional<double>& x) {
  return x ? number(*x) : ordered_json(nullptr);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json statistic(const Statistic& s) { return {{"mean", number(s.mean)}, {"std", number(s.std)}}; }

ordered_json summary_json(const EstimateSummary& s) {
  return {{"feasible_count", s.feasible_count},
          {"infeasible_count", s.infeasible_count},
          {"gain", statistic(s.gain)},
          {"eta_p", statistic(s.eta_p)},
          {"eta_c", statistic(s.eta_c)}};
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw UsageError(fmt::format("{}: '{}' is not a number", what, item));
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(fmt::format("{}: empty list", what));
  return out;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--range expects lo:hi");
  const auto lo = parse_list(text.substr(0, colon), "--range");
  const auto hi = parse_list(text.substr(colon + 1), "--range");
  if (lo.size() != 1 || hi.size() != 1) throw UsageError("--range expects lo:hi");
  return {lo[0], hi[0]};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<MeasurementPoint> load_points(const std::string& path) {
  try {
    return load_measurements(path);
  } catch (const InputError& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  }
}

// Written to a sibling temporary first so a failed write never leaves a
// truncated result behind.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path target(out_path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError(fmt::format("cannot write '{}'", out_path));
    f << text;
    if (!f.flush()) throw UsageError(fmt::format("cannot write '{}'", out_path));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw UsageError(fmt::format("cannot write '{}'", out_path));
  }
}

struct Common {
  std::string out_path;
  Format format = Format::kCsv;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_path, "Write results to this file instead of stdout");
  cmd->add_option("--format", c.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"csv", Format::kCsv}, {"json", Format::kJson}}));
}

std::string estimate(const std::string& input, double eps_p, double eps_c, Format format) {
  const auto points = load_points(input);
  std::vector<EstimateResult> results;
  results.reserve(points.size());
  for (const auto& p : points) {
    try {
      results.push_back(invert_point(p, eps_p, eps_c));
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("{} ({}): {}", input, p.label, e.what()));
    }
  }

  EstimateSummary summary;
  try {
    summary = aggregate(results);
  } catch (const InsufficientData& e) {
    std::string detail;
    for (const auto& r : results) {
      if (!r.feasible) detail += fmt::format("\n  {}: infeasible ({})", r.label, r.diagnostic);
    }
    throw InfeasibleError(fmt::format("{}{}", e.what(), detail));
  }

  if (format == Format::kJson) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "estimate";
    j["eps_p"] = number(eps_p);
    j["eps_c"] = number(eps_c);
    j["points"] = ordered_json::array();
    for (const auto& r : results) {
      ordered_json p;
      p["label"] = r.label;
      p["feasible"] = r.feasible;
      p["gain"] = r.feasible ? number(r.gain) : ordered_json(nullptr);
      p["eta_p"] = r.feasible ? number(r.eta_p) : ordered_json(nullptr);
      p["eta_c"] = r.feasible ? number(r.eta_c) : ordered_json(nullptr);
      p["antisqueezed_residual_db"] = number(r.antisqueezed_residual_db);
      p["diagnostic"] = r.diagnostic;
      j["points"].push_back(std::move(p));
    }
    j["summary"] = summary_json(summary);
    return dump(j);
  }

  std::string csv = "label,feasible,gain,eta_p,eta_c,antisqueezed_residual_db,diagnostic\n";
  const auto opt = [](bool ok, double x) { return ok ? format_number(x) : std::string{}; };
  for (const auto& r : results) {
    csv += fmt::format("{},{},{},{},{},{},{}\n", r.label, r.feasible ? 1 : 0, opt(r.feasible, r.gain),
                       opt(r.feasible, r.eta_p), opt(r.feasible, r.eta_c),
                       r.antisqueezed_residual_db ? format_number(*r.antisqueezed_residual_db) : "",
                       r.diagnostic);
  }
  csv += fmt::format("mean,,{},{},{},,\n", format_number(summary.gain.mean),
                     format_number(summary.eta_p.mean), format_number(summary.eta_c.mean));
  csv += fmt::format("std,,{},{},{},,\n", format_number(summary.gain.std),
                     format_number(summary.eta_p.std), format_number(summary.eta_c.std));
  return csv;
}

std::string scan_eps(const std::string& input, const std::string& grid_text, double eps_c,
                     Format format) {
  const auto grid = parse_list(grid_text, "--grid");
  for (double e : grid) {
    if (!(e >= 0.0 && e <= 1.0)) throw UsageError(fmt::format("--grid value {} outside [0, 1]", e));
  }
  const auto points = load_points(input);
  std::vector<EpsilonScanRow> rows;
  try {
    rows = epsilon_scan(points, grid, eps_c);
  } catch (const InsufficientData& e) {
    throw InfeasibleError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (format == Format::kJson) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "scan-eps";
    j["eps_c"] = number(eps_c);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row{{"eps_p", number(r.eps_p)}};
      row.update(summary_json(r.summary));
      j["rows"].push_back(std::move(row));
    }
    return dump(j);
  }
  std::string csv =
      "eps_p,eps_c,feasible,infeasible,gain_mean,gain_std,eta_p_mean,eta_p_std,eta_c_mean,eta_c_std\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", format_number(r.eps_p), format_number(eps_c),
                       s.feasible_count, s.infeasible_count, format_number(s.gain.mean),
                       format_number(s.gain.std), format_number(s.eta_p.mean), format_number(s.eta_p.std),
                       format_number(s.eta_c.mean), format_number(s.eta_c.std));
  }
  return csv;
}

struct SweepOptions {
  ModelParams base{3.0, 1.0, 1.0, 1.0, 1.0, 0.9, 1.0};
  std::string axis = "gain";
  std::string range = "1:10";
  std::size_t points = 200;
  std::string observables = "probe,conjugate,squeezed,antisqueezed";
};

std::string run_sweep(const SweepOptions& o, Format format) {
  SweepSpec spec;
  spec.base = o.base;
  const auto axis = parse_axis(o.axis);
  if (!axis) throw UsageError(fmt::format("--axis must be gain, vp2 or vc2, got '{}'", o.axis));
  spec.axis = *axis;
  std::tie(spec.lo, spec.hi) = parse_range(o.range);
  spec.n_points = o.points;
  spec.observables.clear();
  std::stringstream ss(o.observables);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto obs = parse_observable(item);
    if (!obs) throw UsageError(fmt::format("unknown observable '{}'", item));
    spec.observables.push_back(*obs);
  }

  SweepTable table;
  try {
    // Validate the fixed parameters at a representative point of the axis.
    ModelParams probe = spec.base;
    if (spec.axis == SweepAxis::kGain) probe.gain = std::max(spec.lo, 1.0);
    if (spec.axis == SweepAxis::kProbeVisibilitySq) probe.v_p = 1.0;
    if (spec.axis == SweepAxis::kConjugateVisibilitySq) probe.v_c = 1.0;
    probe.validate();
    table = sweep(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (format == Format::kJson) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "sweep";
    j["axis"] = std::string(to_string(spec.axis));
    const auto& b = spec.base;
    j["params"] = {{"gain", number(b.gain)}, {"eta_p", number(b.eta_p)}, {"eta_c", number(b.eta_c)},
                   {"v_p", number(b.v_p)},   {"v_c", number(b.v_c)},     {"eps_p", number(b.eps_p)},
                   {"eps_c", number(b.eps_c)}};
    ordered_json columns = ordered_json::array({std::string(to_string(spec.axis))});
    for (auto obs : spec.observables) {
      columns.push_back(fmt::format("{}_linear", to_string(obs)));
      columns.push_back(fmt::format("{}_db", to_string(obs)));
    }
    j["columns"] = std::move(columns);
    j["rows"] = ordered_json::array();
    for (const auto& r : table.rows) {
      ordered_json row = ordered_json::array({number(r.x)});
      for (auto obs : spec.observables) {
        row.push_back(number(select(r.noise, obs)));
        row.push_back(number(to_db(select(r.noise, obs))));
      }
      j["rows"].push_back(std::move(row));
    }
    for (auto obs : spec.observables) {
      if (obs != Observable::kSqueezed) continue;
      const Optimum best = locate_minimum(table, obs);
      j["optimum"] = {{"observable", "squeezed"},
                      {"x", number(best.x)},
                      {"linear", number(best.value)},
                      {"db", number(to_db(best.value))}};
    }
    return dump(j);
  }

  std::string csv(to_string(spec.axis));
  for (auto obs : spec.observables) csv += fmt::format(",{0}_linear,{0}_db", to_string(obs));
  csv += '\n';
  for (const auto& r : table.rows) {
    csv += format_number(r.x);
    for (auto obs : spec.observables) {
      const double v = select(r.noise, obs);
      csv += fmt::format(",{},{}", format_number(v), format_number(to_db(v)));
    }
    csv += '\n';
  }
  return csv;
}

std::string eval(const std::string& path, const std::vector<std::string>& sets, Format format) {
  const auto parsed = circuit::parse(read_file(path));
  if (!parsed) throw UsageError(fmt::format("{}: {}", path, parsed.diagnostic().format()));
  circuit::CircuitSpec spec = parsed.spec();

  std::vector<circuit::Override> overrides;
  for (const auto& s : sets) {
    const auto o = circuit::parse_override(s);
    if (!o) throw UsageError(fmt::format("--set expects <keyword>[:<mode>].<key>=<number>, got '{}'", s));
    overrides.push_back(*o);
  }
  try {
    circuit::apply_overrides(spec, overrides);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (const auto d = circuit::validate(spec)) {
    throw UsageError(fmt::format("{} after overrides: {}", path, d->format()));
  }
  const auto measured = circuit::evaluate(spec);

  if (format == Format::kJson) {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "eval";
    j["measurements"] = ordered_json::array();
    for (std::size_t i = 0; i < measured.size(); ++i) {
      j["measurements"].push_back({{"index", i},
                                   {"measurement", measured[i].description},
                                   {"variance", number(measured[i].variance)},
                                   {"variance_db", number(to_db(measured[i].variance))}});
    }
    return dump(j);
  }
  std::string csv = "index,measurement,variance,variance_db\n";
  for (std::size_t i = 0; i < measured.size(); ++i) {
    csv += fmt::format("{},{},{},{}\n", i, measured[i].description, format_number(measured[i].variance),
                       format_number(to_db(measured[i].variance)));
  }
  return csv;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  return fmt::format("{:.9g}", x);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homodyne noise model, estimator and circuit evaluator for two-mode squeezed light",
               "tmsq"};
  app.require_subcommand(1);

  double eps_p = 0.9;
  double eps_c = 1.0;
  std::string input;

  Common est_common{"", Format::kJson};
  auto* est = app.add_subcommand("estimate", "Invert measured noises into gain and transmissions");
  est->add_option("input", input, "Measurement CSV")->required();
  est->add_option("--eps-p", eps_p, "Probe thermal fraction")->check(CLI::Range(0.0, 1.0));
  est->add_option("--eps-c", eps_c, "Conjugate thermal fraction")->check(CLI::Range(0.0, 1.0));
  add_common(est, est_common);

  Common scan_common;
  std::string grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  auto* scan = app.add_subcommand("scan-eps", "Estimator scatter as a function of eps_p");
  scan->add_option("input", input, "Measurement CSV")->required();
  scan->add_option("--grid", grid, "Comma-separated eps_p values");
  scan->add_option("--eps-c", eps_c, "Conjugate thermal fraction")->check(CLI::Range(0.0, 1.0));
  add_common(scan, scan_common);

  Common sweep_common;
  SweepOptions so;
  auto* sw = app.add_subcommand("sweep", "Theory curves of the closed-form model");
  sw->add_option("--axis", so.axis, "gain | vp2 | vc2");
  sw->add_option("--range", so.range, "Axis range lo:hi");
  sw->add_option("--points", so.points, "Number of grid points")->check(CLI::Range(2, 10000000));
  sw->add_option("--gain", so.base.gain, "4WM intensity gain");
  sw->add_option("--eta-p", so.base.eta_p, "Probe transmittance");
  sw->add_option("--eta-c", so.base.eta_c, "Conjugate transmittance");
  sw->add_option("--v-p", so.base.v_p, "Probe visibility");
  sw->add_option("--v-c", so.base.v_c, "Conjugate visibility");
  sw->add_option("--eps-p", so.base.eps_p, "Probe thermal fraction");
  sw->add_option("--eps-c", so.base.eps_c, "Conjugate thermal fraction");
  sw->add_option("--observables", so.observables, "Comma-separated subset of probe,conjugate,squeezed,antisqueezed");
  add_common(sw, sweep_common);

  Common eval_common;
  std::vector<std::string> sets;
  auto* ev = app.add_subcommand("eval", "Evaluate a .qnet circuit");
  ev->add_option("circuit", input, "Circuit file")->required();
  ev->add_option("--set", sets, "Override, e.g. squeeze2.gain=3.5 or mix:p.eps=0.9");
  add_common(ev, eval_common);

  std::vector<std::string> argv_storage{"tmsq"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  try {
    if (est->parsed()) {
      emit(estimate(input, eps_p, eps_c, est_common.format), est_common.out_path, out);
    } else if (scan->parsed()) {
      emit(scan_eps(input, grid, eps_c, scan_common.format), scan_common.out_path, out);
    } else if (sw->parsed()) {
      emit(run_sweep(so, sweep_common.format), sweep_common.out_path, out);
    } else if (ev->parsed()) {
      emit(eval(input, sets, eval_common.format), eval_common.out_path, out);
    }
  } catch (const InfeasibleError& e) {
    err << "tmsq: infeasible estimation: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "tmsq: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace tmsq::cli
