// ecogame: command-line front end for the two-population feedback-evolving
// game engine. See README.md for the command reference.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ecogame/ecogame.hpp"
#include "ecogame/io.hpp"

namespace fs = std::filesystem;
using namespace ecogame;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalFailure = 3, kBoundaryRefusal = 4 };

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::string validation;
};

RunConfig load_config(const GlobalOptions& g) {
  RunConfig rc = g.config_path.empty() ? RunConfig{} : load_run_config(g.config_path);
  if (g.seed) rc.seed = *g.seed;
  if (!g.out.empty()) rc.output_path = g.out;
  if (g.validation == "strict") rc.validation = ValidationMode::strict;
  if (g.validation == "warn") rc.validation = ValidationMode::warn;
  return rc;
}

// Runs validation in the configured mode; warn mode reports to stderr.
ValidationReport check_config(const RunConfig& rc) {
  auto report = validate(rc.system, rc.validation);
  for (const auto& v : report.violations) {
    std::cerr << "warning: " << v.name << " (" << v.inequality << ")" << (v.on_boundary ? " [boundary]" : "") << '\n';
  }
  return report;
}

json violations_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& v : r.violations) {
    out.push_back({{"name", v.name}, {"inequality", v.inequality}, {"on_boundary", v.on_boundary}});
  }
  return out;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  write(f);
}

State parse_initial_state(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_number(item, "--ic"));
  if (v.size() != 3) throw ConfigError("--ic expects x1,x2,n");
  for (double c : v) {
    if (c < 0.0 || c > 1.0) throw ConfigError("--ic coordinates must lie in [0, 1]");
  }
  return {v[0], v[1], v[2]};
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string ic;
  std::size_t random_ics = 0;
  std::optional<std::size_t> record_stride;
};

int cmd_simulate(const GlobalOptions& g, const SimulateOptions& o) {
  RunConfig rc = load_config(g);
  if (o.record_stride) rc.integrator.record_stride = *o.record_stride;
  rc.integrator.check();
  check_config(rc);

  std::vector<State> initial;
  if (!o.ic.empty() && o.random_ics > 0) throw ConfigError("use either --ic or --random-ics");
  if (!o.ic.empty()) {
    initial.push_back(parse_initial_state(o.ic));
  } else if (o.random_ics > 0) {
    initial = random_initial_states(rc.seed, o.random_ics);
  } else {
    throw ConfigError("simulate needs --ic x1,x2,n or --random-ics K");
  }

  std::vector<Trajectory> trajectories(initial.size());
  parallel_for(initial.size(), [&](std::size_t i) { trajectories[i] = integrate(rc.system, initial[i], rc.integrator); });

  const bool to_dir = !rc.output_path.empty();
  if (g.format == "csv" && !to_dir) {
    if (trajectories.size() != 1) throw ConfigError("CSV to stdout needs a single trajectory; pass --out DIR");
    write_trajectory_csv(std::cout, trajectories.front());
    return kOk;
  }
  if (to_dir) fs::create_directories(rc.output_path);

  json summary{{"seed", rc.seed}, {"trajectories", json::array()}};
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto& t = trajectories[i];
    const auto label = classify_trajectory(t, rc.system);
    json entry{{"index", i},
               {"initial_state", to_json(initial[i])},
               {"outcome", std::string(to_string(label.kind))},
               {"n_final", label.n_final},
               {"final_state", to_json(t.final_state())},
               {"t_final", t.final_time()},
               {"terminal_reason", std::string(to_string(t.terminal_reason))},
               {"initial_condition_dependent", label.initial_condition_dependent},
               {"steps", t.steps}};
    if (to_dir) {
      char name[32];
      std::snprintf(name, sizeof name, "traj_%03zu.csv", i);
      const auto path = (fs::path(rc.output_path) / name).string();
      std::ofstream f(path);
      if (!f) throw ConfigError("cannot write " + path);
      write_trajectory_csv(f, t);
      entry["csv"] = name;
    }
    summary["trajectories"].push_back(std::move(entry));
  }
  if (to_dir) {
    std::ofstream f(fs::path(rc.output_path) / "summary.json");
    write_json(f, summary);
  }
  write_json(std::cout, summary);
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_classify(const GlobalOptions& g, int single_pop) {
  const RunConfig rc = load_config(g);
  if (g.format != "json") throw ConfigError("classify emits json only");
  if (single_pop != 0) {
    const auto& pop = single_pop == 1 ? rc.system.pop1 : rc.system.pop2;
    json out = to_json(classify_single_population(pop));
    out["population"] = single_pop;
    emit(rc.output_path, [&](std::ostream& os) { write_json(os, out); });
    return kOk;
  }
  const auto report = check_config(rc);
  json out;
  if (report.ok()) {
    out = to_json(classify_two_population(rc.system));
  } else {
    out = json{{"regime", nullptr}, {"violations", violations_json(report)}};
  }
  out["fixed_points"] = to_json(enumerate_fixed_points(rc.system));
  emit(rc.output_path, [&](std::ostream& os) { write_json(os, out); });
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_optimize(const GlobalOptions& g, const std::string& curve_path) {
  const RunConfig rc = load_config(g);
  const auto& pop1 = rc.system.pop1;
  if (!in_exploit_domain(pop1)) throw OutOfRegion("population 1 policy is not sustainable");
  if (!curve_path.empty()) {
    std::ofstream f(curve_path);
    if (!f) throw ConfigError("cannot write " + curve_path);
    write_utility_curve_csv(f, pop1);
  }
  if (g.format == "csv") {
    emit(rc.output_path, [&](std::ostream& os) { write_utility_curve_csv(os, pop1); });
    return kOk;
  }
  json out = to_json(optimal_consumption(pop1));
  out["threshold_c"] = threshold_c(pop1);
  emit(rc.output_path, [&](std::ostream& os) { write_json(os, out); });
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_sensitivity(const GlobalOptions& g, const std::string& grid) {
  const RunConfig rc = load_config(g);
  const auto& pop1 = rc.system.pop1;
  if (grid.empty()) {
    json out = to_json(resource_sensitivities(pop1));
    out["d_sp0"] = pop1.deltas.d_sp0;
    out["d_rt0"] = pop1.deltas.d_rt0;
    emit(rc.output_path, [&](std::ostream& os) { write_json(os, out); });
    return kOk;
  }
  const auto comma = grid.find(',');
  if (comma == std::string::npos) throw ConfigError("--grid expects sp0_min:sp0_max:steps,rt0_min:rt0_max:steps");
  const auto sp0 = parse_range(grid.substr(0, comma));
  const auto rt0 = parse_range(grid.substr(comma + 1));
  const auto cells = sensitivity_ratio_map(pop1, sp0, rt0);
  emit(rc.output_path, [&](std::ostream& os) { write_sensitivity_csv(os, cells); });
  return kOk;
}

// ---------------------------------------------------------------------------

using Setter = std::function<void(SystemConfig&, double)>;

const std::map<std::string, Setter>& sweep_parameters() {
  static const std::map<std::string, Setter> params{
      {"alpha1", [](SystemConfig& c, double v) { c.pop1.alpha = v; }},
      {"alpha2", [](SystemConfig& c, double v) { c.pop2.alpha = v; }},
      {"theta1", [](SystemConfig& c, double v) { c.pop1.theta = v; }},
      {"theta2", [](SystemConfig& c, double v) { c.pop2.theta = v; }},
      {"epsilon", [](SystemConfig& c, double v) { c.epsilon = v; }},
      {"d_sp0", [](SystemConfig& c, double v) { c.pop1.deltas.d_sp0 = v; }},
      {"d_rt0", [](SystemConfig& c, double v) { c.pop1.deltas.d_rt0 = v; }},
      {"d_tr1", [](SystemConfig& c, double v) { c.pop1.deltas.d_tr1 = v; }},
      {"d_ps1", [](SystemConfig& c, double v) { c.pop1.deltas.d_ps1 = v; }},
  };
  return params;
}

struct SweepAxis {
  std::string name;
  Setter set;
  std::vector<double> values;
};

SweepAxis parse_vary(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("--vary expects name=lo:hi:steps");
  const auto name = spec.substr(0, eq);
  const auto& params = sweep_parameters();
  const auto it = params.find(name);
  if (it == params.end()) throw ConfigError("unknown sweep parameter '" + name + "'");
  return {name, it->second, parse_range(spec.substr(eq + 1))};
}

std::string sweep_row(const SystemConfig& cfg) {
  std::string regime = "invalid", x1_star, n_star, alpha2_star, r_star, u_star;
  try {
    const auto label = classify_two_population(cfg);
    regime = to_string(label.kind);
    if (label.kind == Regime2Pop::sustained) {
      x1_star = format_double(label.x1_star);
      n_star = format_double(label.n_star);
    }
  } catch (const AssumptionViolation&) {
  }
  if (in_exploit_domain(cfg.pop1)) {
    const auto r = optimal_consumption(cfg.pop1);
    alpha2_star = format_double(r.alpha2_star);
    r_star = format_double(r.resource);
    u_star = format_double(r.utility);
  }
  return regime + ',' + x1_star + ',' + n_star + ',' + alpha2_star + ',' + r_star + ',' + u_star;
}

int cmd_sweep(const GlobalOptions& g, const std::vector<std::string>& vary) {
  const RunConfig rc = load_config(g);
  if (vary.empty() || vary.size() > 2) throw ConfigError("sweep needs one or two --vary specifications");
  std::vector<SweepAxis> axes;
  for (const auto& v : vary) axes.push_back(parse_vary(v));
  const std::size_t inner = axes.size() == 2 ? axes[1].values.size() : 1;
  const std::size_t total = axes[0].values.size() * inner;

  std::vector<std::string> rows(total);
  parallel_for(total, [&](std::size_t k) {
    SystemConfig cfg = rc.system;
    const double v0 = axes[0].values[k / inner];
    axes[0].set(cfg, v0);
    std::string prefix = format_double(v0) + ',';
    if (axes.size() == 2) {
      const double v1 = axes[1].values[k % inner];
      axes[1].set(cfg, v1);
      prefix += format_double(v1) + ',';
    }
    rows[k] = prefix + sweep_row(cfg);
  });

  emit(rc.output_path, [&](std::ostream& os) {
    os << (axes.size() == 2 ? "varied_value,varied_value_2," : "varied_value,")
       << "regime,x1_star,n_star,alpha2_star,R_star,U_star\n";
    for (const auto& r : rows) os << r << '\n';
  });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ecogame: two-population feedback-evolving game analysis"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for random initial states");
  app.add_option("--out", g.out, "Output file (directory for simulate)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--validation", g.validation, "Assumption checking mode")->check(CLI::IsMember({"strict", "warn"}));

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate trajectories and summarize outcomes");
  simulate->fallthrough();
  simulate->add_option("--ic", sim.ic, "Initial state x1,x2,n");
  simulate->add_option("--random-ics", sim.random_ics, "Number of seeded random initial states");
  simulate->add_option("--record-stride", sim.record_stride, "Keep every k-th step in trajectory CSVs");

  int single_pop = 0;
  auto* classify = app.add_subcommand("classify", "Analytic regime and fixed-point report");
  classify->fallthrough();
  classify->add_option("--single-pop", single_pop, "Classify one population in isolation")->check(CLI::IsMember({1, 2}));

  std::string curve_path;
  auto* optimize = app.add_subcommand("optimize", "Optimal consumption rate of population 2");
  optimize->fallthrough();
  optimize->add_option("--curve", curve_path, "Also write the alpha2,R,U curve CSV here");

  std::string grid;
  auto* sensitivity = app.add_subcommand("sensitivity", "Resource sensitivities to policy incentives");
  sensitivity->fallthrough();
  sensitivity->add_option("--grid", grid, "sp0_min:sp0_max:steps,rt0_min:rt0_max:steps");

  std::vector<std::string> vary;
  auto* sweep = app.add_subcommand("sweep", "Deterministic parameter sweep");
  sweep->fallthrough();
  sweep->add_option("--vary", vary, "name=lo:hi:steps (repeat for a 2-D grid)")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(g, sim);
    if (*classify) return cmd_classify(g, single_pop);
    if (*optimize) return cmd_optimize(g, curve_path);
    if (*sensitivity) return cmd_sensitivity(g, grid);
    if (*sweep) return cmd_sweep(g, vary);
  } catch (const BoundaryPolicy& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBoundaryRefusal;
  } catch (const NonFiniteState& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const DegenerateDenominator& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    // configuration, assumption and region errors
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
