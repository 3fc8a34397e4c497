#ifndef ECOGAME_IO_HPP
#define ECOGAME_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ecogame/dynamics.hpp"
#include "ecogame/equilibria.hpp"
#include "ecogame/errors.hpp"
#include "ecogame/exploit.hpp"
#include "ecogame/model.hpp"
#include "ecogame/numeric.hpp"
#include "ecogame/sensitivity.hpp"

namespace ecogame {

using json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_json_string(std::ostream& os, const std::string& s) {
  os << json(s).dump();
}

inline void write_json_value(std::ostream& os, const json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent >= 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        write_json_string(os, key);
        os << (indent >= 0 ? ": " : ":");
        write_json_value(os, value, indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        write_json_value(os, value, indent, depth + 1);
      }
      pad(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        std::string s = format_double(v);
        // keep it a JSON float so readers do not narrow it to an integer
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        os << s;
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// JSON emitter writing every float with 17 significant digits. Non-finite
/// floats become null.
inline void write_json(std::ostream& os, const json& j, int indent = 2) {
  detail::write_json_value(os, j, indent, 0);
  os << '\n';
}

inline std::string dump_json(const json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  SystemConfig system = reference_config();
  IntegratorSettings integrator;
  ValidationMode validation = ValidationMode::strict;
  std::uint64_t seed = 1;
  std::string output_path;
};

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

inline double number_at(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + " must be finite");
  return d;
}

inline PayoffMatrix matrix_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + " must be a 2x2 array");
  PayoffMatrix m{};
  for (std::size_t r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) throw ConfigError(where + " must be a 2x2 array");
    for (std::size_t c = 0; c < 2; ++c) {
      if (!j[r][c].is_number()) throw ConfigError(where + " entries must be numbers");
      m[r][c] = j[r][c].get<double>();
    }
  }
  return m;
}

inline PopulationSpec parse_population(const json& j, PopulationSpec base, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(j, {"d_sp0", "d_rt0", "d_tr1", "d_ps1", "theta", "alpha", "payoffs"}, where);
  if (j.contains("payoffs")) {
    const auto& pm = j.at("payoffs");
    if (!pm.is_object() || !pm.contains("depleted") || !pm.contains("abundant")) {
      throw ConfigError(where + ".payoffs needs 'depleted' and 'abundant'");
    }
    reject_unknown_keys(pm, {"depleted", "abundant"}, where + ".payoffs");
    for (auto key : {"d_sp0", "d_rt0", "d_tr1", "d_ps1"}) {
      if (j.contains(key)) throw ConfigError(where + " cannot mix payoffs with " + key);
    }
    try {
      base.deltas = deltas_from_matrices(
          {matrix_at(pm.at("depleted"), where + ".payoffs.depleted"), matrix_at(pm.at("abundant"), where + ".payoffs.abundant")});
    } catch (const InvalidParameter& e) {
      throw ConfigError(where + ".payoffs: " + e.what());
    }
  }
  auto& d = base.deltas;
  d.d_sp0 = number_at(j, "d_sp0", d.d_sp0, where);
  d.d_rt0 = number_at(j, "d_rt0", d.d_rt0, where);
  d.d_tr1 = number_at(j, "d_tr1", d.d_tr1, where);
  d.d_ps1 = number_at(j, "d_ps1", d.d_ps1, where);
  base.theta = number_at(j, "theta", base.theta, where);
  base.alpha = number_at(j, "alpha", base.alpha, where);
  return base;
}

inline IntegratorSettings parse_integrator(const json& j, IntegratorSettings s) {
  if (!j.is_object()) throw ConfigError("integrator must be an object");
  reject_unknown_keys(j, {"method", "dt", "rel_tol", "abs_tol", "t_max", "convergence_window", "convergence_eps", "record_stride"},
                      "integrator");
  if (j.contains("method")) {
    const auto m = j.at("method").get<std::string>();
    if (m == "rk4_fixed") {
      s.method = IntegratorMethod::rk4_fixed;
    } else if (m == "rk45_adaptive") {
      s.method = IntegratorMethod::rk45_adaptive;
    } else {
      throw ConfigError("integrator.method must be rk4_fixed or rk45_adaptive");
    }
  }
  s.dt = number_at(j, "dt", s.dt, "integrator");
  s.rel_tol = number_at(j, "rel_tol", s.rel_tol, "integrator");
  s.abs_tol = number_at(j, "abs_tol", s.abs_tol, "integrator");
  s.t_max = number_at(j, "t_max", s.t_max, "integrator");
  s.convergence_window = number_at(j, "convergence_window", s.convergence_window, "integrator");
  s.convergence_eps = number_at(j, "convergence_eps", s.convergence_eps, "integrator");
  if (j.contains("record_stride")) {
    const auto& v = j.at("record_stride");
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) throw ConfigError("integrator.record_stride must be a positive integer");
    s.record_stride = v.get<std::size_t>();
  }
  try {
    s.check();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  return s;
}

}  // namespace detail

/// Parses a run configuration. Every key is optional; absent keys keep the
/// reference configuration's values. Unknown keys are rejected.
inline RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  detail::reject_unknown_keys(j, {"pop1", "pop2", "epsilon", "integrator", "seed", "output_path", "validation"}, "config");
  RunConfig rc;
  try {
    if (j.contains("pop1")) rc.system.pop1 = detail::parse_population(j.at("pop1"), rc.system.pop1, "pop1");
    if (j.contains("pop2")) rc.system.pop2 = detail::parse_population(j.at("pop2"), rc.system.pop2, "pop2");
    rc.system.epsilon = detail::number_at(j, "epsilon", rc.system.epsilon, "config");
    if (j.contains("integrator")) rc.integrator = detail::parse_integrator(j.at("integrator"), rc.integrator);
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
      rc.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output_path")) rc.output_path = j.at("output_path").get<std::string>();
    if (j.contains("validation")) {
      const auto v = j.at("validation").get<std::string>();
      if (v == "strict") {
        rc.validation = ValidationMode::strict;
      } else if (v == "warn") {
        rc.validation = ValidationMode::warn;
      } else {
        throw ConfigError("validation must be strict or warn");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse_run_config(j);
}

inline json to_json(const RunConfig& rc) {
  auto pop = [](const PopulationSpec& p) {
    return json{{"d_sp0", p.deltas.d_sp0}, {"d_rt0", p.deltas.d_rt0}, {"d_tr1", p.deltas.d_tr1},
                {"d_ps1", p.deltas.d_ps1}, {"theta", p.theta},        {"alpha", p.alpha}};
  };
  const auto& s = rc.integrator;
  return json{{"pop1", pop(rc.system.pop1)},
              {"pop2", pop(rc.system.pop2)},
              {"epsilon", rc.system.epsilon},
              {"integrator",
               {{"method", s.method == IntegratorMethod::rk4_fixed ? "rk4_fixed" : "rk45_adaptive"},
                {"dt", s.dt},
                {"rel_tol", s.rel_tol},
                {"abs_tol", s.abs_tol},
                {"t_max", s.t_max},
                {"convergence_window", s.convergence_window},
                {"convergence_eps", s.convergence_eps},
                {"record_stride", s.record_stride}}},
              {"seed", rc.seed},
              {"output_path", rc.output_path},
              {"validation", rc.validation == ValidationMode::strict ? "strict" : "warn"}};
}

// ---------------------------------------------------------------------------
// Range specifications

inline double parse_number(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ConfigError("malformed number '" + std::string(s) + "' in " + what);
  return v;
}

/// "lo:hi:steps" -> `steps` evenly spaced values on [lo, hi].
inline std::vector<double> parse_range(std::string_view spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
  if (second == std::string_view::npos || spec.find(':', second + 1) != std::string_view::npos) {
    throw ConfigError("range must look like lo:hi:steps, got '" + std::string(spec) + "'");
  }
  const double lo = parse_number(spec.substr(0, first), "range");
  const double hi = parse_number(spec.substr(first + 1, second - first - 1), "range");
  const auto steps_text = spec.substr(second + 1);
  std::size_t steps = 0;
  auto [ptr, ec] = std::from_chars(steps_text.data(), steps_text.data() + steps_text.size(), steps);
  if (ec != std::errc() || ptr != steps_text.data() + steps_text.size() || steps == 0) {
    throw ConfigError("range step count must be a positive integer, got '" + std::string(steps_text) + "'");
  }
  if (steps > 1 && !(lo < hi)) throw ConfigError("range needs lo < hi");
  return linspace(lo, hi, steps);
}

// ---------------------------------------------------------------------------
// JSON views of results

inline json to_json(const State& s) { return json::array({s.x1, s.x2, s.n}); }

inline json to_json(const Eigenvalues3& ev) {
  json out = json::array();
  for (const auto& l : ev) out.push_back(json::array({l.real(), l.imag()}));
  return out;
}

inline json to_json(const FixedPointRecord& r) {
  json j{{"table_row", std::string(to_string(r.table_row))},
         {"point", to_json(r.point)},
         {"exists", r.exists},
         {"eigenvalues", r.exists ? to_json(r.eigenvalues) : json(nullptr)},
         {"stability", std::string(to_string(r.stability.kind))}};
  if (r.stability.kind == StabilityKind::line_attracting) j["n_max"] = r.stability.n_max;
  if (r.n_range) j["n_range"] = json::array({(*r.n_range)[0], (*r.n_range)[1]});
  return j;
}

inline json to_json(const std::vector<FixedPointRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(to_json(r));
  return out;
}

inline json to_json(const RegimeLabel2Pop& l) {
  json j{{"regime", std::string(to_string(l.kind))}, {"item", std::string(l.item)}};
  if (l.kind == Regime2Pop::sustained) {
    j["x1_star"] = l.x1_star;
    j["n_star"] = l.n_star;
  }
  if (l.kind == Regime2Pop::line_segment) j["n_max"] = l.n_max;
  return j;
}

inline json to_json(const RegimeLabel1Pop& l) {
  json j{{"regime", std::string(to_string(l.kind))}};
  if (l.kind == Regime1Pop::sustained) {
    j["x_star"] = l.x_star;
    j["n_star"] = l.n_star;
  }
  return j;
}

inline json to_json(const ExploitResult& r) {
  return json{{"alpha2_star", r.alpha2_star}, {"resource", r.resource},
              {"utility", r.utility},         {"branch", std::string(to_string(r.branch))},
              {"support_upper", r.support_upper}};
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const SensitivityReport& r) {
  return json{{"region", std::string(to_string(r.region))},
              {"dR_dsp0", r.dR_dsp0},
              {"dR_drt0", r.dR_drt0},
              {"rho", optional_number(r.rho)},
              {"phi", optional_number(r.phi)}};
}

// ---------------------------------------------------------------------------
// CSV emitters

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "t,x1,x2,n\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    const auto& s = t.states[i];
    os << format_double(t.times[i]) << ',' << format_double(s.x1) << ',' << format_double(s.x2) << ','
       << format_double(s.n) << '\n';
  }
}

inline void write_sensitivity_csv(std::ostream& os, std::span<const SensitivityCell> cells) {
  os << "d_sp0,d_rt0,region,dR_dsp0,dR_drt0,rho\n";
  for (const auto& c : cells) {
    os << format_double(c.d_sp0) << ',' << format_double(c.d_rt0) << ',';
    if (c.report) {
      const auto& r = *c.report;
      os << to_string(r.region) << ',' << format_double(r.dR_dsp0) << ',' << format_double(r.dR_drt0) << ','
         << (r.rho ? format_double(*r.rho) : std::string());
    } else {
      os << ",,,";
    }
    os << '\n';
  }
}

/// alpha2,R,U sampled on [0, theta1 + 0.25] with step 1e-3.
inline void write_utility_curve_csv(std::ostream& os, const PopulationSpec& pop1, double step = 1e-3) {
  os << "alpha2,R,U\n";
  const double top = pop1.theta + 0.25;
  const auto count = static_cast<std::size_t>(std::floor(top / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    const double a = static_cast<double>(i) * step;
    const double r = resource_function(pop1, a);
    os << format_double(a) << ',' << format_double(r) << ',' << format_double(a * r) << '\n';
  }
}

}  // namespace ecogame

#endif  // ECOGAME_IO_HPP
