#ifndef ECOGAME_MODEL_HPP
#define ECOGAME_MODEL_HPP

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ecogame/errors.hpp"

namespace ecogame {

/// 2x2 payoff matrix, rows/columns ordered (low consumer, high consumer):
/// {{R, S}, {T, P}}.
using PayoffMatrix = std::array<std::array<double, 2>, 2>;

struct PayoffMatrixPair {
  PayoffMatrix depleted{};  // R0 S0 / T0 P0
  PayoffMatrix abundant{};  // R1 S1 / T1 P1
};

/// Payoff differences that fully determine a population's game.
struct PolicyDeltas {
  double d_sp0 = 0.0;  // S0 - P0
  double d_rt0 = 0.0;  // R0 - T0
  double d_tr1 = 0.0;  // T1 - R1
  double d_ps1 = 0.0;  // P1 - S1

  friend bool operator==(const PolicyDeltas&, const PolicyDeltas&) = default;
};

struct PopulationSpec {
  PolicyDeltas deltas;
  double theta = 1.0;  // restoration rate of low consumers
  double alpha = 1.0;  // degradation rate of high consumers
};

/// g(x, n) = a*x*n + b*x + c*n + d.
struct GCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

struct SystemConfig {
  PopulationSpec pop1;
  PopulationSpec pop2;
  double epsilon = 0.1;
};

struct State {
  double x1 = 0.0;
  double x2 = 0.0;
  double n = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

inline constexpr double kStateClampTol = 1e-12;

inline PolicyDeltas deltas_from_matrices(const PayoffMatrixPair& m) {
  for (const auto* mat : {&m.depleted, &m.abundant}) {
    for (const auto& row : *mat) {
      for (double v : row) {
        if (!std::isfinite(v)) throw InvalidParameter("payoff matrix entry is not finite");
      }
    }
  }
  const auto& dep = m.depleted;
  const auto& abu = m.abundant;
  return PolicyDeltas{dep[0][1] - dep[1][1], dep[0][0] - dep[1][0], abu[1][0] - abu[0][0],
                      abu[1][1] - abu[0][1]};
}

/// Inverse of deltas_from_matrices with T0 = P0 = R1 = 0 pinned.
inline PayoffMatrixPair matrices_from_deltas(const PolicyDeltas& p) {
  PayoffMatrixPair m;
  m.depleted = {{{p.d_rt0, p.d_sp0}, {0.0, 0.0}}};
  m.abundant = {{{0.0, -p.d_ps1}, {p.d_tr1, 0.0}}};
  return m;
}

inline GCoefficients g_coefficients(const PolicyDeltas& p) {
  return GCoefficients{p.d_sp0 - p.d_rt0 + p.d_ps1 - p.d_tr1, p.d_rt0 - p.d_sp0,
                       -(p.d_ps1 + p.d_sp0), p.d_sp0};
}

/// Y = b*c - a*d = d_tr1*d_sp0 - d_rt0*d_ps1. Positive strictly below the
/// upper edge of the sustainable region.
inline double y_discriminant(const PolicyDeltas& p) {
  return p.d_tr1 * p.d_sp0 - p.d_rt0 * p.d_ps1;
}

/// Lower edge of the sustainable region: -(theta/alpha) * d_sp0, or -inf
/// when alpha == 0.
inline double sustainable_lower_edge(const PopulationSpec& p) {
  if (p.alpha == 0.0) return -std::numeric_limits<double>::infinity();
  return -(p.theta / p.alpha) * p.deltas.d_sp0;
}

inline double sustainable_upper_edge(const PolicyDeltas& p) {
  return (p.d_tr1 / p.d_ps1) * p.d_sp0;
}

/// Membership of (d_sp0, d_rt0) in the open sustainable region V for the
/// given rates. Evaluated in multiplied form so exact-boundary inputs land on
/// the boundary.
inline bool in_sustainable_region(const PopulationSpec& p) {
  const auto& d = p.deltas;
  return d.d_sp0 > 0.0 && p.alpha * d.d_rt0 + p.theta * d.d_sp0 > 0.0 && y_discriminant(d) > 0.0;
}

enum class ValidationMode { strict, warn };

struct Violation {
  std::string name;        // e.g. "pop1 not in V"
  std::string inequality;  // e.g. "d_sp0 > 0"
  bool on_boundary = false;  // the relation holds with equality
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

inline void check_strict(ValidationReport& r, bool holds, bool equal, std::string name,
                         std::string inequality) {
  if (!holds) r.violations.push_back({std::move(name), std::move(inequality), equal});
}

inline void check_population_basics(ValidationReport& r, const PopulationSpec& p,
                                    const std::string& who) {
  const auto& d = p.deltas;
  for (double v : {d.d_sp0, d.d_rt0, d.d_tr1, d.d_ps1, p.theta, p.alpha}) {
    if (!std::isfinite(v)) {
      r.violations.push_back({who + " parameters must be finite", "all entries finite", false});
      return;
    }
  }
  check_strict(r, p.theta > 0.0, p.theta == 0.0, who + " theta must be positive", "theta > 0");
  check_strict(r, p.alpha >= 0.0, false, who + " alpha must be nonnegative", "alpha >= 0");
  check_strict(r, d.d_tr1 > 0.0, d.d_tr1 == 0.0, who + " abundant game must favor high consumption",
               "d_tr1 > 0");
  check_strict(r, d.d_ps1 > 0.0, d.d_ps1 == 0.0, who + " abundant game must favor high consumption",
               "d_ps1 > 0");
  check_strict(r, d.d_sp0 > -d.d_ps1, d.d_sp0 == -d.d_ps1, who + " dg/dn must be negative",
               "d_sp0 > -d_ps1");
  check_strict(r, d.d_rt0 > -d.d_tr1, d.d_rt0 == -d.d_tr1, who + " dg/dn must be negative",
               "d_rt0 > -d_tr1");
}

}  // namespace detail

/// Checks the standing assumptions: abundant-state dominance of high
/// consumption, negative dg/dn, population 1 inside V and population 2
/// irresponsible. Region inequalities are strict; equality is reported with
/// `on_boundary` set. In strict mode the first violation is thrown.
inline ValidationReport validate(const SystemConfig& cfg, ValidationMode mode = ValidationMode::strict) {
  ValidationReport r;
  if (!std::isfinite(cfg.epsilon) || !(cfg.epsilon > 0.0)) {
    r.violations.push_back({"epsilon must be positive", "epsilon > 0", cfg.epsilon == 0.0});
  }
  detail::check_population_basics(r, cfg.pop1, "pop1");
  detail::check_population_basics(r, cfg.pop2, "pop2");

  const auto& p1 = cfg.pop1.deltas;
  const double lower = cfg.pop1.alpha * p1.d_rt0 + cfg.pop1.theta * p1.d_sp0;
  const double y = y_discriminant(p1);
  detail::check_strict(r, p1.d_sp0 > 0.0, p1.d_sp0 == 0.0, "pop1 not in V", "d_sp0 > 0");
  detail::check_strict(r, lower > 0.0, lower == 0.0, "pop1 not in V",
                       "d_rt0 > -(theta/alpha)*d_sp0");
  detail::check_strict(r, y > 0.0, y == 0.0, "pop1 not in V", "d_rt0 < (d_tr1/d_ps1)*d_sp0");

  const auto& p2 = cfg.pop2.deltas;
  detail::check_strict(r, p2.d_sp0 < 0.0, p2.d_sp0 == 0.0, "pop2 d_sp0 must be negative",
                       "d_sp0 < 0");
  detail::check_strict(r, p2.d_rt0 < 0.0, p2.d_rt0 == 0.0, "pop2 d_rt0 must be negative",
                       "d_rt0 < 0");

  if (mode == ValidationMode::strict && !r.ok()) {
    const auto& v = r.violations.front();
    throw AssumptionViolation(v.name, v.inequality);
  }
  return r;
}

/// Reference configuration used in the worked examples: population 1 on
/// policy (3, -0.5) with d_tr1 = 10, d_ps1 = 6, theta1 = 0.75, alpha1 = 1,
/// epsilon = 0.1. Population 2's payoffs and theta2 are not pinned by the
/// model's published values; the defaults here (d_sp0 = d_rt0 = -1, same
/// abundant game, theta2 = 0.75) only affect transients since x2 -> 0.
inline SystemConfig reference_config(double alpha2 = 0.25) {
  SystemConfig cfg;
  cfg.pop1 = PopulationSpec{PolicyDeltas{3.0, -0.5, 10.0, 6.0}, 0.75, 1.0};
  cfg.pop2 = PopulationSpec{PolicyDeltas{-1.0, -1.0, 10.0, 6.0}, 0.75, alpha2};
  cfg.epsilon = 0.1;
  return cfg;
}

}  // namespace ecogame

#endif  // ECOGAME_MODEL_HPP
