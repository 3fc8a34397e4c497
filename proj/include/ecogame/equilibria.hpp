#ifndef ECOGAME_EQUILIBRIA_HPP
#define ECOGAME_EQUILIBRIA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "ecogame/dynamics.hpp"
#include "ecogame/errors.hpp"
#include "ecogame/model.hpp"
#include "ecogame/numeric.hpp"

namespace ecogame {

inline constexpr double kHyperbolicTol = 1e-12;
inline constexpr double kPolicyBoundaryTol = 1e-12;

struct SustainedPoint {
  double x1_star = 0.0;
  double n_star = 0.0;
};

/// Interior resource equilibrium on the x2 = 0 face:
/// x1* = (alpha1 + alpha2) / (alpha1 + theta1), n* = -g1(x1*, 0) / g1_n(x1*).
/// n* is not range-checked.
inline SustainedPoint sustained_fixed_point(const PopulationSpec& pop1, double alpha2) {
  const auto g = g_coefficients(pop1.deltas);
  const double x = (pop1.alpha + alpha2) / (pop1.alpha + pop1.theta);
  const double slope = payoff_slope_n(g, x);
  if (slope == 0.0) throw DegenerateDenominator("dg1/dn vanishes at x1*");
  return {x, -payoff_difference(g, x, 0.0) / slope};
}

/// d n* / d alpha2 from the mixed-partial form
/// [g1(x*,0) g1_nx - g1_x(x*,0) g1_n(x*)] / ((alpha1+theta1) g1_n(x*)^2),
/// which equals -Y / ((alpha1+theta1) g1_n(x*)^2).
inline double n_star_derivative(const PopulationSpec& pop1, double alpha2) {
  const auto g = g_coefficients(pop1.deltas);
  const double x = (pop1.alpha + alpha2) / (pop1.alpha + pop1.theta);
  const double slope = payoff_slope_n(g, x);
  if (slope == 0.0) throw DegenerateDenominator("dg1/dn vanishes at x1*");
  const double numerator = payoff_difference(g, x, 0.0) * g.a - payoff_slope_x(g, 0.0) * slope;
  return numerator / ((pop1.alpha + pop1.theta) * slope * slope);
}

enum class TableRow { zA, zB, zC1, zC2, zC3, zC4, line_segment, interior_abundant };

inline std::string_view to_string(TableRow r) {
  switch (r) {
    case TableRow::zA: return "zA";
    case TableRow::zB: return "zB";
    case TableRow::zC1: return "zC1";
    case TableRow::zC2: return "zC2";
    case TableRow::zC3: return "zC3";
    case TableRow::zC4: return "zC4";
    case TableRow::line_segment: return "line_segment";
    case TableRow::interior_abundant: return "interior_abundant";
  }
  return "unknown";
}

enum class StabilityKind { stable, unstable, non_hyperbolic, line_attracting, not_applicable };

inline std::string_view to_string(StabilityKind s) {
  switch (s) {
    case StabilityKind::stable: return "stable";
    case StabilityKind::unstable: return "unstable";
    case StabilityKind::non_hyperbolic: return "non_hyperbolic";
    case StabilityKind::line_attracting: return "line_attracting";
    case StabilityKind::not_applicable: return "not_applicable";
  }
  return "unknown";
}

struct Stability {
  StabilityKind kind = StabilityKind::not_applicable;
  /// Upper end of the attracting sub-segment for line_attracting.
  double n_max = 0.0;
};

struct FixedPointRecord {
  TableRow table_row = TableRow::zA;
  /// For the line segment this is the representative point at which the
  /// eigenvalues were evaluated.
  State point;
  /// n-range spanned by the line segment row.
  std::optional<std::array<double, 2>> n_range;
  bool exists = false;
  /// Only meaningful when `exists`.
  Eigenvalues3 eigenvalues{};
  Stability stability;
};

/// Hyperbolic verdict: non_hyperbolic if some |Re| <= 1e-12, stable if every
/// Re < -1e-12, unstable otherwise.
inline StabilityKind classify_eigenvalues(const Eigenvalues3& ev) {
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& l : ev) {
    if (std::abs(l.real()) <= kHyperbolicTol) return StabilityKind::non_hyperbolic;
    max_re = std::max(max_re, l.real());
  }
  return max_re < -kHyperbolicTol ? StabilityKind::stable : StabilityKind::unstable;
}

/// Closed-form spectrum at zA: the x2-direction root g2(0, n*) and the pair
/// 1/2 [ g1_x(n*) v - +/- sqrt(g1_x(n*)^2 v^2 - 4 eps K) ] with v = x1*(1-x1*)
/// and K = n*(1-n*)(theta1+alpha1) v |g1_n(x1*)|.
inline Eigenvalues3 z_a_eigenvalues(const SystemConfig& cfg) {
  const auto g1 = g_coefficients(cfg.pop1.deltas);
  const auto g2 = g_coefficients(cfg.pop2.deltas);
  const auto [x, n] = sustained_fixed_point(cfg.pop1, cfg.pop2.alpha);
  const double v = x * (1.0 - x);
  const double k = n * (1.0 - n) * (cfg.pop1.theta + cfg.pop1.alpha) * v * std::abs(payoff_slope_n(g1, x));
  const double tr = payoff_slope_x(g1, n) * v;
  const std::complex<double> root = std::sqrt(std::complex<double>(tr * tr - 4.0 * cfg.epsilon * k));
  Eigenvalues3 ev{std::complex<double>(payoff_difference(g2, 0.0, n)), 0.5 * (tr + root), 0.5 * (tr - root)};
  sort_eigenvalues(ev);
  return ev;
}

namespace detail {

inline bool in_unit_cube(const State& s) {
  auto in = [](double v) { return v >= 0.0 && v <= 1.0; };
  return in(s.x1) && in(s.x2) && in(s.n);
}

inline FixedPointRecord isolated_point(const VectorField& f, TableRow row, const State& p, bool exists) {
  FixedPointRecord rec;
  rec.table_row = row;
  rec.point = p;
  rec.exists = exists && in_unit_cube(p);
  if (rec.exists) {
    rec.eigenvalues = eigenvalues(f.jacobian(to_vec(p)));
    rec.stability.kind = classify_eigenvalues(rec.eigenvalues);
  }
  return rec;
}

}  // namespace detail

/// All fixed points of the form (x1, 0, n), in table order
/// zA, zB, zC1..zC4, line segment, interior abundant.
inline std::vector<FixedPointRecord> enumerate_fixed_points(const SystemConfig& cfg) {
  const VectorField f(cfg);
  const auto& g1 = f.g1();
  const auto& p1 = cfg.pop1;
  const double alpha2 = cfg.pop2.alpha;
  std::vector<FixedPointRecord> out;
  out.reserve(8);

  // zA: h = 0 and g1 = 0 off the n = 0 edge.
  {
    FixedPointRecord rec;
    rec.table_row = TableRow::zA;
    const double x = (p1.alpha + alpha2) / (p1.alpha + p1.theta);
    const double slope = payoff_slope_n(g1, x);
    if (slope != 0.0) {
      const double n = -payoff_difference(g1, x, 0.0) / slope;
      rec.point = {x, 0.0, n};
      // n* > 0 in multiplied form: b1 (alpha1+alpha2) + d1 (alpha1+theta1) > 0.
      const double lift = g1.b * (p1.alpha + alpha2) + g1.d * (p1.alpha + p1.theta);
      const bool positive = slope < 0.0 ? lift > 0.0 : lift < 0.0;
      rec.exists = alpha2 < p1.theta && positive && n <= 1.0 && detail::in_unit_cube(rec.point);
      if (rec.exists) {
        rec.eigenvalues = z_a_eigenvalues(cfg);
        rec.stability.kind = classify_eigenvalues(rec.eigenvalues);
      }
    }
    out.push_back(rec);
  }

  // zB: g1(x, 0) = 0 on the n = 0 edge.
  {
    const bool defined = g1.b != 0.0;
    const State p{defined ? -g1.d / g1.b : std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
    out.push_back(detail::isolated_point(f, TableRow::zB, p, defined));
  }

  out.push_back(detail::isolated_point(f, TableRow::zC1, {0.0, 0.0, 0.0}, true));
  out.push_back(detail::isolated_point(f, TableRow::zC2, {0.0, 0.0, 1.0}, true));
  out.push_back(detail::isolated_point(f, TableRow::zC3, {1.0, 0.0, 0.0}, true));
  out.push_back(detail::isolated_point(f, TableRow::zC4, {1.0, 0.0, 1.0}, true));

  // Line of equilibria (1, 0, n), present only when alpha2 == theta1.
  {
    FixedPointRecord rec;
    rec.table_row = TableRow::line_segment;
    rec.n_range = std::array<double, 2>{0.0, 1.0};
    rec.exists = alpha2 == p1.theta;
    const double rt0 = p1.deltas.d_rt0;
    const double n_max = rt0 > 0.0 ? rt0 / (rt0 + p1.deltas.d_tr1) : 0.0;
    rec.point = {1.0, 0.0, rt0 > 0.0 ? 0.5 * n_max : 0.5};
    if (rec.exists) {
      rec.eigenvalues = eigenvalues(f.jacobian(to_vec(rec.point)));
      if (rt0 > 0.0 && payoff_difference(f.g2(), 0.0, rec.point.n) < 0.0) {
        rec.stability = {StabilityKind::line_attracting, n_max};
      } else {
        rec.stability = {StabilityKind::unstable, 0.0};
      }
    }
    out.push_back(rec);
  }

  // (d_ps1 / (d_ps1 - d_tr1), 0, 1) never lies in the cube.
  {
    FixedPointRecord rec;
    rec.table_row = TableRow::interior_abundant;
    const auto& d = p1.deltas;
    rec.point = {d.d_ps1 / (d.d_ps1 - d.d_tr1), 0.0, 1.0};
    rec.exists = false;
    out.push_back(rec);
  }
  return out;
}

enum class Regime2Pop { tragedy, sustained, line_segment };

inline std::string_view to_string(Regime2Pop r) {
  switch (r) {
    case Regime2Pop::tragedy: return "tragedy";
    case Regime2Pop::sustained: return "sustained";
    case Regime2Pop::line_segment: return "line_segment";
  }
  return "unknown";
}

struct RegimeLabel2Pop {
  Regime2Pop kind = Regime2Pop::tragedy;
  /// Which branch of the stability theorem applied: "1", "2a", "2b", "3".
  std::string_view item;
  double x1_star = 0.0;  // sustained
  double n_star = 0.0;   // sustained
  double n_max = 0.0;    // line_segment
};

/// Analytic asymptotic regime of the two-population system. Requires a
/// configuration that passes strict validation.
inline RegimeLabel2Pop classify_two_population(const SystemConfig& cfg) {
  validate(cfg, ValidationMode::strict);
  const auto& p1 = cfg.pop1;
  const auto& d = p1.deltas;
  const double alpha2 = cfg.pop2.alpha;
  RegimeLabel2Pop label;
  if (alpha2 > p1.theta) {
    label.item = "1";
    return label;
  }
  if (alpha2 == p1.theta) {
    label.item = "3";
    if (d.d_rt0 > 0.0) {
      label.kind = Regime2Pop::line_segment;
      label.n_max = d.d_rt0 / (d.d_rt0 + d.d_tr1);
    }
    return label;
  }
  // (alpha2 - theta1)/(alpha1 + alpha2) * d_sp0 < d_rt0, multiplied through.
  if (d.d_rt0 * (p1.alpha + alpha2) > (alpha2 - p1.theta) * d.d_sp0) {
    const auto fp = sustained_fixed_point(p1, alpha2);
    label.kind = Regime2Pop::sustained;
    label.item = "2a";
    label.x1_star = fp.x1_star;
    label.n_star = fp.n_star;
    return label;
  }
  label.item = "2b";
  return label;
}

enum class Regime1Pop { sustained, otoc, tragedy };

inline std::string_view to_string(Regime1Pop r) {
  switch (r) {
    case Regime1Pop::sustained: return "sustained";
    case Regime1Pop::otoc: return "otoc";
    case Regime1Pop::tragedy: return "tragedy";
  }
  return "unknown";
}

struct RegimeLabel1Pop {
  Regime1Pop kind = Regime1Pop::tragedy;
  double x_star = 0.0;
  double n_star = 0.0;
};

/// Asymptotic regime of one population in isolation. Throws BoundaryPolicy
/// when the policy lies within 1e-12 of a curve separating regimes.
inline RegimeLabel1Pop classify_single_population(const PopulationSpec& p) {
  const auto& d = p.deltas;
  if (!(d.d_tr1 > 0.0 && d.d_ps1 > 0.0)) throw AssumptionViolation("abundant game must favor high consumption", "d_tr1 > 0, d_ps1 > 0");
  if (!(d.d_sp0 > -d.d_ps1 && d.d_rt0 > -d.d_tr1)) throw AssumptionViolation("dg/dn must be negative", "d_sp0 > -d_ps1, d_rt0 > -d_tr1");
  RegimeLabel1Pop label;
  if (d.d_sp0 <= 0.0) return label;
  const double upper = sustainable_upper_edge(d);
  const double lower = sustainable_lower_edge(p);
  if (std::abs(d.d_rt0 - upper) <= kPolicyBoundaryTol || std::abs(d.d_rt0 - lower) <= kPolicyBoundaryTol) {
    throw BoundaryPolicy("policy lies on a regime boundary of the single-population system");
  }
  if (d.d_rt0 > upper) {
    label.kind = Regime1Pop::otoc;
    return label;
  }
  if (d.d_rt0 < lower) return label;
  const auto fp = sustained_fixed_point(p, 0.0);
  label.kind = Regime1Pop::sustained;
  label.x_star = fp.x1_star;
  label.n_star = fp.n_star;
  return label;
}

}  // namespace ecogame

#endif  // ECOGAME_EQUILIBRIA_HPP
