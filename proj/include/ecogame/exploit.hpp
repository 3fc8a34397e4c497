#ifndef ECOGAME_EXPLOIT_HPP
#define ECOGAME_EXPLOIT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>

#include "ecogame/dynamics.hpp"
#include "ecogame/equilibria.hpp"
#include "ecogame/errors.hpp"
#include "ecogame/model.hpp"
#include "ecogame/numeric.hpp"

namespace ecogame {

/// Asymptotic resource level population 2 obtains by consuming at rate
/// `alpha2` against a fixed population-1 policy. At alpha2 == theta1 the
/// optimistic end d_rt0 / (d_rt0 + d_tr1) of the attracting line is used.
inline double resource_function(const PopulationSpec& pop1, double alpha2) {
  const auto& d = pop1.deltas;
  if (alpha2 < 0.0 || alpha2 > pop1.theta) return 0.0;
  if (alpha2 == pop1.theta) return d.d_rt0 > 0.0 ? d.d_rt0 / (d.d_rt0 + d.d_tr1) : 0.0;
  const bool above_lower = (alpha2 - pop1.theta) * d.d_sp0 <= d.d_rt0 * (pop1.alpha + alpha2);
  const bool below_upper = y_discriminant(d) >= 0.0;
  if (!above_lower || !below_upper) return 0.0;
  return std::max(0.0, sustained_fixed_point(pop1, alpha2).n_star);
}

inline double utility(const PopulationSpec& pop1, double alpha2) {
  return alpha2 * resource_function(pop1, alpha2);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// [0, s] where s is theta1 for d_rt0 > 0 and
/// (d_sp0 theta1 + d_rt0 alpha1) / (d_sp0 - d_rt0) otherwise.
inline Interval support_of_utility(const PopulationSpec& pop1) {
  const auto& d = pop1.deltas;
  if (d.d_rt0 > 0.0) return {0.0, pop1.theta};
  const double s = (d.d_sp0 * pop1.theta + d.d_rt0 * pop1.alpha) / (d.d_sp0 - d.d_rt0);
  return {0.0, std::clamp(s, 0.0, pop1.theta)};
}

/// alpha1 / (alpha1 + theta1).
inline double scaled_alpha1(const PopulationSpec& pop1) {
  return pop1.alpha / (pop1.alpha + pop1.theta);
}

/// Threshold curve C(d_sp0): positive root of
/// r^2 + ((1-a)d_ps1 + d_tr1) r - (1-a) d_tr1 d_sp0 = 0 with a = alpha1/(alpha1+theta1).
inline double threshold_c(const PopulationSpec& pop1) {
  const auto& d = pop1.deltas;
  const double w = 1.0 - scaled_alpha1(pop1);
  const double k = w * d.d_ps1 + d.d_tr1;
  const double prod = w * d.d_tr1 * d.d_sp0;
  // -k/2 + sqrt(k^2/4 + prod), rewritten to avoid cancellation when prod is small.
  const double root = std::sqrt(k * k + 4.0 * prod);
  return k > 0.0 ? 2.0 * prod / (k + root) : 0.5 * (-k + root);
}

enum class ExploitBranch { theorem3a, theorem3b_case1, theorem3b_case2 };

inline std::string_view to_string(ExploitBranch b) {
  switch (b) {
    case ExploitBranch::theorem3a: return "theorem3a";
    case ExploitBranch::theorem3b_case1: return "theorem3b_case1";
    case ExploitBranch::theorem3b_case2: return "theorem3b_case2";
  }
  return "unknown";
}

struct ExploitResult {
  double alpha2_star = 0.0;
  double resource = 0.0;
  double utility = 0.0;
  ExploitBranch branch = ExploitBranch::theorem3a;
  double support_upper = 0.0;
};

/// Domain of the closed-form optimum: d_sp0 > 0 and
/// max{-(theta1/alpha1) d_sp0, -d_tr1} <= d_rt0 < (d_tr1/d_ps1) d_sp0.
inline bool in_exploit_domain(const PopulationSpec& pop1) {
  const auto& d = pop1.deltas;
  return d.d_tr1 > 0.0 && d.d_ps1 > 0.0 && d.d_sp0 > 0.0 &&
         pop1.alpha * d.d_rt0 + pop1.theta * d.d_sp0 >= 0.0 && d.d_rt0 >= -d.d_tr1 &&
         y_discriminant(d) > 0.0;
}

namespace detail {

struct InteriorOptimumTerms {
  GCoefficients g;
  double abar = 0.0;   // alpha1 / (alpha1 + theta1)
  double slope = 0.0;  // dg1/dn at abar
  double gbar = 0.0;   // g1(abar, 0)
  double y = 0.0;
  double phi = 0.0;    // sqrt(Y / (b1 slope))
};

inline InteriorOptimumTerms interior_terms(const PopulationSpec& pop1) {
  InteriorOptimumTerms t;
  t.g = g_coefficients(pop1.deltas);
  t.abar = scaled_alpha1(pop1);
  t.slope = payoff_slope_n(t.g, t.abar);
  t.gbar = payoff_difference(t.g, t.abar, 0.0);
  t.y = y_discriminant(pop1.deltas);
  t.phi = std::sqrt(t.y / (t.g.b * t.slope));
  return t;
}

}  // namespace detail

/// Closed-form maximizer of U(alpha2) = alpha2 R(alpha2).
///
/// Branch (a), C(d_sp0) <= d_rt0: alpha2* = theta1 and R* = d_rt0/(d_rt0+d_tr1).
/// Branch (b): the smaller root of U' = 0,
///   alpha2* = -(alpha1+theta1)/a1 g1_n(abar) (1 - phi),  phi = sqrt(Y / (b1 g1_n(abar))),
/// evaluated through the conjugate identity b1 g1_n(abar) - Y = a1 g1(abar, 0):
///   alpha2* = (alpha1+theta1) g1(abar, 0) / (-b1 (1 + phi)),
///   R*      = g1(abar, 0) / (-g1_n(abar) + sqrt(Y g1_n(abar) / b1)).
inline ExploitResult optimal_consumption(const PopulationSpec& pop1) {
  if (!in_exploit_domain(pop1)) throw OutOfRegion("population 1 policy is not sustainable");
  const auto& d = pop1.deltas;
  ExploitResult r;
  r.support_upper = support_of_utility(pop1).hi;
  if (d.d_rt0 >= threshold_c(pop1)) {
    r.branch = ExploitBranch::theorem3a;
    r.alpha2_star = pop1.theta;
    r.resource = d.d_rt0 / (d.d_rt0 + d.d_tr1);
  } else {
    r.branch = d.d_rt0 > 0.0 ? ExploitBranch::theorem3b_case1 : ExploitBranch::theorem3b_case2;
    const auto t = detail::interior_terms(pop1);
    r.alpha2_star = (pop1.alpha + pop1.theta) * t.gbar / (-t.g.b * (1.0 + t.phi));
    r.resource = t.gbar / (-t.slope + std::sqrt(t.y * t.slope / t.g.b));
  }
  r.utility = r.alpha2_star * r.resource;
  return r;
}

/// The branch-(b) optimum exactly as the quadratic root is usually written,
/// -(alpha1+theta1)/a1 g1_n(abar) (1 - phi). Suffers cancellation when phi ~ 1;
/// kept as a cross-check of the conjugate form.
inline double interior_optimum_direct(const PopulationSpec& pop1) {
  const auto t = detail::interior_terms(pop1);
  return -(pop1.alpha + pop1.theta) / t.g.a * t.slope * (1.0 - t.phi);
}

struct GridOptimum {
  double alpha2 = 0.0;
  double utility = 0.0;
};

/// Brute-force maximizer of U over {0, h, 2h, ..., theta1} (theta1 always
/// included), refined by golden-section search on the bracketing cells.
/// Ties go to the smaller alpha2.
inline GridOptimum brute_force_optimum(const PopulationSpec& pop1, double grid_step) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) throw InvalidParameter("grid_step must be positive");
  const double top = pop1.theta;
  const auto cells = static_cast<std::size_t>(std::floor(top / grid_step));
  GridOptimum best{0.0, utility(pop1, 0.0)};
  std::size_t best_index = 0;
  auto consider = [&](std::size_t i, double a) {
    const double u = utility(pop1, a);
    if (u > best.utility) {
      best = {a, u};
      best_index = i;
    }
  };
  for (std::size_t i = 1; i <= cells; ++i) consider(i, static_cast<double>(i) * grid_step);
  if (static_cast<double>(cells) * grid_step < top) consider(cells + 1, top);
  if (best.utility <= 0.0) return best;

  const double lo = best_index == 0 ? 0.0 : std::max(0.0, best.alpha2 - grid_step);
  const double hi = std::min(top, best.alpha2 + grid_step);
  const auto refined = golden_section_maximize([&](double a) { return utility(pop1, a); }, lo, hi, 1e-13);
  if (refined.value > best.utility) best = {refined.x, refined.value};
  return best;
}

}  // namespace ecogame

#endif  // ECOGAME_EXPLOIT_HPP
