#ifndef ECOGAME_SENSITIVITY_HPP
#define ECOGAME_SENSITIVITY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecogame/errors.hpp"
#include "ecogame/exploit.hpp"
#include "ecogame/model.hpp"
#include "ecogame/parallel.hpp"

namespace ecogame {

inline constexpr double kSeamEps = 1e-2;
inline constexpr double kRhoDenominatorFloor = 1e-15;

struct IncentivePerturbation {
  double u_s = 0.0;  // added to S0: unilateral cooperation
  double u_r = 0.0;  // added to R0: mutual cooperation
};

/// Shifts (d_sp0, d_rt0) by (u_s, u_r). The result is not re-validated.
inline PopulationSpec apply_incentive(PopulationSpec pop1, const IncentivePerturbation& inc) {
  pop1.deltas.d_sp0 += inc.u_s;
  pop1.deltas.d_rt0 += inc.u_r;
  return pop1;
}

enum class SensitivityRegion { theorem3a, theorem3b };

inline std::string_view to_string(SensitivityRegion r) {
  return r == SensitivityRegion::theorem3a ? "theorem3a" : "theorem3b";
}

struct SensitivityReport {
  double dR_dsp0 = 0.0;
  double dR_drt0 = 0.0;
  std::optional<double> rho;
  SensitivityRegion region = SensitivityRegion::theorem3a;
  std::optional<double> phi;
};

/// Vertical distance from d_rt0 to the nearest seam of the optimal-consumption
/// regions: the lower edge max{-(theta1/alpha1) d_sp0, -d_tr1}, the threshold
/// curve C and the upper edge (d_tr1/d_ps1) d_sp0.
inline double seam_distance(const PopulationSpec& pop1) {
  const auto& d = pop1.deltas;
  const double lower = std::max(sustainable_lower_edge(pop1), -d.d_tr1);
  return std::min({std::abs(d.d_rt0 - lower), std::abs(d.d_rt0 - threshold_c(pop1)),
                   std::abs(d.d_rt0 - sustainable_upper_edge(d))});
}

/// Closed-form gradient of the optimized resource R* with respect to
/// (d_sp0, d_rt0).
///
/// Region (a): (0, d_tr1 / (d_rt0 + d_tr1)^2).
/// Region (b), with phi = sqrt(Y / (b1 g1_n(abar))):
///   dR/dd_sp0 = (d_ps1 - d_tr1)/a1^2 (1 - phi)
///             + (-b1)/(2 a1) phi (1/(-b1) - d_tr1/Y + (1 - abar)/(-g1_n(abar)))
///   dR/dd_rt0 = (d_tr1 - d_ps1)/a1^2 (1 - phi)
///             + (-b1)/(2 a1) phi (1/b1 + d_ps1/Y + abar/(-g1_n(abar)))
inline SensitivityReport resource_sensitivities(const PopulationSpec& pop1, double boundary_eps = kSeamEps) {
  if (!in_exploit_domain(pop1) || !in_sustainable_region(pop1)) {
    throw OutOfRegion("population 1 policy is not sustainable");
  }
  if (seam_distance(pop1) < boundary_eps) {
    throw BoundaryPolicy("policy is within " + std::to_string(boundary_eps) + " of a region seam");
  }
  const auto& d = pop1.deltas;
  SensitivityReport r;
  if (d.d_rt0 >= threshold_c(pop1)) {
    r.region = SensitivityRegion::theorem3a;
    r.dR_dsp0 = 0.0;
    r.dR_drt0 = d.d_tr1 / ((d.d_rt0 + d.d_tr1) * (d.d_rt0 + d.d_tr1));
  } else {
    r.region = SensitivityRegion::theorem3b;
    const auto t = detail::interior_terms(pop1);
    const double a1 = t.g.a, b1 = t.g.b;
    if (!(t.y > 0.0 && b1 * t.slope > 0.0)) throw DegenerateDenominator("phi is not real for this policy");
    const double lead = (1.0 - t.phi) / (a1 * a1);
    const double tail = -b1 / (2.0 * a1) * t.phi;
    r.dR_dsp0 = (d.d_ps1 - d.d_tr1) * lead + tail * (1.0 / -b1 - d.d_tr1 / t.y + (1.0 - t.abar) / -t.slope);
    r.dR_drt0 = (d.d_tr1 - d.d_ps1) * lead + tail * (1.0 / b1 + d.d_ps1 / t.y + t.abar / -t.slope);
    r.phi = t.phi;
  }
  if (std::abs(r.dR_drt0) > kRhoDenominatorFloor) r.rho = r.dR_dsp0 / r.dR_drt0;
  return r;
}

/// Optimized resource R*(policy).
inline double optimized_resource(const PopulationSpec& pop1) {
  return optimal_consumption(pop1).resource;
}

enum class DifferenceScheme { central, forward, backward };

struct ResourceGradient {
  double dR_dsp0 = 0.0;
  double dR_drt0 = 0.0;
};

/// Finite-difference gradient of R*, re-solving the optimal consumption
/// problem at each perturbed policy. One-sided schemes serve policies near a
/// seam where R* is not differentiable.
inline ResourceGradient fd_resource_gradient(const PopulationSpec& pop1, double step = 1e-6,
                                             DifferenceScheme scheme = DifferenceScheme::central) {
  auto shifted = [&](double ds, double dr) {
    PopulationSpec p = pop1;
    p.deltas.d_sp0 += ds;
    p.deltas.d_rt0 += dr;
    return optimized_resource(p);
  };
  auto diff = [&](double ds, double dr) {
    switch (scheme) {
      case DifferenceScheme::central: return (shifted(ds * step, dr * step) - shifted(-ds * step, -dr * step)) / (2.0 * step);
      case DifferenceScheme::forward: return (shifted(ds * step, dr * step) - shifted(0.0, 0.0)) / step;
      case DifferenceScheme::backward: return (shifted(0.0, 0.0) - shifted(-ds * step, -dr * step)) / step;
    }
    return 0.0;
  };
  return {diff(1.0, 0.0), diff(0.0, 1.0)};
}

struct SensitivityCell {
  double d_sp0 = 0.0;
  double d_rt0 = 0.0;
  /// Empty for infeasible or near-seam cells.
  std::optional<SensitivityReport> report;
};

/// Evaluates the sensitivity report on the Cartesian grid sp0 x rt0
/// (row-major, sp0 outer). Cells outside V or near a seam carry no report.
inline std::vector<SensitivityCell> sensitivity_ratio_map(const PopulationSpec& pop1_base,
                                                          std::span<const double> sp0_grid,
                                                          std::span<const double> rt0_grid) {
  std::vector<SensitivityCell> cells(sp0_grid.size() * rt0_grid.size());
  parallel_for(cells.size(), [&](std::size_t k) {
    auto& cell = cells[k];
    cell.d_sp0 = sp0_grid[k / rt0_grid.size()];
    cell.d_rt0 = rt0_grid[k % rt0_grid.size()];
    PopulationSpec p = pop1_base;
    p.deltas.d_sp0 = cell.d_sp0;
    p.deltas.d_rt0 = cell.d_rt0;
    if (!std::isfinite(cell.d_sp0) || !std::isfinite(cell.d_rt0)) return;
    if (!in_sustainable_region(p) || !in_exploit_domain(p) || seam_distance(p) < kSeamEps) return;
    cell.report = resource_sensitivities(p);
  });
  return cells;
}

}  // namespace ecogame

#endif  // ECOGAME_SENSITIVITY_HPP
