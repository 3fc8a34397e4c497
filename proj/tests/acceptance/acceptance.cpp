// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "../support.hpp"

using namespace ecogame;
using ecogame::fixtures::paper_pop1;
using ecogame::fixtures::Rng;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1 ------------------------------------------------------------------------
Verdict fixed_point_residual() {
  Rng rng(101);
  double worst = 0.0;
  int present = 0;
  for (int i = 0; i < 200; ++i) {
    const auto cfg = fixtures::random_valid_config(rng);
    validate(cfg);
    const auto rows = enumerate_fixed_points(cfg);
    if (!rows[0].exists) continue;
    ++present;
    worst = std::max(worst, inf_norm(rhs(cfg, rows[0].point)));
  }
  return {worst <= 1e-10 && present > 0,
          "zA present in " + std::to_string(present) + "/200 configs, max residual " + fmt("%.3g", worst)};
}

// 2 ------------------------------------------------------------------------
Verdict theorem_two_vs_simulation() {
  Verdict v;
  double worst_gap = 0.0;
  int checked = 0;
  for (double alpha2 : {0.25, 0.5, 0.9, 1.2}) {
    const auto cfg = reference_config(alpha2);
    const auto label = classify_two_population(cfg);
    const auto ics = random_initial_states(2024, 20);
    IntegratorSettings settings;
    settings.record_stride = 1000;
    std::vector<OutcomeLabel> outcomes(ics.size());
    parallel_for(ics.size(), [&](std::size_t i) { outcomes[i] = classify_trajectory(integrate(cfg, ics[i], settings), cfg); });
    for (const auto& o : outcomes) {
      ++checked;
      const bool sustained = label.kind == Regime2Pop::sustained;
      const Outcome want = sustained ? Outcome::sustained : Outcome::tragedy;
      if (o.kind != want) {
        v.pass = false;
        v.detail += "alpha2=" + fmt("%g", alpha2) + " simulated " + std::string(to_string(o.kind)) + "; ";
      }
      if (sustained) worst_gap = std::max(worst_gap, std::abs(o.n_final - label.n_star));
    }
  }
  v.pass = v.pass && worst_gap <= 1e-3;
  v.detail += std::to_string(checked) + " trajectories, max |n_final - n*| " + fmt("%.3g", worst_gap);
  return v;
}

// 3 ------------------------------------------------------------------------
Verdict closed_form_vs_oracle() {
  Rng rng(103);
  double worst_a = 0.0, worst_u = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = fixtures::sample_in_v(rng, paper_pop1(1, 0));
    const auto closed = optimal_consumption(p);
    const auto grid = brute_force_optimum(p, 1e-5);
    worst_a = std::max(worst_a, std::abs(closed.alpha2_star - grid.alpha2));
    worst_u = std::max(worst_u, std::abs(closed.utility - grid.utility));
  }
  const auto ref = optimal_consumption(paper_pop1(3, -0.5));
  const bool pinned = std::abs(ref.alpha2_star - 0.2490) <= 1e-3 && std::abs(ref.utility - 0.01336) <= 1e-4;
  return {worst_a <= 1e-4 && worst_u <= 1e-8 && pinned,
          "max |da2*| " + fmt("%.3g", worst_a) + ", max |dU*| " + fmt("%.3g", worst_u) + "; (3,-0.5): a2* " +
              fmt("%.6f", ref.alpha2_star) + ", U* " + fmt("%.6f", ref.utility)};
}

// 4 ------------------------------------------------------------------------
Verdict branch_a_exactness() {
  const auto r = optimal_consumption(paper_pop1(3, 2));
  const bool exact = r.branch == ExploitBranch::theorem3a && r.alpha2_star == 0.75 &&
                     std::abs(r.resource - 1.0 / 6.0) <= 1e-12;
  auto p = paper_pop1(3, 0);
  const double c = threshold_c(p);
  p.deltas.d_rt0 = c;
  const auto t = detail::interior_terms(p);
  const double interior = (p.alpha + p.theta) * t.gbar / (-t.g.b * (1.0 + t.phi));
  const double gap = std::abs(interior - p.theta);
  return {exact && gap <= 1e-9,
          "(3,2): a2* " + fmt("%.17g", r.alpha2_star) + ", R* - 1/6 = " + fmt("%.3g", r.resource - 1.0 / 6.0) +
              "; C(3) = " + fmt("%.8f", c) + ", seam gap " + fmt("%.3g", gap)};
}

// 5 ------------------------------------------------------------------------
PopulationSpec sample_region(Rng& rng, SensitivityRegion region) {
  for (;;) {
    const auto p = fixtures::sample_in_v(rng, paper_pop1(1, 0));
    if (seam_distance(p) < kSeamEps) continue;
    if ((p.deltas.d_rt0 >= threshold_c(p)) == (region == SensitivityRegion::theorem3a)) return p;
  }
}

Verdict sensitivity_vs_fd() {
  Rng rng(105);
  double worst = 0.0;
  for (auto region : {SensitivityRegion::theorem3a, SensitivityRegion::theorem3b}) {
    for (int i = 0; i < 50; ++i) {
      const auto p = sample_region(rng, region);
      const auto r = resource_sensitivities(p);
      const auto fd = fd_resource_gradient(p, 1e-6);
      worst = std::max(worst, fixtures::rel_err(r.dR_drt0, fd.dR_drt0));
      if (region == SensitivityRegion::theorem3b) worst = std::max(worst, fixtures::rel_err(r.dR_dsp0, fd.dR_dsp0));
      else worst = std::max(worst, std::abs(fd.dR_dsp0));
    }
  }
  const auto a = resource_sensitivities(paper_pop1(3, 2));
  const bool exact = a.dR_dsp0 == 0.0 && a.dR_drt0 == 10.0 / 144.0;
  return {worst <= 1e-4 && exact, "max rel err " + fmt("%.3g", worst) + "; (3,2) -> (" + fmt("%g", a.dR_dsp0) + ", " +
                                      fmt("%.17g", a.dR_drt0) + ")"};
}

// 6 ------------------------------------------------------------------------
Verdict nonnegativity() {
  Rng rng(106);
  double lowest = INFINITY;
  int sampled = 0;
  while (sampled < 500) {
    const auto p = fixtures::sample_in_v(rng, paper_pop1(1, 0));
    if (seam_distance(p) < kSeamEps) continue;
    const auto r = resource_sensitivities(p);
    lowest = std::min({lowest, r.dR_dsp0, r.dR_drt0});
    ++sampled;
  }
  return {lowest >= -1e-12, "500 policies, smallest partial " + fmt("%.3g", lowest)};
}

// 7 ------------------------------------------------------------------------
Verdict concavity_and_support() {
  Rng rng(107);
  double worst_second = -INFINITY, worst_outside = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = fixtures::sample_in_v(rng, paper_pop1(1, 0));
    const double s = support_of_utility(p).hi;
    const double h = s / 500.0;
    for (int k = 1; k < 500; ++k) {
      const double a = k * h;
      worst_second = std::max(worst_second, utility(p, a - h) - 2.0 * utility(p, a) + utility(p, a + h));
    }
    for (int k = 1; k <= 200; ++k) {
      const double a = s + k * (p.theta + 0.25 - s) / 200.0;
      if (a == p.theta && p.deltas.d_rt0 > 0.0) continue;
      worst_outside = std::max(worst_outside, std::abs(utility(p, a)));
    }
  }
  const auto supp = support_of_utility(paper_pop1(3, -0.5));
  const bool ref = supp.lo == 0.0 && std::abs(supp.hi - 0.5) <= 1e-15;
  return {worst_second <= 1e-9 && worst_outside == 0.0 && ref,
          "max second difference " + fmt("%.3g", worst_second) + ", max |U| outside support " +
              fmt("%.3g", worst_outside) + ", supp U(3,-0.5) = [0, " + fmt("%.17g", supp.hi) + "]"};
}

// 8 ------------------------------------------------------------------------
Verdict jacobian_vs_fd() {
  Rng rng(108);
  double worst = 0.0;
  for (int c = 0; c < 10; ++c) {
    const auto cfg = fixtures::random_valid_config(rng);
    for (int i = 0; i < 50; ++i) {
      const auto s = fixtures::random_interior_state(rng);
      worst = std::max(worst, fixtures::jacobian_rel_err(jacobian(cfg, s), fixtures::fd_jacobian(cfg, s)));
    }
  }
  return {worst <= 1e-6, "500 states, max rel err " + fmt("%.3g", worst)};
}

// 9 ------------------------------------------------------------------------
Verdict epsilon_invariance() {
  Verdict v;
  for (double alpha2 : {0.25, 1.2}) {
    auto base = reference_config(alpha2);
    const auto regime = classify_two_population(base).kind;
    const auto rows = enumerate_fixed_points(base);
    for (double eps : {0.01, 0.1, 1.0}) {
      auto cfg = base;
      cfg.epsilon = eps;
      bool same = classify_two_population(cfg).kind == regime;
      const auto other = enumerate_fixed_points(cfg);
      for (std::size_t k = 0; k < rows.size(); ++k) same = same && other[k].stability.kind == rows[k].stability.kind;
      if (!same) {
        v.pass = false;
        v.detail += "alpha2=" + fmt("%g", alpha2) + " eps=" + fmt("%g", eps) + " differs; ";
      }
    }
  }
  v.detail += "regimes and 8 stability verdicts compared at eps in {0.01, 0.1, 1}";
  return v;
}

// 10 -----------------------------------------------------------------------
Verdict figure_reproduction() {
  Verdict v;
  const auto base = paper_pop1(1, 0);
  const auto sp0 = linspace(0.05, 5.0, 40);
  const auto rt0 = linspace(-3.75, 8.3, 40);
  std::vector<double> r(sp0.size() * rt0.size(), std::nan(""));
  parallel_for(r.size(), [&](std::size_t k) {
    auto p = base;
    p.deltas.d_sp0 = sp0[k / rt0.size()];
    p.deltas.d_rt0 = rt0[k % rt0.size()];
    if (in_sustainable_region(p) && in_exploit_domain(p)) r[k] = optimized_resource(p);
  });
  int pairs = 0;
  double worst_drop = 0.0;
  auto at = [&](std::size_t i, std::size_t j) { return r[i * rt0.size() + j]; };
  for (std::size_t i = 0; i < sp0.size(); ++i) {
    for (std::size_t j = 0; j < rt0.size(); ++j) {
      if (std::isnan(at(i, j))) continue;
      if (i + 1 < sp0.size() && !std::isnan(at(i + 1, j))) {
        ++pairs;
        worst_drop = std::max(worst_drop, at(i, j) - at(i + 1, j));
      }
      if (j + 1 < rt0.size() && !std::isnan(at(i, j + 1))) {
        ++pairs;
        worst_drop = std::max(worst_drop, at(i, j) - at(i, j + 1));
      }
    }
  }
  const bool monotone = worst_drop <= 1e-12 && pairs > 500;

  auto rho_extremes = [&](double d_ps1, double rt0_hi) {
    auto p = paper_pop1(1, 0, d_ps1);
    const auto cells = sensitivity_ratio_map(p, linspace(0.05, 5.0, 40), linspace(-3.75, rt0_hi, 60));
    double max_rho = -INFINITY, seam_at_max = 0.0;
    int defined = 0;
    for (const auto& c : cells) {
      if (!c.report || !c.report->rho) continue;
      ++defined;
      if (*c.report->rho > max_rho) {
        max_rho = *c.report->rho;
        p.deltas.d_sp0 = c.d_sp0;
        seam_at_max = std::abs(c.d_rt0 - threshold_c(p));
      }
    }
    return std::tuple{max_rho, seam_at_max, defined};
  };
  const auto [high_max, high_seam, high_n] = rho_extremes(9.0, 5.5);
  const auto [low_max, low_seam, low_n] = rho_extremes(2.0, 24.9);
  (void)high_seam;
  v.pass = monotone && high_n > 0 && high_max < 1.0 && low_max > 1.0;
  v.detail = std::to_string(pairs) + " neighbour pairs, max drop " + fmt("%.3g", worst_drop) + "; d_ps1=9: max rho " +
             fmt("%.4f", high_max) + " over " + std::to_string(high_n) + " cells; d_ps1=2: max rho " +
             fmt("%.4f", low_max) + " over " + std::to_string(low_n) + " cells, at distance " + fmt("%.3g", low_seam) +
             " from C";
  return v;
}

// 11 -----------------------------------------------------------------------
Verdict resource_decay() {
  Rng rng(111);
  double worst_rel = 0.0, largest = -INFINITY;
  for (int i = 0; i < 100; ++i) {
    const auto p = fixtures::sample_in_v(rng, paper_pop1(1, 0));
    const double a2 = fixtures::uniform(rng, 0.0, 0.9 * p.theta);
    const double h = 1e-7;
    const double fd = (sustained_fixed_point(p, a2 + h).n_star - sustained_fixed_point(p, a2 - h).n_star) / (2 * h);
    const double d = n_star_derivative(p, a2);
    largest = std::max(largest, d);
    worst_rel = std::max(worst_rel, fixtures::rel_err(d, fd));
  }
  return {largest < 0.0 && worst_rel <= 1e-5,
          "largest derivative " + fmt("%.3g", largest) + ", max rel err vs FD " + fmt("%.3g", worst_rel)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "fixed-point residual at zA", 1.0, fixed_point_residual},
      {2, "stability theorem vs simulation", 120.0, theorem_two_vs_simulation},
      {3, "closed-form optimum vs grid oracle", 60.0, closed_form_vs_oracle},
      {4, "maximal-consumption branch and seam continuity", 0.0, branch_a_exactness},
      {5, "sensitivity closed forms vs finite differences", 30.0, sensitivity_vs_fd},
      {6, "sensitivities nonnegative", 0.0, nonnegativity},
      {7, "utility concave on support, zero outside", 0.0, concavity_and_support},
      {8, "Jacobian vs finite differences", 0.0, jacobian_vs_fd},
      {9, "epsilon invariance of regimes and stability", 0.0, epsilon_invariance},
      {10, "optimized resource monotone, sensitivity ratio map", 120.0, figure_reproduction},
      {11, "sustained resource decreasing in alpha2", 0.0, resource_decay},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      v.pass = false;
      v.detail += "; over time budget";
    }
    if (!v.pass) ++failed;
    std::printf("%s criterion %2d: %s (%.2fs) %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
