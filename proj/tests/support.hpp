#ifndef ECOGAME_TESTS_SUPPORT_HPP
#define ECOGAME_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include "ecogame/ecogame.hpp"

namespace ecogame::fixtures {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Population 1 with the worked-example rates and abundant game.
inline PopulationSpec paper_pop1(double d_sp0, double d_rt0, double d_ps1 = 6.0) {
  return PopulationSpec{PolicyDeltas{d_sp0, d_rt0, 10.0, d_ps1}, 0.75, 1.0};
}

/// Lower edge of the optimum's domain: max{-(theta/alpha) d_sp0, -d_tr1}.
inline double policy_floor(const PopulationSpec& p) {
  return std::max(sustainable_lower_edge(p), -p.deltas.d_tr1);
}

/// Draws (d_sp0, d_rt0) for `base` strictly inside V, keeping `margin` of the
/// rt0 range away from both edges.
inline PopulationSpec sample_in_v(Rng& rng, PopulationSpec base, double sp0_max = 5.0, double margin = 0.01) {
  base.deltas.d_sp0 = uniform(rng, 0.05, sp0_max);
  const double lo = policy_floor(base);
  const double hi = sustainable_upper_edge(base.deltas);
  const double pad = margin * (hi - lo);
  base.deltas.d_rt0 = uniform(rng, lo + pad, hi - pad);
  return base;
}

/// A configuration that passes strict validation: population 1 in V,
/// population 2 irresponsible, all rates in (0, 2).
inline SystemConfig random_valid_config(Rng& rng) {
  SystemConfig cfg;
  cfg.pop1.theta = uniform(rng, 0.05, 2.0);
  cfg.pop1.alpha = uniform(rng, 0.05, 2.0);
  cfg.pop1.deltas.d_tr1 = uniform(rng, 0.5, 10.0);
  cfg.pop1.deltas.d_ps1 = uniform(rng, 0.5, 10.0);
  cfg.pop1 = sample_in_v(rng, cfg.pop1);
  cfg.pop2.theta = uniform(rng, 0.05, 2.0);
  cfg.pop2.alpha = uniform(rng, 0.05, 2.0);
  cfg.pop2.deltas.d_tr1 = uniform(rng, 0.5, 10.0);
  cfg.pop2.deltas.d_ps1 = uniform(rng, 0.5, 10.0);
  cfg.pop2.deltas.d_sp0 = -uniform(rng, 0.01, 0.99) * cfg.pop2.deltas.d_ps1;
  cfg.pop2.deltas.d_rt0 = -uniform(rng, 0.01, 0.99) * cfg.pop2.deltas.d_tr1;
  cfg.epsilon = uniform(rng, 0.01, 1.0);
  return cfg;
}

inline State random_interior_state(Rng& rng) {
  return {uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95)};
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Central-difference Jacobian of rhs.
inline Matrix3 fd_jacobian(const SystemConfig& cfg, const State& s, double h = 1e-6) {
  const VectorField f(cfg);
  Matrix3 out{};
  for (std::size_t k = 0; k < 3; ++k) {
    Vec3 up = to_vec(s), dn = to_vec(s);
    up[k] += h;
    dn[k] -= h;
    const Vec3 fu = f(up), fd = f(dn);
    for (std::size_t i = 0; i < 3; ++i) out[i][k] = (fu[i] - fd[i]) / (2.0 * h);
  }
  return out;
}

/// Largest entrywise error relative to the largest Jacobian entry.
inline double jacobian_rel_err(const Matrix3& got, const Matrix3& want) {
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      scale = std::max(scale, std::abs(want[i][k]));
      err = std::max(err, std::abs(got[i][k] - want[i][k]));
    }
  }
  return err / std::max(scale, 1e-300);
}

}  // namespace ecogame::fixtures

#endif  // ECOGAME_TESTS_SUPPORT_HPP
