#ifndef ECOGAME_DYNAMICS_HPP
#define ECOGAME_DYNAMICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ecogame/errors.hpp"
#include "ecogame/model.hpp"
#include "ecogame/numeric.hpp"

namespace ecogame {

using Vec3 = std::array<double, 3>;

inline Vec3 to_vec(const State& s) { return {s.x1, s.x2, s.n}; }
inline State to_state(const Vec3& v) { return {v[0], v[1], v[2]}; }

inline double payoff_difference(const GCoefficients& g, double x, double n) {
  return g.a * x * n + g.b * x + g.c * n + g.d;
}

/// dg/dn at x.
inline double payoff_slope_n(const GCoefficients& g, double x) { return g.a * x + g.c; }
/// dg/dx at n.
inline double payoff_slope_x(const GCoefficients& g, double n) { return g.a * n + g.b; }

/// h(x1, x2) = sum_i theta_i x_i - alpha_i (1 - x_i).
inline double environment_drive(const SystemConfig& cfg, double x1, double x2) {
  return (cfg.pop1.theta * x1 - cfg.pop1.alpha * (1.0 - x1)) +
         (cfg.pop2.theta * x2 - cfg.pop2.alpha * (1.0 - x2));
}

/// Coupled replicator / environment vector field with precomputed payoff
/// coefficients.
class VectorField {
public:
  explicit VectorField(const SystemConfig& cfg)
      : cfg_(cfg), g1_(g_coefficients(cfg.pop1.deltas)), g2_(g_coefficients(cfg.pop2.deltas)) {}

  const SystemConfig& config() const noexcept { return cfg_; }
  const GCoefficients& g1() const noexcept { return g1_; }
  const GCoefficients& g2() const noexcept { return g2_; }

  Vec3 operator()(const Vec3& z) const {
    const double x1 = z[0], x2 = z[1], n = z[2];
    return {x1 * (1.0 - x1) * payoff_difference(g1_, x1, n),
            x2 * (1.0 - x2) * payoff_difference(g2_, x2, n),
            cfg_.epsilon * n * (1.0 - n) * environment_drive(cfg_, x1, x2)};
  }

  Matrix3 jacobian(const Vec3& z) const {
    const double x1 = z[0], x2 = z[1], n = z[2];
    const double eps = cfg_.epsilon;
    const double v1 = x1 * (1.0 - x1);
    const double v2 = x2 * (1.0 - x2);
    const double w = n * (1.0 - n);
    Matrix3 j{};
    j[0][0] = v1 * payoff_slope_x(g1_, n) + (1.0 - 2.0 * x1) * payoff_difference(g1_, x1, n);
    j[0][2] = v1 * payoff_slope_n(g1_, x1);
    j[1][1] = v2 * payoff_slope_x(g2_, n) + (1.0 - 2.0 * x2) * payoff_difference(g2_, x2, n);
    j[1][2] = v2 * payoff_slope_n(g2_, x2);
    j[2][0] = eps * w * (cfg_.pop1.theta + cfg_.pop1.alpha);
    j[2][1] = eps * w * (cfg_.pop2.theta + cfg_.pop2.alpha);
    j[2][2] = eps * (1.0 - 2.0 * n) * environment_drive(cfg_, x1, x2);
    return j;
  }

private:
  SystemConfig cfg_;
  GCoefficients g1_;
  GCoefficients g2_;
};

inline Vec3 rhs(const SystemConfig& cfg, const State& s) { return VectorField(cfg)(to_vec(s)); }

inline Matrix3 jacobian(const SystemConfig& cfg, const State& s) {
  return VectorField(cfg).jacobian(to_vec(s));
}

inline double inf_norm(const Vec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorSettings {
  IntegratorMethod method = IntegratorMethod::rk4_fixed;
  double dt = 0.01;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double t_max = 1e5;
  double convergence_window = 10.0;
  double convergence_eps = 1e-9;
  /// Keep every k-th accepted step (the first and last are always kept).
  std::size_t record_stride = 1;

  void check() const {
    for (double v : {dt, rel_tol, abs_tol, t_max, convergence_window, convergence_eps}) {
      if (!std::isfinite(v) || !(v > 0.0)) throw InvalidParameter("integrator settings must be positive and finite");
    }
    if (dt > t_max) throw InvalidParameter("integrator dt exceeds t_max");
    if (record_stride == 0) throw InvalidParameter("record_stride must be at least 1");
  }
};

enum class TerminalReason { converged, max_time, non_convergent };

inline std::string_view to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::converged: return "converged";
    case TerminalReason::max_time: return "max_time";
    case TerminalReason::non_convergent: return "non_convergent";
  }
  return "unknown";
}

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  TerminalReason terminal_reason = TerminalReason::max_time;
  /// Largest distance by which any coordinate left [0, 1] before clamping.
  double max_excursion = 0.0;
  std::size_t steps = 0;

  const State& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

namespace detail {

// Tracks which coordinates started on an invariant face (exactly 0 or 1);
// those are left untouched, the rest are clamped to the open cube.
class CubeClamp {
public:
  explicit CubeClamp(const Vec3& z0) {
    for (std::size_t i = 0; i < 3; ++i) on_face_[i] = (z0[i] == 0.0 || z0[i] == 1.0);
  }

  double apply(Vec3& z) const {
    double excursion = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      excursion = std::max({excursion, -z[i], z[i] - 1.0});
      if (on_face_[i]) continue;
      z[i] = std::clamp(z[i], kStateClampTol, 1.0 - kStateClampTol);
    }
    return excursion;
  }

private:
  std::array<bool, 3> on_face_{};
};

inline Vec3 axpy(const Vec3& y, double h, const Vec3& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

inline void require_finite(const Vec3& z, double t) {
  for (double v : z) {
    if (!std::isfinite(v)) throw NonFiniteState("non-finite state at t = " + std::to_string(t));
  }
}

inline Vec3 rk4_step(const VectorField& f, const Vec3& y, double h) {
  const Vec3 k1 = f(y);
  const Vec3 k2 = f(axpy(y, 0.5 * h, k1));
  const Vec3 k3 = f(axpy(y, 0.5 * h, k2));
  const Vec3 k4 = f(axpy(y, h, k3));
  Vec3 out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  return out;
}

// Records states at the configured stride and watches the convergence window.
class Recorder {
public:
  Recorder(Trajectory& traj, const IntegratorSettings& s) : traj_(traj), s_(s) {}

  void push(double t, const Vec3& z) {
    traj_.times.push_back(t);
    traj_.states.push_back(to_state(z));
  }

  void accept(double t, const Vec3& z) {
    ++traj_.steps;
    pending_ = true;
    if (traj_.steps % s_.record_stride == 0) {
      push(t, z);
      pending_ = false;
    }
  }

  void finish(double t, const Vec3& z) {
    if (pending_) push(t, z);
  }

  // true once the field norm stayed below eps for the whole window.
  bool converged(double t, double norm) {
    if (norm < s_.convergence_eps) {
      if (!below_) {
        below_ = true;
        below_since_ = t;
      }
      return t - below_since_ >= s_.convergence_window;
    }
    below_ = false;
    return false;
  }

private:
  Trajectory& traj_;
  const IntegratorSettings& s_;
  double below_since_ = 0.0;
  bool below_ = false;
  bool pending_ = false;
};

inline Trajectory integrate_rk4(const VectorField& f, const Vec3& z0, const IntegratorSettings& s) {
  Trajectory traj;
  Recorder rec(traj, s);
  CubeClamp clamp(z0);
  Vec3 z = z0;
  rec.push(0.0, z);
  const auto max_steps = static_cast<std::size_t>(std::ceil(s.t_max / s.dt - 1e-9));
  double t = 0.0;
  traj.terminal_reason = TerminalReason::max_time;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    const double t_next = std::min(static_cast<double>(k) * s.dt, s.t_max);
    z = rk4_step(f, z, t_next - t);
    t = t_next;
    require_finite(z, t);
    traj.max_excursion = std::max(traj.max_excursion, clamp.apply(z));
    rec.accept(t, z);
    if (rec.converged(t, inf_norm(f(z)))) {
      traj.terminal_reason = TerminalReason::converged;
      break;
    }
  }
  rec.finish(t, z);
  return traj;
}

// Dormand-Prince 5(4) with FSAL and standard step-size control.
inline Trajectory integrate_rk45(const VectorField& f, const Vec3& z0, const IntegratorSettings& s) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory traj;
  Recorder rec(traj, s);
  CubeClamp clamp(z0);
  Vec3 z = z0;
  rec.push(0.0, z);
  double t = 0.0;
  double h = s.dt;
  const double h_max = s.convergence_window / 10.0;
  Vec3 k1 = f(z);
  traj.terminal_reason = TerminalReason::max_time;
  while (t < s.t_max) {
    h = std::min({h, h_max, s.t_max - t});
    if (h < 1e-14 * std::max(1.0, t)) {
      traj.terminal_reason = TerminalReason::non_convergent;
      break;
    }
    Vec3 y, k2, k3, k4, k5, k6, k7, y5;
    for (std::size_t i = 0; i < 3; ++i) y[i] = z[i] + h * a21 * k1[i];
    k2 = f(y);
    for (std::size_t i = 0; i < 3; ++i) y[i] = z[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(y);
    for (std::size_t i = 0; i < 3; ++i) y[i] = z[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(y);
    for (std::size_t i = 0; i < 3; ++i)
      y[i] = z[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(y);
    for (std::size_t i = 0; i < 3; ++i)
      y[i] = z[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(y);
    for (std::size_t i = 0; i < 3; ++i)
      y5[i] = z[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(y5);
    double err = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(z[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) throw NonFiniteState("non-finite error estimate at t = " + std::to_string(t));
    if (err <= 1.0) {
      t += h;
      z = y5;
      require_finite(z, t);
      traj.max_excursion = std::max(traj.max_excursion, clamp.apply(z));
      k1 = (z == y5) ? k7 : f(z);
      rec.accept(t, z);
      if (rec.converged(t, inf_norm(k1))) {
        traj.terminal_reason = TerminalReason::converged;
        break;
      }
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
  rec.finish(t, z);
  return traj;
}

}  // namespace detail

/// Integrates the coupled system from `s0`. Coordinates starting strictly
/// inside (0, 1) are clamped to [1e-12, 1 - 1e-12] after every step;
/// coordinates starting exactly on a face stay there.
inline Trajectory integrate(const SystemConfig& cfg, const State& s0, const IntegratorSettings& settings = {}) {
  settings.check();
  const Vec3 z0 = to_vec(s0);
  for (double v : z0) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw InvalidParameter("initial state outside the unit cube");
  }
  const VectorField f(cfg);
  return settings.method == IntegratorMethod::rk4_fixed ? detail::integrate_rk4(f, z0, settings)
                                                         : detail::integrate_rk45(f, z0, settings);
}

/// `count` initial states drawn uniformly from (0.05, 0.95)^3. Built directly
/// on mt19937_64 output, so a seed gives the same states on every platform.
inline std::vector<State> random_initial_states(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 gen(seed);
  auto draw = [&] { return 0.05 + 0.9 * (static_cast<double>(gen() >> 11) * 0x1.0p-53); };
  std::vector<State> out(count);
  for (auto& s : out) {
    s.x1 = draw();
    s.x2 = draw();
    s.n = draw();
  }
  return out;
}

inline constexpr double kOutcomeNTol = 1e-3;
inline constexpr double kRateTieTol = 1e-9;

enum class Outcome { tragedy, sustained, abundance, non_convergent };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::tragedy: return "tragedy";
    case Outcome::sustained: return "sustained";
    case Outcome::abundance: return "abundance";
    case Outcome::non_convergent: return "non_convergent";
  }
  return "unknown";
}

struct OutcomeLabel {
  Outcome kind = Outcome::non_convergent;
  double n_final = 0.0;
  /// alpha2 within 1e-9 of theta1: the limit depends on the initial state.
  bool initial_condition_dependent = false;
};

inline OutcomeLabel classify_trajectory(const Trajectory& t, const SystemConfig& cfg) {
  OutcomeLabel label;
  label.n_final = t.final_state().n;
  label.initial_condition_dependent = std::abs(cfg.pop2.alpha - cfg.pop1.theta) <= kRateTieTol;
  if (t.terminal_reason != TerminalReason::converged) {
    label.kind = Outcome::non_convergent;
  } else if (label.n_final < kOutcomeNTol) {
    label.kind = Outcome::tragedy;
  } else if (label.n_final > 1.0 - kOutcomeNTol) {
    label.kind = Outcome::abundance;
  } else {
    label.kind = Outcome::sustained;
  }
  return label;
}

}  // namespace ecogame

#endif  // ECOGAME_DYNAMICS_HPP
