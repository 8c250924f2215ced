#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invheat/errors.hpp"
#include "invheat/interpolation.hpp"
#include "invheat/mesh.hpp"
#include "invheat/schemes.hpp"

namespace invheat {

/// Periodic domain length used by all runs.
inline constexpr double kDomainLength = 2.0 * std::numbers::pi;

struct FourierMode {
  int k{1};
  double amplitude{1.0};
  double shift{0.0};
};

/// Initial condition as constant plus sinusoidal modes,
///   u(x, 0) = constant + sum amplitude sin(k (x - shift)).
/// Under the heat flow each mode decays by e^{-k^2 t}, which gives the exact
/// solution in closed form.
struct FourierIC {
  double constant{0.0};
  std::vector<FourierMode> modes;

  double eval(double x) const {
    double v = constant;
    for (const auto& m : modes) v += m.amplitude * std::sin(m.k * (x - m.shift));
    return v;
  }
};

inline FourierIC shifted_sine_ic() { return FourierIC{2.0, {{1, 1.0, 1.0}}}; }
inline FourierIC shifted_cosine_ic() {
  // cos x + 2 written as sin(x + pi/2) + 2
  return FourierIC{2.0, {{1, 1.0, -std::numbers::pi / 2.0}}};
}

inline double exact_solution(const FourierIC& ic, double x, double t) {
  double v = ic.constant;
  for (const auto& m : ic.modes) {
    v += m.amplitude * std::exp(-static_cast<double>(m.k) * m.k * t) *
         std::sin(m.k * (x - m.shift));
  }
  return v;
}

/// Positivity of the initial condition, checked by dense sampling at 1e4
/// points; mode wavenumbers must be positive integers (period-compatible).
inline void validate_ic(const FourierIC& ic) {
  if (ic.constant < 0.0) throw DomainError("FourierIC: constant must be >= 0");
  for (const auto& m : ic.modes) {
    if (m.k < 1) throw DomainError("FourierIC: mode wavenumber must be >= 1");
  }
  constexpr int kSamples = 10000;
  for (int i = 0; i < kSamples; ++i) {
    const double x = kDomainLength * static_cast<double>(i) / kSamples;
    if (!(ic.eval(x) > 0.0)) {
      throw DomainError("FourierIC: initial condition is not strictly positive");
    }
  }
}

enum class GridKind { stationary, invariantized, dorodnitsyn };

struct RunConfig {
  Index N{64};
  SchemeKind scheme{SchemeKind::invariant_ftcs};
  GridKind grid{GridKind::invariantized};
  Projection projection{Projection::none};
  double sigma{0.25};
  double t_final{1.0};
  FourierIC ic{shifted_sine_ic()};
  /// When set and projection is active, evaluate both grid equations each
  /// step and record their largest disagreement (they must coincide on the
  /// uniform lattice).
  bool check_grid_consistency{false};
};

enum class RunStatus { ok, positivity_lost, mesh_tangled };

struct RunResult {
  MeshState final_state;
  long steps_planned{0};
  long steps_taken{0};
  double dtau{0.0};
  double wall_seconds{0.0};
  RunStatus status{RunStatus::ok};
  std::string message;
  double max_grid_equation_mismatch{0.0};

  bool ok() const { return status == RunStatus::ok; }
};

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::positivity_lost: return "positivity_lost";
    default: return "mesh_tangled";
  }
}

namespace detail {

inline ArrayXd wrap_all(const ArrayXd& x, double period) {
  ArrayXd out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = wrap_position(x[i], period);
  return out;
}

}  // namespace detail

/// Evolution-projection time integration. Starting from the uniform lattice
/// with u = ic(x), each step (1) moves the grid by the configured grid
/// equation, (2) solves the configured scheme for u^{n+1}, (3) if a
/// projection is configured, interpolates back to the uniform lattice, and
/// (4) advances tau. The step count is ceil(t_final / (sigma h^2)) with dtau
/// adjusted so the final time is hit exactly. Leapfrog bootstraps its first
/// step with one invariant FTCS step. PositivityLost / MeshTangled abort the
/// run and are recorded in the result.
inline RunResult run(const RunConfig& cfg) {
  if (cfg.N < 3) throw DomainError("run: N must be >= 3");
  if (!(cfg.sigma > 0.0)) throw DomainError("run: sigma must be positive");
  if (!(cfg.t_final > 0.0)) throw DomainError("run: t_final must be positive");
  validate_ic(cfg.ic);

  const auto t_start = std::chrono::steady_clock::now();
  const double h = kDomainLength / static_cast<double>(cfg.N);
  const ArrayXd lattice = uniform_lattice(cfg.N, kDomainLength);

  RunResult res;
  res.steps_planned =
      static_cast<long>(std::ceil(cfg.t_final / (cfg.sigma * h * h)));
  res.dtau = cfg.t_final / static_cast<double>(res.steps_planned);

  MeshState state;
  state.tau = 0.0;
  state.period = kDomainLength;
  state.x = lattice;
  state.u = lattice.unaryExpr([&](double x) { return cfg.ic.eval(x); });
  state.uniform = true;

  ArrayXd x_prev;  // level n-1 for leapfrog
  ArrayXd u_prev;

  const bool project_back = cfg.projection != Projection::none;
  try {
    for (long step = 0; step < res.steps_planned; ++step) {
      ArrayXd x_np1;
      switch (cfg.grid) {
        case GridKind::stationary: x_np1 = state.x; break;
        case GridKind::invariantized:
          x_np1 = grid_step_invariantized(state, res.dtau);
          break;
        case GridKind::dorodnitsyn:
          x_np1 = grid_step_dorodnitsyn(state, res.dtau);
          break;
      }
      if (cfg.check_grid_consistency && project_back &&
          cfg.grid != GridKind::stationary) {
        const ArrayXd other = cfg.grid == GridKind::invariantized
                                  ? grid_step_dorodnitsyn(state, res.dtau)
                                  : grid_step_invariantized(state, res.dtau);
        res.max_grid_equation_mismatch = std::max(
            res.max_grid_equation_mismatch, (x_np1 - other).abs().maxCoeff());
      }

      ArrayXd u_np1;
      switch (cfg.scheme) {
        case SchemeKind::ftcs:
          u_np1 = step_ftcs(state, x_np1, res.dtau);
          break;
        case SchemeKind::invariant_ftcs:
          u_np1 = step_invariant_ftcs(state, x_np1, res.dtau);
          break;
        case SchemeKind::invariant_leapfrog:
          if (step == 0) {
            u_np1 = step_invariant_ftcs(state, x_np1, res.dtau);
          } else {
            u_np1 = step_invariant_leapfrog(state, x_np1, x_prev, u_prev,
                                            res.dtau);
          }
          break;
      }

      x_prev = state.x;
      u_prev = state.u;

      MeshState next;
      next.tau = state.tau + res.dtau;
      next.period = kDomainLength;
      next.x = detail::wrap_all(x_np1, kDomainLength);
      next.u = std::move(u_np1);
      next.uniform = false;
      validate(next);

      if (project_back) {
        next.u = project(next, lattice, cfg.projection);
        next.x = lattice;
        next.uniform = true;
      }

      state = std::move(next);
      res.steps_taken = step + 1;
    }
    state.tau = cfg.t_final;  // ceil/adjust guarantees this to round-off
  } catch (const PositivityLost& e) {
    res.status = RunStatus::positivity_lost;
    res.message = e.what();
  } catch (const MeshTangled& e) {
    res.status = RunStatus::mesh_tangled;
    res.message = e.what();
  }

  res.final_state = std::move(state);
  res.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  return res;
}

/// Maximum-norm error against the exact Fourier-decay solution, evaluated at
/// the final node positions (the moving ones when no projection is used).
inline double linf_error(const RunResult& result, const FourierIC& ic) {
  const MeshState& m = result.final_state;
  double e = 0.0;
  for (Index i = 0; i < m.size(); ++i) {
    e = std::max(e, std::abs(m.u[i] - exact_solution(ic, m.x[i], m.tau)));
  }
  return e;
}

}  // namespace invheat
