#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "invheat/errors.hpp"

namespace invheat {

using Eigen::ArrayXd;
using Eigen::Index;

/// Wrap a coordinate into [0, period).
inline double wrap_position(double x, double period) {
  double w = x - period * std::floor(x / period);
  if (w >= period) w -= period;  // guard against floor round-off at the seam
  return w;
}

/// Minimal symmetric representative of a displacement modulo the period,
/// in [-period/2, period/2).
inline double wrap_displacement(double dx, double period) {
  return dx - period * std::floor(dx / period + 0.5);
}

/// One periodic time level: node positions in [0, period), positive values,
/// and the flag telling whether x is the exact uniform lattice.
struct MeshState {
  double tau{0.0};
  double period{2.0 * M_PI};
  ArrayXd x;
  ArrayXd u;
  bool uniform{false};

  Index size() const { return x.size(); }

  /// Periodic gap from node i to node i+1 (cyclically), in [0, period).
  double gap(Index i) const {
    const Index n = x.size();
    const Index j = (i + 1) % n;
    return wrap_position(x[j] - x[i], period);
  }
};

inline ArrayXd uniform_lattice(Index n, double period) {
  ArrayXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = static_cast<double>(i) * period / static_cast<double>(n);
  return x;
}

/// Throws MeshTangled if any periodic gap is zero (coincident or reordered
/// nodes) or the gaps do not sum to the period within 1e-10 * period.
inline void validate(const MeshState& m) {
  const Index n = m.size();
  if (n < 2) throw MeshTangled("mesh has fewer than 2 nodes");
  if (m.u.size() != n) throw MeshTangled("positions/values size mismatch");
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double g = m.gap(i);
    if (!(g > 0.0)) {
      throw MeshTangled("non-positive gap after node " + std::to_string(i));
    }
    total += g;
  }
  if (std::abs(total - m.period) > 1e-10 * m.period) {
    throw MeshTangled("gaps sum to " + std::to_string(total) +
                      ", expected period " + std::to_string(m.period));
  }
}

namespace detail {

inline void require_positive_u(const ArrayXd& u, const char* where) {
  if ((u <= 0.0).any()) {
    throw DomainError(std::string(where) + ": non-positive u value");
  }
}

}  // namespace detail

/// Grid equation obtained by invariantization of x_i^{n+1}: every node moves
/// with velocity -2 (ln u)_x^d, i.e.
///   x_i^{n+1} = x_i^n + (2 dtau / (h+ + h-)) (ln u_{i-1} - ln u_{i+1}).
/// Returns raw positions in the chart of m.x (not re-wrapped).
inline ArrayXd grid_step_invariantized(const MeshState& m, double dtau) {
  detail::require_positive_u(m.u, "grid_step_invariantized");
  const Index n = m.size();
  ArrayXd out(n);
  for (Index i = 0; i < n; ++i) {
    const Index im1 = (i + n - 1) % n;
    const Index ip1 = (i + 1) % n;
    const double hm = m.gap(im1);
    const double hp = m.gap(i);
    out[i] = m.x[i] +
             (2.0 * dtau / (hp + hm)) * (std::log(m.u[im1]) - std::log(m.u[ip1]));
  }
  return out;
}

/// Difference-invariant grid equation (invariant under the full symmetry
/// group); coincides with grid_step_invariantized when h+ = h-:
///   x_i^{n+1} = x_i^n + (2 dtau / (h+ + h-)) *
///               [(h+/h-) ln(u_{i-1}/u_i) - (h-/h+) ln(u_{i+1}/u_i)].
inline ArrayXd grid_step_dorodnitsyn(const MeshState& m, double dtau) {
  detail::require_positive_u(m.u, "grid_step_dorodnitsyn");
  const Index n = m.size();
  ArrayXd out(n);
  for (Index i = 0; i < n; ++i) {
    const Index im1 = (i + n - 1) % n;
    const Index ip1 = (i + 1) % n;
    const double hm = m.gap(im1);
    const double hp = m.gap(i);
    const double bracket = (hp / hm) * std::log(m.u[im1] / m.u[i]) -
                           (hm / hp) * std::log(m.u[ip1] / m.u[i]);
    out[i] = m.x[i] + (2.0 * dtau / (hp + hm)) * bracket;
  }
  return out;
}

}  // namespace invheat
