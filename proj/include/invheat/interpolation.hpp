#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "invheat/errors.hpp"
#include "invheat/mesh.hpp"
#include "invheat/moving_frame.hpp"

namespace invheat {

/// Projection step of the evolution-projection strategy. `none` means the
/// solution stays on the moving grid.
enum class Projection {
  none,
  linear,
  quadratic,
  invariant_linear,
  invariant_quadratic,
  joint_invariant,
};

namespace interp {

template <typename Scalar>
Scalar linear(Scalar y, Scalar x0, Scalar u0, Scalar x1, Scalar u1) {
  return u0 + (y - x0) * (u1 - u0) / (x1 - x0);
}

/// Invariantized linear interpolation: each node value is first carried to
/// the query point along the local exponential with log slope s,
/// U_j = exp(s (y - x_j)) u_j, then interpolated linearly.
template <typename Scalar>
Scalar invariant_linear(Scalar y, Scalar x0, Scalar u0, Scalar x1, Scalar u1,
                        Scalar s) {
  using std::exp;
  if (!(u0 > 0) || !(u1 > 0)) {
    throw DomainError("invariant_linear: non-positive u value");
  }
  const Scalar cap0 = exp(s * (y - x0)) * u0;
  const Scalar cap1 = exp(s * (y - x1)) * u1;
  return cap0 + (y - x0) * (cap1 - cap0) / (x1 - x0);
}

/// Quadratic Lagrange interpolation on three nodes in one monotone chart.
template <typename Scalar>
Scalar quadratic(Scalar y, const std::array<Scalar, 3>& x,
                 const std::array<Scalar, 3>& u) {
  Scalar acc = 0;
  for (int j = 0; j < 3; ++j) {
    Scalar basis = 1;
    for (int k = 0; k < 3; ++k) {
      if (k != j) basis *= (y - x[k]) / (x[j] - x[k]);
    }
    acc += u[j] * basis;
  }
  return acc;
}

/// Invariantized quadratic Lagrange interpolation; exact on A e^{c x} when
/// s = c (the exponential factors turn every U_j into the target value and
/// the Lagrange weights sum to one).
template <typename Scalar>
Scalar invariant_quadratic(Scalar y, const std::array<Scalar, 3>& x,
                           const std::array<Scalar, 3>& u, Scalar s) {
  using std::exp;
  std::array<Scalar, 3> cap;
  for (int j = 0; j < 3; ++j) {
    if (!(u[j] > 0)) throw DomainError("invariant_quadratic: non-positive u value");
    cap[j] = exp(s * (y - x[j])) * u[j];
  }
  return quadratic(y, x, cap);
}

/// Single-node joint-invariant interpolation:
///   u(target) = exp(s (target - x_node)) u_node.
template <typename Scalar>
Scalar joint_invariant(Scalar target, Scalar x_node, Scalar u_node, Scalar s) {
  using std::exp;
  if (!(u_node > 0)) throw DomainError("joint_invariant: non-positive u value");
  return exp(s * (target - x_node)) * u_node;
}

}  // namespace interp

namespace detail {

/// Monotone chart over one period: coords[k] is the unwrapped coordinate of
/// the node with original index (rot + k) % n, coords[n] = coords[0] + period.
struct PeriodicChart {
  Index rot{0};
  std::vector<double> coords;  // size n + 1, strictly increasing
  double period{0};
  Index n{0};

  explicit PeriodicChart(const MeshState& m) {
    validate(m);
    n = m.size();
    period = m.period;
    rot = 0;
    for (Index i = 1; i < n; ++i) {
      if (m.x[i] < m.x[rot]) rot = i;
    }
    coords.resize(static_cast<size_t>(n) + 1);
    coords[0] = m.x[rot];
    for (Index k = 0; k < n; ++k) {
      coords[static_cast<size_t>(k) + 1] = coords[static_cast<size_t>(k)] + m.gap((rot + k) % n);
    }
  }

  Index original_index(Index k) const { return ((rot + k) % n + n) % n; }

  /// Chart coordinate of rotated index k, extended periodically one cell
  /// beyond either end (enough for quadratic stencils near the seam).
  double coord(Index k) const {
    if (k < 0) return coords[static_cast<size_t>(k + n)] - period;
    if (k > n) return coords[static_cast<size_t>(k - n)] + period;
    return coords[static_cast<size_t>(k)];
  }

  /// Map y into [coords[0], coords[0] + period).
  double lift(double y) const {
    return coords[0] + wrap_position(y - coords[0], period);
  }

  /// Rotated index k of the cell with coord(k) <= lifted y < coord(k+1).
  Index cell(double lifted_y) const {
    const auto begin = coords.begin();
    const auto end = coords.begin() + n + 1;
    auto it = std::upper_bound(begin, end, lifted_y);
    Index k = static_cast<Index>(it - begin) - 1;
    return std::clamp<Index>(k, 0, n - 1);
  }
};

}  // namespace detail

/// Index i of the periodic interval [x_i, x_{i+1}) containing y (left-closed,
/// cyclically). Throws MeshTangled on an invalid mesh.
inline Index locate(const MeshState& m, double y) {
  detail::PeriodicChart chart(m);
  return chart.original_index(chart.cell(chart.lift(y)));
}

/// Evaluate the configured interpolation of a time level at each target
/// abscissa. Quadratic variants use the three nodes centred on the node
/// nearest to the query (ties toward the cell's left node); invariant
/// variants take the log slope s from the centred difference at that node;
/// joint_invariant uses the nearest node alone. Every produced value is
/// checked positive (PositivityLost otherwise).
inline ArrayXd project(const MeshState& level, const ArrayXd& targets,
                       Projection method) {
  if (method == Projection::none) {
    throw DomainError("project: method must not be none");
  }
  const Index n = level.size();
  if (n < 3) throw MeshTangled("project: need at least 3 nodes");
  detail::require_positive_u(level.u, "project");
  detail::PeriodicChart chart(level);

  ArrayXd out(targets.size());
  for (Index t = 0; t < targets.size(); ++t) {
    const double y = chart.lift(targets[t]);
    const Index k = chart.cell(y);
    // nearest node of the cell, tie toward the left node
    const Index m = (y - chart.coord(k) <= chart.coord(k + 1) - y) ? k : k + 1;
    const Index jm = chart.original_index(m);

    double value = 0.0;
    switch (method) {
      case Projection::linear:
        value = interp::linear(y, chart.coord(k), level.u[chart.original_index(k)],
                               chart.coord(k + 1),
                               level.u[chart.original_index(k + 1)]);
        break;
      case Projection::invariant_linear:
        value = interp::invariant_linear(
            y, chart.coord(k), level.u[chart.original_index(k)],
            chart.coord(k + 1), level.u[chart.original_index(k + 1)],
            hat_log_slope(level, jm));
        break;
      case Projection::quadratic:
      case Projection::invariant_quadratic: {
        const std::array<double, 3> xs{chart.coord(m - 1), chart.coord(m),
                                       chart.coord(m + 1)};
        const std::array<double, 3> us{level.u[chart.original_index(m - 1)],
                                       level.u[jm],
                                       level.u[chart.original_index(m + 1)]};
        value = (method == Projection::quadratic)
                    ? interp::quadratic(y, xs, us)
                    : interp::invariant_quadratic(y, xs, us,
                                                  hat_log_slope(level, jm));
        break;
      }
      case Projection::joint_invariant:
        value = interp::joint_invariant(y, chart.coord(m), level.u[jm],
                                        hat_log_slope(level, jm));
        break;
      case Projection::none:
        break;  // unreachable
    }
    if (!(value > 0.0)) {
      throw PositivityLost("project: non-positive interpolated value at target " +
                           std::to_string(t));
    }
    out[t] = value;
  }
  return out;
}

}  // namespace invheat
