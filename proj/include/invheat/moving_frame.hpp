#pragma once

#include <cmath>

#include "invheat/errors.hpp"
#include "invheat/group_action.hpp"
#include "invheat/mesh.hpp"

namespace invheat {

/// First-order jet coordinates (t, x, u, u_t, u_x). The frame exists on the
/// domain u > 0 and u_t/u - (u_x/u)^2 > 0.
template <typename Scalar = double>
struct Jet1PointT {
  Scalar t{0};
  Scalar x{0};
  Scalar u{1};
  Scalar u_t{1};
  Scalar u_x{0};
};

using Jet1Point = Jet1PointT<double>;

/// Moving frame on the first jet space, from the normalization conditions
/// t = 0, x = 0, u = 1, u_t = 1, u_x = 0.
template <typename Scalar>
GroupElementT<Scalar> continuous_frame(const Jet1PointT<Scalar>& j) {
  using std::log;
  using std::sqrt;
  if (!(j.u > 0)) throw DomainError("continuous_frame: u must be positive");
  const Scalar slope = j.u_x / j.u;
  const Scalar arg = j.u_t / j.u - slope * slope;
  if (!(arg > 0)) {
    throw FrameUndefined("continuous_frame: u_t/u - (u_x/u)^2 is not positive");
  }
  GroupElementT<Scalar> g;
  g.eps1 = -j.t;
  g.eps2 = -(j.x + 2 * j.t * slope);
  g.eps3 = -(log(j.u) - j.x * slope - j.t * slope * slope);
  g.eps4 = log(sqrt(arg));
  g.eps5 = slope;
  return g;
}

namespace detail {

template <typename Scalar>
void require_valid_stencil(const StencilT<Scalar>& z, const char* where) {
  if (!(z.dtau > 0)) throw DomainError(std::string(where) + ": dtau must be positive");
  if (!(z.h_plus() > 0) || !(z.h_minus() > 0)) {
    throw DomainError(std::string(where) + ": spacings must be positive");
  }
}

template <typename Scalar>
void require_positive_u(const StencilT<Scalar>& z, const char* where) {
  bool ok = z.u_im1 > 0 && z.u_i > 0 && z.u_ip1 > 0 && z.u_i_np1 > 0;
  if (z.prev) ok = ok && z.prev->u_i_nm1 > 0;
  if (!ok) throw DomainError(std::string(where) + ": non-positive u value");
}

/// Centred log slope (ln u)_x^d = (ln u_{i+1} - ln u_{i-1}) / (h+ + h-).
template <typename Scalar>
Scalar log_slope(const StencilT<Scalar>& z) {
  using std::log;
  return (log(z.u_ip1) - log(z.u_im1)) / (z.h_plus() + z.h_minus());
}

}  // namespace detail

/// Moving frame on the space of stencil variables, from the discrete
/// normalization conditions tau^n = 0, x_i^n = 0, u_i^n = 1, u_t^d = 1,
/// u_x^d = 0. Throws FrameUndefined when the invariantized discrete time
/// derivative (the eps4 logarithm argument) is not positive.
template <typename Scalar>
GroupElementT<Scalar> discrete_frame(const StencilT<Scalar>& z) {
  using std::exp;
  using std::log;
  detail::require_valid_stencil(z, "discrete_frame");
  detail::require_positive_u(z, "discrete_frame");

  const Scalar lam = detail::log_slope(z);
  const Scalar x_tau = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar arg =
      (exp(-z.dtau * (x_tau * lam + lam * lam)) * z.u_i_np1 - z.u_i) /
      (z.u_i * z.dtau);
  if (!(arg > 0)) {
    throw FrameUndefined("discrete_frame: invariantized time derivative not positive");
  }

  GroupElementT<Scalar> g;
  g.eps1 = -z.tau_n;
  g.eps2 = -(z.x_i + 2 * z.tau_n * lam);
  g.eps3 = -(log(z.u_i) - z.x_i * lam - z.tau_n * lam * lam);
  g.eps4 = Scalar(0.5) * log(arg);
  g.eps5 = lam;
  return g;
}

/// Canonical orbit representative: apply_stencil(discrete_frame(z), z).
/// The result satisfies the discrete normalizations up to round-off and is
/// constant along group orbits.
template <typename Scalar>
StencilT<Scalar> canonical_form(const StencilT<Scalar>& z) {
  return apply_stencil(discrete_frame(z), z);
}

/// Centred log slope at node i of a time level, (ln u_{i+1} - ln u_{i-1})
/// divided by the unwrapped distance x_{i+1} - x_{i-1}. This is the quantity
/// the modified interpolation frame substitutes for eps5.
inline double hat_log_slope(const MeshState& level, Index i) {
  const Index n = level.size();
  if (n < 3) throw MeshTangled("hat_log_slope: need at least 3 nodes");
  const Index im1 = (i + n - 1) % n;
  const Index ip1 = (i + 1) % n;
  if (!(level.u[im1] > 0.0) || !(level.u[ip1] > 0.0)) {
    throw DomainError("hat_log_slope: non-positive u value");
  }
  const double denom = level.gap(im1) + level.gap(i);
  if (!(denom > 0.0)) throw MeshTangled("hat_log_slope: non-positive node distance");
  return (std::log(level.u[ip1]) - std::log(level.u[im1])) / denom;
}

}  // namespace invheat
