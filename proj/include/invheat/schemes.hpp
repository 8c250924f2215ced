#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "invheat/errors.hpp"
#include "invheat/group_action.hpp"
#include "invheat/mesh.hpp"
#include "invheat/moving_frame.hpp"

namespace invheat {

enum class SchemeKind { ftcs, invariant_ftcs, invariant_leapfrog };

/// Residual value together with a magnitude scale (the sum of the absolute
/// values of the atomic summands). Exactness and invariance assertions are
/// relative to this scale, since the residual itself vanishes on solutions.
template <typename Scalar = double>
struct ResidualPartsT {
  Scalar value{0};
  Scalar scale{0};
};

using ResidualParts = ResidualPartsT<double>;

namespace detail {

/// Spatial term of the invariant schemes:
///   (4/(h+ + h-)^2) [u_{i+1} r^{-h+/(h+ + h-)} + u_{i-1} r^{h-/(h+ + h-)} - 2 u_i],
/// with r = u_{i+1}/u_{i-1}. On uniform grids this is the geometric-mean
/// second difference (2/h^2)(sqrt(u_+ u_-) - u_i).
template <typename Scalar>
ResidualPartsT<Scalar> invariant_diffusion_term(const StencilT<Scalar>& z) {
  using std::abs;
  using std::pow;
  const Scalar hp = z.h_plus();
  const Scalar hm = z.h_minus();
  const Scalar hsum = hp + hm;
  const Scalar r = z.u_ip1 / z.u_im1;
  const Scalar a = z.u_ip1 * pow(r, -hp / hsum);
  const Scalar b = z.u_im1 * pow(r, hm / hsum);
  const Scalar c = 4 / (hsum * hsum);
  return {c * (a + b - 2 * z.u_i), c * (abs(a) + abs(b) + 2 * abs(z.u_i))};
}

}  // namespace detail

/// Standard FTCS scheme in computational coordinates:
///   u_t^d - (4/(h+ + h-)^2) (u_{i+1} + u_{i-1} - 2 u_i - (h+ - h-) u_x^d),
/// where u_t^d = (u_i^{n+1} - u_i^n)/dtau - x_tau^d u_x^d and
/// u_x^d = (u_{i+1} - u_{i-1})/(h+ + h-).
template <typename Scalar>
ResidualPartsT<Scalar> residual_ftcs_parts(const StencilT<Scalar>& z) {
  using std::abs;
  detail::require_valid_stencil(z, "residual_ftcs");
  const Scalar hp = z.h_plus();
  const Scalar hm = z.h_minus();
  const Scalar hsum = hp + hm;
  const Scalar u_x = (z.u_ip1 - z.u_im1) / hsum;
  const Scalar x_tau = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar u_t = (z.u_i_np1 - z.u_i) / z.dtau - x_tau * u_x;
  const Scalar c = 4 / (hsum * hsum);
  const Scalar diff = c * (z.u_ip1 + z.u_im1 - 2 * z.u_i - (hp - hm) * u_x);
  ResidualPartsT<Scalar> out;
  out.value = u_t - diff;
  out.scale = (abs(z.u_i_np1) + abs(z.u_i)) / z.dtau + abs(x_tau * u_x) +
              c * (abs(z.u_ip1) + abs(z.u_im1) + 2 * abs(z.u_i) +
                   abs((hp - hm) * u_x));
  return out;
}

template <typename Scalar>
Scalar residual_ftcs(const StencilT<Scalar>& z) {
  return residual_ftcs_parts(z).value;
}

/// Invariantization of the FTCS scheme:
///   S = [exp(-dtau (x_tau^d L + L^2)) u_i^{n+1} - u_i^n] / dtau
///       - (4/(h+ + h-)^2) [u_{i+1} r^{-h+/(h+ + h-)}
///                          + u_{i-1} r^{h-/(h+ + h-)} - 2 u_i],
/// with L = (ln u)_x^d and r = u_{i+1}/u_{i-1}. S is a relative invariant:
/// its zero set is preserved by the whole five-parameter subgroup.
template <typename Scalar>
ResidualPartsT<Scalar> residual_invariant_ftcs_parts(const StencilT<Scalar>& z) {
  using std::abs;
  using std::exp;
  detail::require_valid_stencil(z, "residual_invariant_ftcs");
  detail::require_positive_u(z, "residual_invariant_ftcs");
  const Scalar lam = detail::log_slope(z);
  const Scalar x_tau = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar damped = exp(-z.dtau * (x_tau * lam + lam * lam)) * z.u_i_np1;
  const auto diff = detail::invariant_diffusion_term(z);
  ResidualPartsT<Scalar> out;
  out.value = (damped - z.u_i) / z.dtau - diff.value;
  out.scale = (abs(damped) + abs(z.u_i)) / z.dtau + diff.scale;
  return out;
}

template <typename Scalar>
Scalar residual_invariant_ftcs(const StencilT<Scalar>& z) {
  return residual_invariant_ftcs_parts(z).value;
}

/// Invariant leapfrog scheme (second order in time):
///   [exp(-dtau (xh L + L^2)) u_i^{n+1} - exp(dtau (xc L + L^2)) u_i^{n-1}]
///     / (2 dtau)  -  (spatial term as in the invariant FTCS scheme),
/// where xh = (x_i^{n+1} - x_i^n)/dtau and xc = (x_i^n - x_i^{n-1})/dtau.
template <typename Scalar>
ResidualPartsT<Scalar> residual_invariant_leapfrog_parts(const StencilT<Scalar>& z) {
  using std::abs;
  using std::exp;
  detail::require_valid_stencil(z, "residual_invariant_leapfrog");
  detail::require_positive_u(z, "residual_invariant_leapfrog");
  if (!z.prev) {
    throw DomainError("residual_invariant_leapfrog: stencil has no level n-1");
  }
  const Scalar lam = detail::log_slope(z);
  const Scalar x_hat = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar x_check = (z.x_i - z.prev->x_i_nm1) / z.dtau;
  const Scalar fwd = exp(-z.dtau * (x_hat * lam + lam * lam)) * z.u_i_np1;
  const Scalar bwd = exp(z.dtau * (x_check * lam + lam * lam)) * z.prev->u_i_nm1;
  const auto diff = detail::invariant_diffusion_term(z);
  ResidualPartsT<Scalar> out;
  out.value = (fwd - bwd) / (2 * z.dtau) - diff.value;
  out.scale = (abs(fwd) + abs(bwd)) / (2 * z.dtau) + diff.scale;
  return out;
}

template <typename Scalar>
Scalar residual_invariant_leapfrog(const StencilT<Scalar>& z) {
  return residual_invariant_leapfrog_parts(z).value;
}

/// Residual of the invariantized grid equation on a stencil,
///   M = (x_i^{n+1} - x_i^n) - (2 dtau / (h+ + h-)) (ln u_{i-1} - ln u_{i+1}).
/// M is a relative invariant of weight e^{eps4}; its zero set is preserved.
template <typename Scalar>
ResidualPartsT<Scalar> grid_residual_invariantized_parts(const StencilT<Scalar>& z) {
  using std::abs;
  using std::log;
  detail::require_valid_stencil(z, "grid_residual_invariantized");
  detail::require_positive_u(z, "grid_residual_invariantized");
  const Scalar c = 2 * z.dtau / (z.h_plus() + z.h_minus());
  ResidualPartsT<Scalar> out;
  out.value = (z.x_i_np1 - z.x_i) - c * (log(z.u_im1) - log(z.u_ip1));
  out.scale = abs(z.x_i_np1) + abs(z.x_i) +
              c * (abs(log(z.u_im1)) + abs(log(z.u_ip1)));
  return out;
}

/// Residual of the difference-invariant grid equation on a stencil,
///   (x_i^{n+1} - x_i^n) - (2 dtau / (h+ + h-)) *
///     [(h+/h-) ln(u_{i-1}/u_i) - (h-/h+) ln(u_{i+1}/u_i)].
template <typename Scalar>
ResidualPartsT<Scalar> grid_residual_dorodnitsyn_parts(const StencilT<Scalar>& z) {
  using std::abs;
  using std::log;
  detail::require_valid_stencil(z, "grid_residual_dorodnitsyn");
  detail::require_positive_u(z, "grid_residual_dorodnitsyn");
  const Scalar hp = z.h_plus();
  const Scalar hm = z.h_minus();
  const Scalar c = 2 * z.dtau / (hp + hm);
  const Scalar a = (hp / hm) * log(z.u_im1 / z.u_i);
  const Scalar b = (hm / hp) * log(z.u_ip1 / z.u_i);
  ResidualPartsT<Scalar> out;
  out.value = (z.x_i_np1 - z.x_i) - c * (a - b);
  out.scale = abs(z.x_i_np1) + abs(z.x_i) + c * (abs(a) + abs(b));
  return out;
}

/// u_i^{n+1} making residual_ftcs vanish (the stencil's own u_i_np1 is
/// ignored).
template <typename Scalar>
Scalar solve_ftcs(const StencilT<Scalar>& z) {
  detail::require_valid_stencil(z, "solve_ftcs");
  const Scalar hp = z.h_plus();
  const Scalar hm = z.h_minus();
  const Scalar hsum = hp + hm;
  const Scalar u_x = (z.u_ip1 - z.u_im1) / hsum;
  const Scalar x_tau = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar diff =
      4 / (hsum * hsum) * (z.u_ip1 + z.u_im1 - 2 * z.u_i - (hp - hm) * u_x);
  return z.u_i + z.dtau * (x_tau * u_x + diff);
}

/// u_i^{n+1} making residual_invariant_ftcs vanish:
///   u_i^{n+1} = exp(dtau (x_tau^d L + L^2)) (u_i^n + dtau D_i).
/// Throws PositivityLost when u_i^n + dtau D_i <= 0.
template <typename Scalar>
Scalar solve_invariant_ftcs(const StencilT<Scalar>& z) {
  using std::exp;
  detail::require_valid_stencil(z, "solve_invariant_ftcs");
  detail::require_positive_u(z, "solve_invariant_ftcs");
  const Scalar lam = detail::log_slope(z);
  const Scalar x_tau = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar inner = z.u_i + z.dtau * detail::invariant_diffusion_term(z).value;
  if (!(inner > 0)) {
    throw PositivityLost("solve_invariant_ftcs: u + dtau*D <= 0");
  }
  return exp(z.dtau * (x_tau * lam + lam * lam)) * inner;
}

/// u_i^{n+1} making residual_invariant_leapfrog vanish (single exponential
/// inversion, same pattern as the FTCS solve).
template <typename Scalar>
Scalar solve_invariant_leapfrog(const StencilT<Scalar>& z) {
  using std::exp;
  detail::require_valid_stencil(z, "solve_invariant_leapfrog");
  detail::require_positive_u(z, "solve_invariant_leapfrog");
  if (!z.prev) throw DomainError("solve_invariant_leapfrog: stencil has no level n-1");
  const Scalar lam = detail::log_slope(z);
  const Scalar x_hat = (z.x_i_np1 - z.x_i) / z.dtau;
  const Scalar x_check = (z.x_i - z.prev->x_i_nm1) / z.dtau;
  const Scalar inner =
      exp(z.dtau * (x_check * lam + lam * lam)) * z.prev->u_i_nm1 +
      2 * z.dtau * detail::invariant_diffusion_term(z).value;
  if (!(inner > 0)) {
    throw PositivityLost("solve_invariant_leapfrog: non-positive solve");
  }
  return exp(z.dtau * (x_hat * lam + lam * lam)) * inner;
}

namespace detail {

/// Stencil of node i of a periodic level, in the unwrapped chart centred on
/// x_i. x_np1 must be raw grid-step output (same chart as level.x).
inline Stencil node_stencil(const MeshState& level, const ArrayXd& x_np1,
                            double dtau, Index i) {
  const Index n = level.size();
  const Index im1 = (i + n - 1) % n;
  const Index ip1 = (i + 1) % n;
  Stencil z;
  z.tau_n = level.tau;
  z.dtau = dtau;
  z.x_i = level.x[i];
  z.x_im1 = level.x[i] - level.gap(im1);
  z.x_ip1 = level.x[i] + level.gap(i);
  z.x_i_np1 = x_np1[i];
  z.u_im1 = level.u[im1];
  z.u_i = level.u[i];
  z.u_ip1 = level.u[ip1];
  return z;
}

inline void check_step_sizes(const MeshState& level, const ArrayXd& x_np1,
                             double dtau, const char* where) {
  if (level.size() < 3) throw MeshTangled(std::string(where) + ": need at least 3 nodes");
  if (x_np1.size() != level.size()) {
    throw DomainError(std::string(where) + ": position size mismatch");
  }
  if (!(dtau > 0.0)) throw DomainError(std::string(where) + ": dtau must be positive");
}

}  // namespace detail

/// Explicit FTCS update over a whole level; the returned values satisfy
/// residual_ftcs = 0 at every node.
inline ArrayXd step_ftcs(const MeshState& level_n, const ArrayXd& x_np1,
                         double dtau) {
  detail::check_step_sizes(level_n, x_np1, dtau, "step_ftcs");
  ArrayXd out(level_n.size());
  for (Index i = 0; i < level_n.size(); ++i) {
    out[i] = solve_ftcs(detail::node_stencil(level_n, x_np1, dtau, i));
  }
  return out;
}

/// Invariant FTCS update over a whole level. PositivityLost aborts with the
/// offending node in the message.
inline ArrayXd step_invariant_ftcs(const MeshState& level_n, const ArrayXd& x_np1,
                                   double dtau) {
  detail::check_step_sizes(level_n, x_np1, dtau, "step_invariant_ftcs");
  detail::require_positive_u(level_n.u, "step_invariant_ftcs");
  ArrayXd out(level_n.size());
  for (Index i = 0; i < level_n.size(); ++i) {
    try {
      out[i] = solve_invariant_ftcs(detail::node_stencil(level_n, x_np1, dtau, i));
    } catch (const PositivityLost&) {
      throw PositivityLost("step_invariant_ftcs: u + dtau*D <= 0 at node " +
                           std::to_string(i));
    }
  }
  return out;
}

/// Invariant leapfrog update over a whole level. x_nm1 may be in any wrapped
/// chart; the backward displacement is unwrapped per node.
inline ArrayXd step_invariant_leapfrog(const MeshState& level_n,
                                       const ArrayXd& x_np1, const ArrayXd& x_nm1,
                                       const ArrayXd& u_nm1, double dtau) {
  detail::check_step_sizes(level_n, x_np1, dtau, "step_invariant_leapfrog");
  detail::require_positive_u(level_n.u, "step_invariant_leapfrog");
  detail::require_positive_u(u_nm1, "step_invariant_leapfrog");
  if (x_nm1.size() != level_n.size() || u_nm1.size() != level_n.size()) {
    throw DomainError("step_invariant_leapfrog: level n-1 size mismatch");
  }
  ArrayXd out(level_n.size());
  for (Index i = 0; i < level_n.size(); ++i) {
    Stencil z = detail::node_stencil(level_n, x_np1, dtau, i);
    const double back =
        wrap_displacement(level_n.x[i] - x_nm1[i], level_n.period);
    z.prev = Stencil::PrevLevel{level_n.x[i] - back, u_nm1[i]};
    try {
      out[i] = solve_invariant_leapfrog(z);
    } catch (const PositivityLost&) {
      throw PositivityLost("step_invariant_leapfrog: non-positive solve at node " +
                           std::to_string(i));
    }
  }
  return out;
}

/// Centred-difference weights c^k_{p,j}, j = -p/2..p/2, for the k-th
/// derivative (k = 1 or 2) at order p (even, >= 2):
///   c^1_{p,j} = (-1)^{j+1} (p/2)!^2 / (j (p/2+j)! (p/2-j)!),  c^1_{p,0} = 0,
///   c^2_{p,j} = 2 c^1_{p,j} / j,  c^2_{p,0} = -2 sum_{i=1}^{p/2} 1/i^2.
template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> centered_weights(int p, int k) {
  if (p < 2 || p % 2 != 0) {
    throw DomainError("centered_weights: order p must be even and >= 2");
  }
  if (k != 1 && k != 2) {
    throw DomainError("centered_weights: derivative index k must be 1 or 2");
  }
  const int half = p / 2;
  auto factorial = [](int m) {
    Scalar f = 1;
    for (int i = 2; i <= m; ++i) f *= Scalar(i);
    return f;
  };
  const Scalar half_fact_sq = factorial(half) * factorial(half);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> w(p + 1);
  for (int j = -half; j <= half; ++j) {
    Scalar c1;
    if (j == 0) {
      c1 = 0;
    } else {
      const Scalar sign = (j + 1) % 2 == 0 ? Scalar(1) : Scalar(-1);
      c1 = sign * half_fact_sq /
           (Scalar(j) * factorial(half + j) * factorial(half - j));
    }
    w[j + half] = (k == 1) ? c1 : 2 * c1 / Scalar(j == 0 ? 1 : j);
  }
  if (k == 2) {
    Scalar s = 0;
    for (int i = 1; i <= half; ++i) s += Scalar(1) / (Scalar(i) * Scalar(i));
    w[half] = -2 * s;
  }
  return w;
}

/// Order-p invariantized second-derivative surrogate on 2(p/2)+1 uniform
/// physical nodes (centre value u[p/2]):
///   (1/hx^2) sum_j c^2_{p,j} exp(-eps5 j hx) u_j,
///   eps5 = (1/hx) sum_j c^1_{p,j} ln u_j.
/// Converges to u_xx - u_x^2/u at order p; vanishes identically on
/// exponentials A e^{a x}.
template <typename Scalar>
Scalar invariantized_spatial_p(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& u,
                               Scalar hx, int p) {
  using std::exp;
  using std::log;
  if (p < 2 || p % 2 != 0) {
    throw DomainError("invariantized_spatial_p: order p must be even and >= 2");
  }
  if (u.size() != p + 1) {
    throw DomainError("invariantized_spatial_p: need p+1 node values");
  }
  if (!(hx > 0)) throw DomainError("invariantized_spatial_p: hx must be positive");
  if ((u <= Scalar(0)).any()) {
    throw DomainError("invariantized_spatial_p: non-positive u value");
  }
  const auto c1 = centered_weights<Scalar>(p, 1);
  const auto c2 = centered_weights<Scalar>(p, 2);
  const int half = p / 2;
  Scalar eps5 = 0;
  for (int j = -half; j <= half; ++j) eps5 += c1[j + half] * log(u[j + half]);
  eps5 /= hx;
  Scalar acc = 0;
  for (int j = -half; j <= half; ++j) {
    acc += c2[j + half] * exp(-eps5 * Scalar(j) * hx) * u[j + half];
  }
  return acc / (hx * hx);
}

}  // namespace invheat
