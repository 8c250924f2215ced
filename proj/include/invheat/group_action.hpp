#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "invheat/errors.hpp"

namespace invheat {

/// Element of the five-parameter symmetry subgroup of the heat equation:
/// time translation (eps1), space translation (eps2), log amplitude scaling
/// of u (eps3), joint log scaling (t by e^{2 eps4}, x by e^{eps4}) and
/// Galilean boost (eps5). The identity is all zeros. Elements act only
/// through apply_point / apply_stencil; no composition law is exposed.
template <typename Scalar = double>
struct GroupElementT {
  Scalar eps1{0};
  Scalar eps2{0};
  Scalar eps3{0};
  Scalar eps4{0};
  Scalar eps5{0};
};

using GroupElement = GroupElementT<double>;

template <typename Scalar = double>
struct PointTXUT {
  Scalar t{0};
  Scalar x{0};
  Scalar u{1};
};

using PointTXU = PointTXUT<double>;

/// One discretization cell: three nodes on level n, the centre node on level
/// n+1 and, optionally, the centre node on level n-1 (leapfrog). Positions
/// are stored in one unwrapped chart, so h+ = x_ip1 - x_i and
/// h- = x_i - x_im1 are plain differences and must be positive. The time of
/// each entry is inferred from its slot: tau_n for level n, tau_n + dtau for
/// level n+1, tau_n - dtau for level n-1.
template <typename Scalar = double>
struct StencilT {
  Scalar tau_n{0};
  Scalar dtau{0};
  Scalar x_im1{0};
  Scalar x_i{0};
  Scalar x_ip1{0};
  Scalar x_i_np1{0};
  Scalar u_im1{1};
  Scalar u_i{1};
  Scalar u_ip1{1};
  Scalar u_i_np1{1};

  struct PrevLevel {
    Scalar x_i_nm1{0};
    Scalar u_i_nm1{1};
  };
  std::optional<PrevLevel> prev{};

  Scalar h_plus() const { return x_ip1 - x_i; }
  Scalar h_minus() const { return x_i - x_im1; }
};

using Stencil = StencilT<double>;

/// Transformed point (t~, x~, u~) with
///   t~ = e^{2 eps4} (t + eps1),
///   x~ = e^{eps4} (x + eps2 + 2 eps5 t),
///   u~ = e^{eps3 - eps5 x - eps5^2 t} u.
template <typename Scalar>
PointTXUT<Scalar> apply_point(const GroupElementT<Scalar>& g,
                              const PointTXUT<Scalar>& p) {
  using std::exp;
  PointTXUT<Scalar> out;
  out.t = exp(2 * g.eps4) * (p.t + g.eps1);
  out.x = exp(g.eps4) * (p.x + g.eps2 + 2 * g.eps5 * p.t);
  out.u = exp(g.eps3 - g.eps5 * p.x - g.eps5 * g.eps5 * p.t) * p.u;
  return out;
}

/// Product action on the stencil: every (t, x, u) triple is moved by
/// apply_point at its own time level; computational labels are untouched.
/// The returned dtau is e^{2 eps4} dtau.
template <typename Scalar>
StencilT<Scalar> apply_stencil(const GroupElementT<Scalar>& g,
                               const StencilT<Scalar>& z) {
  using std::exp;
  const Scalar tn = z.tau_n;
  const Scalar tnp1 = z.tau_n + z.dtau;

  const auto im1 = apply_point(g, PointTXUT<Scalar>{tn, z.x_im1, z.u_im1});
  const auto ctr = apply_point(g, PointTXUT<Scalar>{tn, z.x_i, z.u_i});
  const auto ip1 = apply_point(g, PointTXUT<Scalar>{tn, z.x_ip1, z.u_ip1});
  const auto np1 = apply_point(g, PointTXUT<Scalar>{tnp1, z.x_i_np1, z.u_i_np1});

  StencilT<Scalar> out;
  out.tau_n = ctr.t;
  out.dtau = exp(2 * g.eps4) * z.dtau;
  out.x_im1 = im1.x;
  out.x_i = ctr.x;
  out.x_ip1 = ip1.x;
  out.x_i_np1 = np1.x;
  out.u_im1 = im1.u;
  out.u_i = ctr.u;
  out.u_ip1 = ip1.u;
  out.u_i_np1 = np1.u;
  if (z.prev) {
    const Scalar tnm1 = z.tau_n - z.dtau;
    const auto nm1 =
        apply_point(g, PointTXUT<Scalar>{tnm1, z.prev->x_i_nm1, z.prev->u_i_nm1});
    out.prev = typename StencilT<Scalar>::PrevLevel{nm1.x, nm1.u};
  }
  return out;
}

/// One-parameter subgroup of generator k in {1,...,5}: the element with
/// eps_k = s and all other parameters zero.
template <typename Scalar = double>
GroupElementT<Scalar> generator_flow(int k, Scalar s) {
  if (k < 1 || k > 5) {
    throw DomainError("generator_flow: generator index must be in 1..5");
  }
  GroupElementT<Scalar> g;
  switch (k) {
    case 1: g.eps1 = s; break;
    case 2: g.eps2 = s; break;
    case 3: g.eps3 = s; break;
    case 4: g.eps4 = s; break;
    default: g.eps5 = s; break;
  }
  return g;
}

/// Max-norm of the stencil entries, used to pick difference steps.
template <typename Scalar>
Scalar stencil_max_abs(const StencilT<Scalar>& z) {
  using std::abs;
  Scalar m = abs(z.tau_n);
  for (Scalar v : {z.dtau, z.x_im1, z.x_i, z.x_ip1, z.x_i_np1, z.u_im1, z.u_i,
                   z.u_ip1, z.u_i_np1}) {
    m = std::max(m, abs(v));
  }
  if (z.prev) {
    m = std::max({m, abs(z.prev->x_i_nm1), abs(z.prev->u_i_nm1)});
  }
  return m;
}

/// Central finite-difference approximation of the prolonged generator k
/// applied to f, evaluated at z:
///   [f(flow(k, step) . z) - f(flow(k, -step) . z)] / (2 step).
/// A step of 0 requests the default 1e-6 * max(1, |z|_inf).
template <typename Scalar, typename F>
Scalar lie_derivative(F&& f, int k, const StencilT<Scalar>& z, Scalar step = 0) {
  if (step <= 0) {
    step = Scalar(1e-6) * std::max(Scalar(1), stencil_max_abs(z));
  }
  const Scalar fp = f(apply_stencil(generator_flow<Scalar>(k, step), z));
  const Scalar fm = f(apply_stencil(generator_flow<Scalar>(k, -step), z));
  return (fp - fm) / (2 * step);
}

}  // namespace invheat
