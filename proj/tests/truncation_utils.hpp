#pragma once

// Test-only helpers: sample scheme residuals on stencils taken from the
// exact heat solution u(t, x) = 2 + e^{-t} sin(x - 1) and fit observed
// orders. Independent of the time-stepping code under test.

#include <cmath>
#include <vector>

#include "invheat/group_action.hpp"
#include "invheat/schemes.hpp"

namespace invheat::testing {

inline double decaying_sine(double t, double x) {
  return 2.0 + std::exp(-t) * std::sin(x - 1.0);
}

inline Stencil exact_solution_stencil(double hx, double dtau, double t0,
                                      double x0, bool three_levels) {
  Stencil z;
  z.tau_n = t0;
  z.dtau = dtau;
  z.x_im1 = x0 - hx;
  z.x_i = x0;
  z.x_ip1 = x0 + hx;
  z.x_i_np1 = x0;  // stationary grid
  z.u_im1 = decaying_sine(t0, x0 - hx);
  z.u_i = decaying_sine(t0, x0);
  z.u_ip1 = decaying_sine(t0, x0 + hx);
  z.u_i_np1 = decaying_sine(t0 + dtau, x0);
  if (three_levels) {
    z.prev = Stencil::PrevLevel{x0, decaying_sine(t0 - dtau, x0)};
  }
  return z;
}

/// Max |residual| over a spread of sample abscissae.
template <typename Residual>
double max_residual_on_exact_solution(Residual&& residual, double hx,
                                      double dtau, double t0,
                                      bool three_levels) {
  constexpr int kSamples = 37;
  double worst = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const double x0 = 2.0 * M_PI * static_cast<double>(s) / kSamples;
    const Stencil z = exact_solution_stencil(hx, dtau, t0, x0, three_levels);
    worst = std::max(worst, std::abs(residual(z)));
  }
  return worst;
}

inline double max_invariant_ftcs_residual(double hx, double dtau,
                                          double t0 = 0.3) {
  return max_residual_on_exact_solution(
      [](const Stencil& z) { return residual_invariant_ftcs(z); }, hx, dtau, t0,
      false);
}

inline double max_invariant_leapfrog_residual(double hx, double dtau,
                                              double t0 = 0.3) {
  return max_residual_on_exact_solution(
      [](const Stencil& z) { return residual_invariant_leapfrog(z); }, hx, dtau,
      t0, true);
}

/// Least-squares slope of ln err versus ln param.
inline double fitted_order(const std::vector<double>& params,
                           const std::vector<double>& errs) {
  const std::size_t n = params.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(params[i]);
    my += std::log(errs[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(params[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errs[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace invheat::testing
