#include <cmath>
#include <random>

#include <doctest.h>

#include "invheat/mesh.hpp"
#include "invheat/schemes.hpp"

using namespace invheat;

namespace {

double uniform(std::mt19937_64& gen, double a, double b) {
  return a + (b - a) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

MeshState make_level(std::initializer_list<double> xs,
                     std::initializer_list<double> us) {
  MeshState m;
  m.tau = 0.0;
  m.period = 2.0 * M_PI;
  m.x = ArrayXd(static_cast<Index>(xs.size()));
  m.u = ArrayXd(static_cast<Index>(us.size()));
  Index i = 0;
  for (double v : xs) m.x[i++] = v;
  i = 0;
  for (double v : us) m.u[i++] = v;
  return m;
}

}  // namespace

TEST_CASE("wrap helpers") {
  const double L = 2.0 * M_PI;
  CHECK_EQ(wrap_position(0.0, L), 0.0);
  CHECK_EQ(wrap_position(L, L), 0.0);
  CHECK_EQ(wrap_position(-0.1, L), doctest::Approx(L - 0.1).epsilon(1e-15));
  CHECK_EQ(wrap_displacement(0.2, L), 0.2);
  CHECK_EQ(wrap_displacement(L + 0.2, L), doctest::Approx(0.2).epsilon(1e-12));
  CHECK_EQ(wrap_displacement(-0.2, L), -0.2);
}

TEST_CASE("validate: uniform lattice, coincident nodes, global shift") {
  MeshState m;
  m.tau = 0.0;
  m.period = 2.0 * M_PI;
  m.x = uniform_lattice(8, m.period);
  m.u = ArrayXd::Constant(8, 1.0);
  CHECK_NOTHROW(validate(m));

  SUBCASE("two coincident nodes") {
    m.x[3] = m.x[2];
    CHECK_THROWS_AS(validate(m), MeshTangled);
  }
  SUBCASE("node order flipped") {
    std::swap(m.x[3], m.x[4]);
    CHECK_THROWS_AS(validate(m), MeshTangled);
  }
  SUBCASE("globally shifted and re-wrapped") {
    for (Index i = 0; i < 8; ++i) m.x[i] = wrap_position(m.x[i] + 0.1, m.period);
    CHECK_NOTHROW(validate(m));
  }
}

TEST_CASE("grid_step_invariantized: symmetric and constant data stay put") {
  MeshState m = make_level({0.0, 1.0, 2.0, 3.5}, {1.0, 2.0, 1.0, 0.7});
  // node 1 has u_{0} = u_{2}: log difference vanishes
  const ArrayXd out = grid_step_invariantized(m, 0.1);
  CHECK_EQ(out[1], m.x[1]);

  MeshState c = make_level({0.0, 1.0, 2.0, 3.5}, {1.3, 1.3, 1.3, 1.3});
  const ArrayXd oc = grid_step_invariantized(c, 0.1);
  for (Index i = 0; i < c.size(); ++i) CHECK_EQ(oc[i], c.x[i]);
  const ArrayXd od = grid_step_dorodnitsyn(c, 0.1);
  for (Index i = 0; i < c.size(); ++i) CHECK_EQ(od[i], c.x[i]);
}

TEST_CASE("grid_step_invariantized: node moves away from the larger-u side") {
  // uniform spacing h, u_{i+1} = e u_{i-1}: displacement is -dtau/h
  const double h = 1.0, dtau = 0.15;
  MeshState m = make_level({0.0, h, 2.0 * h, 3.0 * h}, {1.0, 2.0, M_E, 1.5});
  const ArrayXd out = grid_step_invariantized(m, dtau);
  CHECK_EQ(out[1], doctest::Approx(m.x[1] - dtau / h).epsilon(1e-14));
}

TEST_CASE("grid_step_dorodnitsyn: hand-evaluated cell") {
  // h- = 1, h+ = 2, u = (1, 1, e), dtau = 0.3: displacement -0.1
  MeshState m = make_level({0.0, 1.0, 3.0, 5.0}, {1.0, 1.0, M_E, 1.0});
  const ArrayXd out = grid_step_dorodnitsyn(m, 0.3);
  CHECK_EQ(out[1], doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("grid equations coincide on uniform spacing") {
  std::mt19937_64 gen(808);
  MeshState m;
  m.tau = 0.0;
  m.period = 2.0 * M_PI;
  m.x = uniform_lattice(16, m.period);
  m.u = ArrayXd(16);
  for (Index i = 0; i < 16; ++i) m.u[i] = uniform(gen, 0.5, 3.0);
  const ArrayXd a = grid_step_invariantized(m, 0.01);
  const ArrayXd b = grid_step_dorodnitsyn(m, 0.01);
  for (Index i = 0; i < 16; ++i) {
    CHECK_EQ(a[i], doctest::Approx(b[i]).epsilon(1e-13));
  }
}

TEST_CASE("grid steps land on the zero set of their stencil residuals") {
  std::mt19937_64 gen(909);
  MeshState m;
  m.tau = 0.2;
  m.period = 2.0 * M_PI;
  m.x = uniform_lattice(12, m.period);
  for (Index i = 0; i < 12; ++i) m.x[i] += uniform(gen, -0.12, 0.12);
  m.u = ArrayXd(12);
  for (Index i = 0; i < 12; ++i) m.u[i] = uniform(gen, 0.5, 3.0);
  validate(m);

  const double dtau = 0.05;
  const ArrayXd xi = grid_step_invariantized(m, dtau);
  const ArrayXd xd = grid_step_dorodnitsyn(m, dtau);
  for (Index i = 0; i < 12; ++i) {
    Stencil z = detail::node_stencil(m, xi, dtau, i);
    auto parts = grid_residual_invariantized_parts(z);
    CHECK_LE(std::abs(parts.value), 1e-13 * parts.scale);

    z = detail::node_stencil(m, xd, dtau, i);
    parts = grid_residual_dorodnitsyn_parts(z);
    CHECK_LE(std::abs(parts.value), 1e-13 * parts.scale);
  }
}

TEST_CASE("grid-equation zero sets are preserved under the group action") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 200; ++trial) {
    Stencil z;
    z.tau_n = uniform(gen, 0.0, 1.0);
    z.dtau = uniform(gen, 0.01, 0.1);
    z.x_i = uniform(gen, 0.0, 6.0);
    z.x_im1 = z.x_i - uniform(gen, 0.2, 0.8);
    z.x_ip1 = z.x_i + uniform(gen, 0.2, 0.8);
    z.x_i_np1 = z.x_i;
    z.u_im1 = uniform(gen, 0.5, 3.0);
    z.u_i = uniform(gen, 0.5, 3.0);
    z.u_ip1 = uniform(gen, 0.5, 3.0);
    GroupElement g;
    g.eps1 = uniform(gen, -1.0, 1.0);
    g.eps2 = uniform(gen, -1.0, 1.0);
    g.eps3 = uniform(gen, -1.0, 1.0);
    g.eps4 = uniform(gen, -1.0, 1.0);
    g.eps5 = uniform(gen, -1.0, 1.0);

    Stencil zi = z;
    zi.x_i_np1 -= grid_residual_invariantized_parts(zi).value;
    auto parts = grid_residual_invariantized_parts(apply_stencil(g, zi));
    CHECK_LE(std::abs(parts.value), 1e-9 * parts.scale);

    Stencil zd = z;
    zd.x_i_np1 -= grid_residual_dorodnitsyn_parts(zd).value;
    parts = grid_residual_dorodnitsyn_parts(apply_stencil(g, zd));
    CHECK_LE(std::abs(parts.value), 1e-9 * parts.scale);
  }
}

TEST_CASE("grid velocity converges to -2 (ln u)_x at second order") {
  const auto f = [](double x) { return 2.0 + std::sin(x - 1.0); };
  const auto target = [&](double x) {
    return -2.0 * std::cos(x - 1.0) / f(x);
  };
  auto velocity_error = [&](Index n) {
    MeshState m;
    m.tau = 0.0;
    m.period = 2.0 * M_PI;
    m.x = uniform_lattice(n, m.period);
    m.u = m.x.unaryExpr(f);
    const double dtau = 1e-3;
    const ArrayXd xi = grid_step_invariantized(m, dtau);
    const ArrayXd xd = grid_step_dorodnitsyn(m, dtau);
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs((xi[i] - m.x[i]) / dtau - target(m.x[i])));
      worst = std::max(worst, std::abs((xd[i] - m.x[i]) / dtau - target(m.x[i])));
    }
    return worst;
  };
  const double e1 = velocity_error(32);
  const double e2 = velocity_error(64);
  const double e3 = velocity_error(128);
  CHECK_GE(std::log2(e1 / e2), 1.7);
  CHECK_GE(std::log2(e2 / e3), 1.7);
}

TEST_CASE("even-symmetric profiles produce a zero displacement sum") {
  const Index n = 16;
  const double L = 2.0 * M_PI;
  const double h = L / static_cast<double>(n);
  MeshState m;
  m.tau = 0.0;
  m.period = L;
  m.x = uniform_lattice(n, L);
  // reflection-symmetric perturbation: x_{N-j} stays L - x_j
  for (Index i = 1; i < n; ++i) {
    m.x[i] += 0.15 * h * std::sin(4.0 * M_PI * static_cast<double>(i) / n);
  }
  m.u = m.x.unaryExpr([](double x) { return 2.0 + std::cos(x); });
  validate(m);

  for (int which = 0; which < 2; ++which) {
    const ArrayXd out = which == 0 ? grid_step_invariantized(m, 0.05)
                                   : grid_step_dorodnitsyn(m, 0.05);
    double total = 0.0, mag = 0.0;
    for (Index i = 0; i < n; ++i) {
      total += out[i] - m.x[i];
      mag += std::abs(out[i] - m.x[i]);
    }
    CHECK_GT(mag, 1e-3);  // the nodes really move
    CHECK_LE(std::abs(total), 1e-12 * mag);
  }
}
