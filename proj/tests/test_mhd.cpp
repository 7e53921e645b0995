#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctmhd/grid.hpp"
#include "ctmhd/mhd.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace ctmhd;

namespace {

struct Prim {
  double rho, u[3], p, B[3];
};

void to_conserved(const Prim& w, double* q) {
  const double ke =
      0.5 * w.rho * (w.u[0] * w.u[0] + w.u[1] * w.u[1] + w.u[2] * w.u[2]);
  const double me =
      0.5 * (w.B[0] * w.B[0] + w.B[1] * w.B[1] + w.B[2] * w.B[2]);
  q[0] = w.rho;
  for (int c = 0; c < 3; ++c) q[1 + c] = w.rho * w.u[c];
  q[4] = w.p / (kGamma - 1.0) + ke + me;
  for (int c = 0; c < 3; ++c) q[5 + c] = w.B[c];
}

// Independent primitive-form flux along `axis`.
void oracle_flux(const Prim& w, int axis, double* F) {
  const double b2 =
      w.B[0] * w.B[0] + w.B[1] * w.B[1] + w.B[2] * w.B[2];
  const double ptot = w.p + 0.5 * b2;
  const double ua = w.u[axis], Ba = w.B[axis];
  const double udotB =
      w.u[0] * w.B[0] + w.u[1] * w.B[1] + w.u[2] * w.B[2];
  double q[NV];
  to_conserved(w, q);
  F[0] = w.rho * ua;
  for (int c = 0; c < 3; ++c)
    F[1 + c] = w.rho * ua * w.u[c] + (c == axis ? ptot : 0.0) - Ba * w.B[c];
  F[4] = ua * (q[4] + ptot) - Ba * udotB;
  for (int c = 0; c < 3; ++c) F[5 + c] = ua * w.B[c] - Ba * w.u[c];
}

Prim random_state(oracle::Rng& rng) {
  Prim w;
  w.rho = rng.uniform(0.2, 5.0);
  w.p = rng.uniform(0.05, 4.0);
  for (int c = 0; c < 3; ++c) {
    w.u[c] = rng.uniform(-2.0, 2.0);
    w.B[c] = rng.uniform(-1.5, 1.5);
  }
  return w;
}

// Sixth-order central difference, for reference derivatives of analytic
// functions.
template <class F>
double derivative6(const F& f, double x, double h) {
  return (45.0 * (f(x + h) - f(x - h)) - 9.0 * (f(x + 2 * h) - f(x - 2 * h)) +
          (f(x + 3 * h) - f(x - 3 * h))) /
         (60.0 * h);
}

}  // namespace

TEST_CASE("pressure and fluxes match the primitive-form expressions") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const Prim w = random_state(rng);
    double q[NV];
    to_conserved(w, q);
    CHECK(pressure(q) == doctest::Approx(w.p).epsilon(1e-12));
    for (int axis = 0; axis < 3; ++axis) {
      double F[NV], Fo[NV];
      physical_flux(q, axis, F);
      oracle_flux(w, axis, Fo);
      double scale = 1.0;
      for (int v = 0; v < NV; ++v) scale = std::max(scale, std::abs(Fo[v]));
      for (int v = 0; v < NV; ++v) {
        INFO("axis ", axis, " component ", v);
        CHECK(std::abs(F[v] - Fo[v]) <= 1e-13 * scale);
      }
    }
  }
}

TEST_CASE("wave speeds solve the magnetosonic quartic, ordered") {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Prim w = random_state(rng);
    double q[NV];
    to_conserved(w, q);
    for (int axis = 0; axis < 3; ++axis) {
      const WaveSpeeds s = wave_speeds(q, axis);
      const double a2 = kGamma * w.p / w.rho;
      const double b2 =
          (w.B[0] * w.B[0] + w.B[1] * w.B[1] + w.B[2] * w.B[2]) / w.rho;
      const double ca2 = w.B[axis] * w.B[axis] / w.rho;
      CHECK(s.a == doctest::Approx(std::sqrt(a2)).epsilon(1e-13));
      CHECK(s.ca == doctest::Approx(std::sqrt(ca2)).epsilon(1e-12));
      // c^4 - (a^2 + b^2) c^2 + a^2 ca^2 = 0 for both magnetosonic roots.
      const double quartic_scale = (a2 + b2) * (a2 + b2);
      for (double c : {s.cf, s.cs}) {
        const double c2 = c * c;
        const double res = c2 * c2 - (a2 + b2) * c2 + a2 * ca2;
        CHECK(std::abs(res) <= 1e-12 * quartic_scale);
      }
      CHECK(s.cs <= s.ca + 1e-12 * s.cf);
      CHECK(s.ca <= s.cf + 1e-12 * s.cf);
      CHECK(s.cf <= std::sqrt(a2 + b2) + 1e-12 * s.cf);
    }
  }

  // Field along the propagation axis: the roots collapse to {a, ca}.
  Prim w{1.4, {0.3, -0.2, 0.1}, 0.9, {1.1, 0.0, 0.0}};
  double q[NV];
  to_conserved(w, q);
  const WaveSpeeds s = wave_speeds(q, 0);
  const double a = std::sqrt(kGamma * w.p / w.rho);
  const double ca = std::abs(w.B[0]) / std::sqrt(w.rho);
  CHECK(s.cf == doctest::Approx(std::max(a, ca)).epsilon(1e-10));
  CHECK(s.cs == doctest::Approx(std::min(a, ca)).epsilon(1e-10));

  // Hydro limit: fast -> sound, slow -> 0.
  Prim h{2.0, {0.5, 0.0, 0.0}, 1.2, {0.0, 0.0, 0.0}};
  to_conserved(h, q);
  const WaveSpeeds sh = wave_speeds(q, 1);
  CHECK(sh.cf == doctest::Approx(std::sqrt(kGamma * h.p / h.rho)).epsilon(1e-13));
  CHECK(sh.cs == doctest::Approx(0.0).epsilon(1e-13));

  // Unphysical states are rejected, not silently patched.
  to_conserved(w, q);
  q[0] = -1.0;
  CHECK_THROWS_AS(wave_speeds(q, 0), std::runtime_error);
  to_conserved(w, q);
  q[4] = 0.0;  // energy below magnetic+kinetic => negative pressure
  CHECK_THROWS_AS(wave_speeds(q, 0), std::runtime_error);
}

TEST_CASE("interface reconstruction: constants, jumps, and 5th order") {
  // Constant data reproduces the constant.
  const double c5[5] = {2.5, 2.5, 2.5, 2.5, 2.5};
  CHECK(weno5_js(c5) == doctest::Approx(2.5).epsilon(1e-15));

  // A jump right of center leaves the smooth left stencil in charge.
  const double jump[5] = {0.0, 0.0, 0.0, 1.0, 1.0};
  CHECK(std::abs(weno5_js(jump)) <= 1e-2);
  const double jumpr[5] = {1.0, 1.0, 1.0, 0.0, 0.0};
  CHECK(std::abs(weno5_js(jumpr) - 1.0) <= 1e-2);

  // Flux-difference convergence on smooth data, measured away from
  // critical points (where the nonlinear weights are allowed to cost two
  // orders).
  auto f = [](double x) { return std::sin(2 * M_PI * x); };
  auto fp = [](double x) { return 2 * M_PI * std::cos(2 * M_PI * x); };
  std::vector<double> errs;
  for (int N : {32, 64, 128}) {
    const double dx = 1.0 / N;
    std::vector<double> v(N), h(N + 1);
    for (int i = 0; i < N; ++i) v[i] = f(i * dx);
    auto vat = [&](int i) { return v[((i % N) + N) % N]; };
    for (int i = 0; i <= N; ++i) {
      double win[5];
      for (int r = 0; r < 5; ++r) win[r] = vat(i - 3 + r);  // i-1/2 interface
      h[i] = weno5_js(win);
    }
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
      if (std::abs(fp(i * dx)) < 1.0) continue;
      worst = std::max(worst, std::abs((h[i + 1] - h[i]) / dx - fp(i * dx)));
    }
    errs.push_back(worst);
  }
  for (std::size_t m = 1; m < errs.size(); ++m) {
    const double slope = std::log2(errs[m - 1] / errs[m]);
    INFO("refinement ", m, " slope ", slope);
    CHECK(slope >= 4.4);
  }
  CHECK(errs.back() <= 1e-5);
}

TEST_CASE("signal speeds and the time step on a uniform state") {
  const int cells[3] = {8, 16, 1};
  const double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {1.0, 4.0, 1.0};
  Grid g = Grid::make(2, cells, lo, hi);
  g.validate();
  Prim w{1.0, {0.5, -1.5, 0.0}, 0.6, {0.0, 0.0, 0.0}};
  double q0[NV];
  to_conserved(w, q0);
  Field q(g, NV, 4);
  for (int j = 0; j <= g.n[1]; ++j)
    for (int i = 0; i <= g.n[0]; ++i)
      for (int v = 0; v < NV; ++v) q(v, i, j) = q0[v];

  const double a = std::sqrt(kGamma * w.p / w.rho);
  const MaxSpeeds s = compute_max_speeds(g, q);
  CHECK(s.lambda[0] == doctest::Approx(0.5 + a).epsilon(1e-13));
  CHECK(s.lambda[1] == doctest::Approx(1.5 + a).epsilon(1e-13));

  const double em = 1.5 + a;
  const double cd = 1.0 / g.dx[0] + 1.0 / g.dx[1];
  CHECK(compute_dt(g, q, 0.5) == doctest::Approx(0.5 / (em * cd)).epsilon(1e-13));
}

TEST_CASE("flux divergence vanishes on constant states for every BC") {
  for (int variant = 0; variant < 3; ++variant) {
    const int cells[3] = {8, 8, 8};
    const double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {1.0, 1.0, 1.0};
    Grid g = Grid::make(variant == 2 ? 3 : 2, cells, lo, hi);
    Prim w{1.3, {0.7, -0.4, 0.2}, 0.8, {0.5, -0.3, 0.6}};
    double q0[NV];
    to_conserved(w, q0);
    if (variant >= 1) {
      for (int a = 0; a < g.dim; ++a)
        for (int s = 0; s < 2; ++s) g.bc[a][s].type = BoundaryType::Outflow;
      g.bc[0][0].type = BoundaryType::Inflow;
      for (int v = 0; v < NV; ++v) g.bc[0][0].inflow[v] = q0[v];
    }
    g.validate();

    Field q(g, NV, 4), out(g, NV, 0);
    for (int k = 0; k < g.nodes(2); ++k)
      for (int j = 0; j < g.nodes(1); ++j)
        for (int i = 0; i < g.nodes(0); ++i)
          for (int v = 0; v < NV; ++v) q(v, i, j, k) = q0[v];
    MhdScratch scratch;
    mhd_rhs(g, q, out, scratch);
    double worst = 0.0;
    for (long m = 0; m < out.size(); ++m)
      worst = std::max(worst, std::abs(out.raw()[m]));
    INFO("variant ", variant);
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("flux divergence converges to the analytic derivative") {
  auto profile = [](double x) {
    Prim w;
    w.rho = 2.0 + 0.5 * std::sin(2 * M_PI * x);
    w.u[0] = 1.0 + 0.3 * std::cos(2 * M_PI * x);
    w.u[1] = 0.4 + 0.2 * std::sin(2 * M_PI * x + 0.5);
    w.u[2] = 0.1 * std::cos(2 * M_PI * x + 1.1);
    w.p = 1.5 + 0.4 * std::cos(2 * M_PI * x + 0.3);
    w.B[0] = 0.7;
    w.B[1] = 0.6 + 0.25 * std::sin(2 * M_PI * x + 0.8);
    w.B[2] = 0.3 + 0.15 * std::cos(2 * M_PI * x + 0.4);
    return w;
  };
  auto flux_at = [&](int v, double x) {
    double F[NV];
    oracle_flux(profile(x), 0, F);
    return F[v];
  };

  std::vector<double> errs, errs_all;
  for (int N : {32, 64, 128}) {
    const int cells[3] = {N, 6, 1};
    const double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {1.0, 1.0, 1.0};
    Grid g = Grid::make(2, cells, lo, hi);
    g.validate();
    Field q(g, NV, 4), out(g, NV, 0);
    for (int j = 0; j < g.nodes(1); ++j)
      for (int i = 0; i < g.nodes(0); ++i) {
        const Prim w = profile(g.coord(0, i));
        double qq[NV];
        to_conserved(w, qq);
        for (int v = 0; v < NV; ++v) q(v, i, j) = qq[v];
      }
    MhdScratch scratch;
    mhd_rhs(g, q, out, scratch);

    // Reference: -dF/dx of the analytic flux, and its magnitude for the
    // critical-point filter.
    double worst = 0.0, worst_all = 0.0;
    std::vector<std::vector<double>> dF(NV, std::vector<double>(N));
    std::array<double, NV> dFmax{};
    for (int v = 0; v < NV; ++v)
      for (int i = 0; i < N; ++i) {
        dF[v][i] = derivative6([&](double x) { return flux_at(v, x); },
                               g.coord(0, i), 1e-3);
        dFmax[v] = std::max(dFmax[v], std::abs(dF[v][i]));
      }
    for (int v = 0; v < NV; ++v)
      for (int i = 0; i < N; ++i) {
        const double e = std::abs(out(v, i, 3) + dF[v][i]);
        worst_all = std::max(worst_all, e);
        if (std::abs(dF[v][i]) >= 0.5 * dFmax[v]) worst = std::max(worst, e);
      }
    errs.push_back(worst);
    errs_all.push_back(worst_all);

    // The transverse sweeps see y-constant data and must contribute
    // nothing: every row identical.
    for (int v = 0; v < NV; ++v)
      for (int i = 0; i < N; ++i) CHECK(out(v, i, 5) == out(v, i, 3));
  }
  for (std::size_t m = 1; m < errs.size(); ++m) {
    const double slope = std::log2(errs[m - 1] / errs[m]);
    INFO("filtered refinement ", m, " slope ", slope);
    CHECK(slope >= 4.3);
    const double slope_all = std::log2(errs_all[m - 1] / errs_all[m]);
    INFO("unfiltered refinement ", m, " slope ", slope_all);
    CHECK(slope_all >= 2.8);
  }
}

TEST_CASE("floors rescale troubled nodes toward the neighborhood and count") {
  const int cells[3] = {4, 4, 1};
  const double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {1.0, 1.0, 1.0};
  Grid g = Grid::make(2, cells, lo, hi);
  g.validate();
  Field q(g, NV, 4);
  Prim w{1.0, {0.2, 0.1, 0.0}, 0.5, {0.4, 0.3, 0.0}};
  double q0[NV];
  to_conserved(w, q0);
  for (int j = 0; j < g.nodes(1); ++j)
    for (int i = 0; i < g.nodes(0); ++i)
      for (int v = 0; v < NV; ++v) q(v, i, j) = q0[v];

  // Vacuum-ish node: tiny density, no momentum, so only the density floor
  // fires there.
  q(0, 1, 1) = 1e-20;
  q(1, 1, 1) = q(2, 1, 1) = q(3, 1, 1) = 0.0;
  q(4, 0, 2) = 0.5 * (q0[4] - w.p / (kGamma - 1.0));  // negative pressure

  FloorReport rep;
  apply_floors(g, q, rep);
  CHECK(rep.rho_floored == 1);
  CHECK(rep.p_floored == 1);
  CHECK(rep.node_stages == 16);

  // The blend toward the healthy neighborhood stops where the floor binds
  // (up to cancellation slack in the segment arithmetic).
  CHECK(q(0, 1, 1) >= kRhoFloor);
  CHECK(q(0, 1, 1) <= kRhoFloor + 1e-15);
  double node[NV];
  for (int v = 0; v < NV; ++v) node[v] = q(v, 0, 2);
  CHECK(pressure(node) >= kPressureFloor);
  CHECK(pressure(node) <= kPressureFloor + 1e-15);
  // Untouched nodes stay bitwise identical.
  CHECK(q(4, 0, 0) == q0[4]);
  // Duplicate planes resynced after the resets.
  CHECK(q(4, 4, 2) == q(4, 0, 2));

  // With the whole neighborhood at vacuum there is nothing to blend toward:
  // the direct reset takes over and lands exactly on the floors.
  for (int j = 0; j < g.nodes(1); ++j)
    for (int i = 0; i < g.nodes(0); ++i) {
      q(0, i, j) = 1e-20;
      q(1, i, j) = q(2, i, j) = q(3, i, j) = 0.0;
      q(4, i, j) = 0.5 * (q0[5] * q0[5] + q0[6] * q0[6]);  // zero pressure
    }
  FloorReport rep2;
  apply_floors(g, q, rep2);
  CHECK(rep2.rho_floored == 16);
  CHECK(q(0, 2, 2) == kRhoFloor);
  for (int v = 0; v < NV; ++v) node[v] = q(v, 2, 2);
  CHECK(std::abs(pressure(node) - kPressureFloor) <= 1e-15);
}
