// Acceptance gate: eight end-to-end checks of the solver's contracts, one
// printed line each. Run all (no arguments) or a single one with --only N.
// Exit status is the number of failed checks.
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctmhd/ct.hpp"
#include "ctmhd/driver.hpp"
#include "ctmhd/kernel.hpp"
#include "ctmhd/mhd.hpp"
#include "ctmhd/potential.hpp"
#include "ctmhd/problems.hpp"
#include "ctmhd/ssp.hpp"
#include "support/oracles.hpp"

using namespace ctmhd;

namespace {

// Pinned bounds. Each is the contract the matching check() enforces.
constexpr double kOrderFloor = 2.8;          // vortex L1 observed orders
constexpr double kDivRatioBound = 1e-11;     // max|div B| / max||B|| per step
constexpr double kStabilityGrowth = 1e-9;    // advection max-norm growth
constexpr double kQuadOracleTol = 1e-11;     // cell integrals vs integration
constexpr double kRecursionTol = 1e-13;      // recursion vs direct sum (rel)
constexpr double kCurlDivBound = 1e-12;      // div(curl A) / max||B||
constexpr double kPressureShiftTol = 1e-13;  // option 2 pointwise
constexpr double kEnergyDriftTol = 1e-11;    // option 1 per step (rel)
constexpr double kFloorBudget = 1e-3;        // activations per node-step
constexpr double kLoopGrowthCap = 1.15;      // field-loop peak ||B|| ratio
constexpr double kReductionTol = 1e-12;      // 3-D slice vs 2-D run

bool advance_to(Solver& s, double tf, long cap) {
  while (s.time() < tf * (1.0 - 1e-14) && s.steps() < cap) {
    const double dt = std::min(s.suggest_dt(), tf - s.time());
    s.advance(dt);
    if (s.stats().nan_detected) return false;
  }
  return s.state_finite() && s.time() >= tf * (1.0 - 1e-14);
}

// --- 1: smooth-vortex convergence ------------------------------------------
//
// Known red: the 20->40 pair measures ~2.12 against the 2.8 floor; 40->80 and
// 80->160 measure ~3.5 (and 160->320 ~2.8 if extended). The coarse end is the
// anomaly, and it is anomalously ACCURATE, not inaccurate: with componentwise
// global LF splitting, the leading O(dx^5) dissipative error of the split pair
// f +- lambda*q is proportional to lambda * d^6(rho)/dx^6, and the exact
// density here is constant, so it cancels wherever the nonlinear weights stay
// near optimal. That puts the 20^2 L1 error at 8.4e-5 already; dropping a
// further 2^2.8 by 40^2 is not available, and the scheme only settles into its
// ~3.5 asymptotic slope from 40^2 on. Verified irrelevant: time-step clipping
// (fixed shared dt gives the same orders), the curl replacement (ct off gives
// the same orders), and the energy option. Errors stay strictly monotone and
// are small at every level; the floor stays pinned rather than tuned to pass.

bool check_convergence(std::ostream& out) {
  RunConfig base;
  base.problem = "SmoothVortex";
  const auto rows = convergence_table(base, {20, 40, 80, 160});
  bool ok = true;
  std::ostringstream detail;
  detail.setf(std::ios::fixed);
  detail.precision(3);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) {
      ok = ok && rows[r].l1 < rows[r - 1].l1 && rows[r].order_l1 >= kOrderFloor;
      detail << (r > 1 ? " " : "") << rows[r].order_l1;
    }
  }
  out << "L1(rho) orders 20->160: " << detail.str() << " (floor "
      << kOrderFloor << ", errors monotone)";
  return ok;
}

// --- 2: divergence-free invariant over full runs ---------------------------

bool check_divergence_invariant(std::ostream& out) {
  double worst[2] = {0.0, 0.0};
  bool ok = true;
  const char* names[2] = {"OrszagTang", "FieldLoop2D"};
  for (int p = 0; p < 2; ++p) {
    const ProblemSpec& ps = problem(names[p]);
    Grid g = make_problem_grid(ps, 64, 64, 0);
    RunConfig cfg;
    cfg.problem = ps.name;
    Solver s(ps, g, cfg);
    ok = ok && advance_to(s, 1.0, 20000);
    worst[p] = s.stats().worst_div_ratio;
    ok = ok && worst[p] <= kDivRatioBound;
  }
  out << "max div/||B|| over every step to t=1: OrszagTang " << worst[0]
      << ", FieldLoop2D " << worst[1] << " (bound " << kDivRatioBound << ")";
  return ok;
}

// --- 3: unconditional stability at ten times the explicit step -------------

bool check_a_stability(std::ostream& out) {
  const int N = 100;
  const double dx = 1.0 / N, c = 1.0, dt = 10.0 * dx / c;
  double growth[3];
  bool ok = true;
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> u(N + 1);
    for (int i = 0; i <= N; ++i) u[i] = std::sin(2.0 * M_PI * i * dx);
    Line line{u.data(), N, dx};
    const KernelParams p = make_kernel_params(beta_stability_max(k), k, c, dt,
                                              line, 1, true);
    const QuadratureTable table = build_quadrature_table(p.nu);
    LineWorkspace ws;
    ws.resize(N);
    const BoundaryClosure closure;  // periodic
    std::vector<double> d(N + 1);
    const double m0 = oracle::max_abs(u);
    auto rhs = [&](const std::vector<double>& y, double,
                   std::vector<double>& f) {
      Line ly{y.data(), N, dx};
      biased_derivative(ly, p, closure, Side::Minus, table, ws, d.data());
      for (int i = 0; i <= N; ++i) f[i] = -c * d[i];
    };
    for (int s = 0; s < 200; ++s) ssp_rk_step(k, 0.0, dt, u, rhs);
    growth[k - 1] = oracle::max_abs(u) / m0;
    ok = ok && std::isfinite(growth[k - 1]) &&
         growth[k - 1] <= 1.0 + kStabilityGrowth;
  }
  out << "advection at 10x the explicit step, 200 steps, max-norm growth: k=1 "
      << growth[0] << ", k=2 " << growth[1] << ", k=3 " << growth[2]
      << " (cap 1+" << kStabilityGrowth << ")";
  return ok;
}

// --- 4: quadrature against independent integration -------------------------

bool check_quadrature_oracle(std::ostream& out) {
  const int N = 64;
  const double dx = 1.0 / N;
  auto v = [](double x) { return std::sin(x + 0.3); };
  std::vector<double> vals(N + 1);
  for (int i = 0; i <= N; ++i) vals[i] = v(i * dx);

  double worst_quad = 0.0, worst_rec = 0.0;
  for (double nu : {0.1, 1.0, 10.0}) {
    const double alpha = nu / dx;
    const QuadratureTable table = build_quadrature_table(nu);
    std::vector<double> J(N + 1), xi(N + 1), Jr(N + 1);
    long clamps = 0;
    cell_integrals(vals.data(), N, table, false, J.data(), xi.data(),
                   &clamps);
    std::vector<double> rev(vals.rbegin(), vals.rend());
    std::vector<double> Jrev(N + 1), xirev(N + 1);
    cell_integrals(rev.data(), N, table, false, Jrev.data(), xirev.data(),
                   &clamps);
    for (int i = 0; i < N; ++i) Jr[i] = Jrev[N - i];

    for (int i = 1; i <= N; ++i) {
      const double xl = (i - 1) * dx, xr = i * dx;
      const double ref = alpha * oracle::integrate(
          [&](double y) { return std::exp(-alpha * (xr - y)) * v(y); }, xl,
          xr, 1e-16);
      worst_quad = std::max(worst_quad, std::abs(J[i] - ref));
    }
    for (int i = 0; i < N; ++i) {
      const double xl = i * dx, xr = (i + 1) * dx;
      const double ref = alpha * oracle::integrate(
          [&](double y) { return std::exp(-alpha * (y - xl)) * v(y); }, xl,
          xr, 1e-16);
      worst_quad = std::max(worst_quad, std::abs(Jr[i] - ref));
    }

    std::vector<double> I(N + 1, 0.0);
    accumulate(J.data(), N, std::exp(-nu), I.data());
    const std::vector<double> direct = oracle::direct_exponential_sum(J, nu);
    worst_rec = std::max(
        worst_rec, oracle::max_abs_diff(I, direct) / oracle::max_abs(direct));
  }
  out << "cell integrals vs adaptive integration " << worst_quad << " (tol "
      << kQuadOracleTol << "); recursion vs direct sum " << worst_rec
      << " rel (tol " << kRecursionTol << ")";
  return worst_quad <= kQuadOracleTol && worst_rec <= kRecursionTol;
}

// --- 5: div(curl) identity on random fields --------------------------------

bool check_curl_identity(std::ostream& out) {
  oracle::Rng rng(20240817);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const bool three_d = trial >= 10;
    const int dim = three_d ? 3 : 2;
    const int n = three_d ? 32 : 64;
    int cells[3] = {n, n, n};
    double lo[3] = {0.0, 0.0, 0.0};
    double hi[3] = {1.0, 1.0, 1.0};
    Grid g = Grid::make(dim, cells, lo, hi);
    g.validate();
    const int npot = potential_components(g);
    Field A(g, npot, 0), AE(g, npot, 4), B(g, 3, 2);

    struct Mode {
      int kx, ky, kz;
      double amp, phase;
    };
    std::vector<std::vector<Mode>> modes(npot);
    for (int c = 0; c < npot; ++c)
      for (int m = 0; m < 3; ++m)
        modes[c].push_back({static_cast<int>(rng.uniform(1.0, 4.99)),
                            static_cast<int>(rng.uniform(1.0, 4.99)),
                            three_d ? static_cast<int>(rng.uniform(1.0, 3.99))
                                    : 0,
                            rng.uniform(-1.0, 1.0),
                            rng.uniform(0.0, 2.0 * M_PI)});
    for (int k = 0; k < g.nodes(2); ++k)
      for (int j = 0; j < g.nodes(1); ++j)
        for (int i = 0; i < g.nodes(0); ++i)
          for (int c = 0; c < npot; ++c) {
            double s = 0.0;
            for (const Mode& m : modes[c])
              s += m.amp * std::sin(2.0 * M_PI *
                                        (m.kx * g.coord(0, i) +
                                         m.ky * g.coord(1, j) +
                                         m.kz * g.coord(2, k)) +
                                    m.phase);
            A(c, i, j, k) = s;
          }
    sync_periodic_planes(g, A);
    curl_from_potential(g, A, AE, B);
    const double div = max_divergence(g, B);
    const double bmax = max_field_norm(g, B);
    worst = std::max(worst, div / bmax);
  }
  out << "div(curl A)/max||B|| over 20 random fields (2-D 64^2, 3-D 32^3): "
      << worst << " (bound " << kCurlDivBound << ")";
  return worst <= kCurlDivBound;
}

// --- 6: energy-correction contracts ----------------------------------------

bool check_energy_contracts(std::ostream& out) {
  const ProblemSpec& ps = problem("OrszagTang");
  Grid g = make_problem_grid(ps, 48, 48, 0);

  RunConfig keep_p;
  keep_p.problem = ps.name;
  keep_p.energy_option = 2;
  Solver s2(ps, g, keep_p);
  for (int s = 0; s < 15; ++s) s2.advance(s2.suggest_dt());
  const double shift = s2.stats().worst_pressure_shift;

  RunConfig keep_e;
  keep_e.problem = ps.name;
  keep_e.energy_option = 1;
  Solver s1(ps, g, keep_e);
  auto total_energy = [&]() {
    double sum = 0.0;
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) sum += s1.conserved()(4, i, j);
    return sum;
  };
  double drift = 0.0;
  for (int s = 0; s < 15; ++s) {
    const double before = total_energy();
    s1.advance(s1.suggest_dt());
    drift = std::max(drift,
                     std::abs(total_energy() - before) / std::abs(before));
  }
  const bool ok = shift <= kPressureShiftTol && drift <= kEnergyDriftTol &&
                  s1.state_finite() && s2.state_finite();
  out << "option 2 pressure shift " << shift << " (tol " << kPressureShiftTol
      << "); option 1 per-step energy drift " << drift << " rel (tol "
      << kEnergyDriftTol << ")";
  return ok;
}

// --- 7: benchmark completion -----------------------------------------------

struct BenchResult {
  bool completed = false;
  double floor_frac = 0.0, div_ratio = 0.0, peak_ratio = 0.0;
};

BenchResult run_bench(const char* name, int n, double tf) {
  const ProblemSpec& ps = problem(name);
  Grid g = make_problem_grid(ps, n, n, 0);
  RunConfig cfg;
  cfg.problem = ps.name;
  Solver s(ps, g, cfg);
  BenchResult r;
  r.completed = advance_to(s, tf, 100000);
  const RunStats& st = s.stats();
  r.floor_frac =
      static_cast<double>(st.floors.rho_floored + st.floors.p_floored) /
      (static_cast<double>(g.total_unique()) *
       std::max<long>(st.steps, 1));
  r.div_ratio = st.worst_div_ratio;
  r.peak_ratio = st.peak_normB / st.initial_normB;
  return r;
}

bool check_benchmarks(std::ostream& out) {
  const BenchResult ot = run_bench("OrszagTang", 192, 3.0);
  const BenchResult cs = run_bench("CloudShock", 256, 0.06);
  const BenchResult bl = run_bench("Blast2D", 128, 0.01);
  const BenchResult fl = run_bench("FieldLoop2D", 128, 1.0);
  const bool ok =
      ot.completed && ot.floor_frac < kFloorBudget &&
      ot.div_ratio <= kDivRatioBound && cs.completed &&
      cs.floor_frac < kFloorBudget && cs.div_ratio <= kDivRatioBound &&
      bl.completed && bl.floor_frac < kFloorBudget &&
      bl.div_ratio <= kDivRatioBound && fl.completed &&
      fl.peak_ratio <= kLoopGrowthCap;
  out << "OrszagTang 192^2 t=3 [floors " << ot.floor_frac << ", div "
      << ot.div_ratio << "], CloudShock 256^2 t=0.06 [" << cs.floor_frac
      << ", " << cs.div_ratio << "], Blast2D 128^2 t=0.01 [" << bl.floor_frac
      << ", " << bl.div_ratio << "], FieldLoop2D 128^2 t=1 peak ratio "
      << fl.peak_ratio << " (floors < " << kFloorBudget << " per node-step, "
      << "div <= " << kDivRatioBound << ", peak <= " << kLoopGrowthCap << ")";
  return ok;
}

// --- 8: 3-D reduction to the 2-D scheme ------------------------------------

bool check_reduction(std::ostream& out) {
  // Same in-plane motion in both runs; the 3-D run carries z-independent
  // data with zero z-velocity, so every z-slice must reproduce the 2-D run.
  const double s6 = std::sqrt(6.0);
  auto state = [s6](double, double, double, double* q) {
    const double u1 = 2.0 / s6, u2 = 1.0 / s6;
    q[0] = 1.0;
    q[1] = u1;
    q[2] = u2;
    q[3] = 0.0;
    q[4] = 1.0 / (kGamma - 1.0) + 0.5 * (u1 * u1 + u2 * u2);
    q[5] = q[6] = q[7] = 0.0;
  };
  ProblemSpec p2 = problem("FieldLoop2D");
  p2.state = state;
  ProblemSpec p3 = problem("FieldLoop3D");
  p3.state = state;

  Grid g2 = make_problem_grid(p2, 32, 32, 0);
  Grid g3 = make_problem_grid(p3, 32, 32, 32);
  RunConfig cfg;
  cfg.problem = "FieldLoop2D";
  cfg.beta = beta_stability_max(3) / 3.0;  // valid for both dimensions
  Solver s2(p2, g2, cfg);
  cfg.problem = "FieldLoop3D";
  Solver s3(p3, g3, cfg);

  const double dt = std::min(s2.suggest_dt(), s3.suggest_dt());
  for (int s = 0; s < 10; ++s) {
    s2.advance(dt);
    s3.advance(dt);
  }

  double worst_q = 0.0, worst_a = 0.0, worst_m3 = 0.0;
  const Field& q2 = s2.conserved();
  const Field& q3 = s3.conserved();
  const Field& a2 = s2.potential_field();
  const Field& a3 = s3.potential_field();
  for (int k = 0; k < g3.unique(2); ++k)
    for (int j = 0; j < g3.unique(1); ++j)
      for (int i = 0; i < g3.unique(0); ++i) {
        for (int v = 0; v < NV; ++v)
          worst_q = std::max(worst_q,
                             std::abs(q3(v, i, j, k) - q2(v, i, j)));
        worst_a =
            std::max(worst_a, std::abs(a3(2, i, j, k) - a2(0, i, j)));
        worst_m3 = std::max(worst_m3, std::abs(q3(3, i, j, k)));
      }
  out << "3-D z-slices vs 2-D after 10 shared steps: state diff " << worst_q
      << ", potential diff " << worst_a << ", z-momentum " << worst_m3
      << " (tol " << kReductionTol << ")";
  return worst_q <= kReductionTol && worst_a <= kReductionTol &&
         worst_m3 <= kReductionTol && s2.state_finite() && s3.state_finite();
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--only") == 0 && a + 1 < argc) {
      only = std::atoi(argv[++a]);
    } else {
      std::cerr << "usage: " << argv[0] << " [--only N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 8) {
    std::cerr << "--only expects 1..8\n";
    return 2;
  }

  const std::function<bool(std::ostream&)> checks[8] = {
      check_convergence,     check_divergence_invariant,
      check_a_stability,     check_quadrature_oracle,
      check_curl_identity,   check_energy_contracts,
      check_benchmarks,      check_reduction};

  int failures = 0;
  for (int c = 1; c <= 8; ++c) {
    if (only != 0 && c != only) continue;
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = checks[c - 1](detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c << ": "
              << detail.str() << std::endl;
  }
  return failures;
}
