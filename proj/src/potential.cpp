#include "ctmhd/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctmhd {

int potential_components(const Grid& g) { return g.dim == 2 ? 1 : 3; }

void velocity_maxima(const Grid& g, const Field& U, double cmax[3]) {
  for (int m = 0; m < 3; ++m) cmax[m] = 0.0;
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i)
        for (int m = 0; m < 3; ++m)
          cmax[m] = std::max(cmax[m], std::abs(U(m, i, j, k)));
}

namespace {

// One advective contribution: out(eq) += sign * u_vel * avg + c_vel * diff
// accumulated along every line of `axis` for potential component `comp`.
struct Term {
  int eq;
  double sign;
  int vel;
};
struct Combo {
  int axis, comp;
  Term t[2];
};

// 3-D right-hand sides, one row per derivative actually appearing:
//   dA1/dt =  u2 Ax2 + u3 Ax3 - u2 Ay1 - u3 Az1
//   dA2/dt =  u3 Ay3 + u1 Ay1 - u3 Az2 - u1 Ax2
//   dA3/dt =  u1 Az1 + u2 Az2 - u1 Ax3 - u2 Ay3
constexpr Combo kCombos3d[6] = {
    {0, 1, {{0, +1.0, 1}, {1, -1.0, 0}}},  // d/dx A2
    {0, 2, {{0, +1.0, 2}, {2, -1.0, 0}}},  // d/dx A3
    {1, 0, {{0, -1.0, 1}, {1, +1.0, 0}}},  // d/dy A1
    {1, 2, {{1, +1.0, 2}, {2, -1.0, 1}}},  // d/dy A3
    {2, 0, {{0, -1.0, 2}, {2, +1.0, 0}}},  // d/dz A1
    {2, 1, {{1, -1.0, 2}, {2, +1.0, 1}}},  // d/dz A2
};
constexpr Combo kCombos2d[2] = {
    {0, 0, {{0, -1.0, 0}, {0, 0.0, 0}}},  // d/dx A3
    {1, 0, {{0, -1.0, 1}, {0, 0.0, 0}}},  // d/dy A3
};

void sweep_combo(const Grid& g, const Field& A, const Field& U,
                 const PotentialParams& params, PotentialScratch& s,
                 const Combo& combo, Field& out) {
  const int a = combo.axis;
  const int nn = g.nodes(a);
  const bool periodic = g.periodic(a);
  s.line.resize(nn + 1);
  s.u.resize(nn + 1);
  s.dm.resize(nn + 1);
  s.dp.resize(nn + 1);

  const int b1 = a == 0 ? 1 : 0;
  const int b2 = a == 2 ? 1 : 2;
  int idx[3];
  for (int t2 = 0; t2 < g.nodes(b2); ++t2)
    for (int t1 = 0; t1 < g.nodes(b1); ++t1) {
      gather_line(g, A, a, combo.comp, t1, t2, s.line.data());
      const Line line{s.line.data(), nn - 1, g.dx[a]};
      const BoundaryClosure closure =
          periodic ? BoundaryClosure{}
                   : extrapolated_closure(line, params.order_k);
      biased_derivative(line, s.kp[a], closure, Side::Minus, s.table[a],
                        s.lws, s.dm.data());
      biased_derivative(line, s.kp[a], closure, Side::Plus, s.table[a],
                        s.lws, s.dp.data());
      switch (a) {
        case 0: idx[1] = t1; idx[2] = t2; break;
        case 1: idx[0] = t1; idx[2] = t2; break;
        default: idx[0] = t1; idx[1] = t2; break;
      }
      for (const Term& term : combo.t) {
        if (term.sign == 0.0) continue;
        const double c = params.cmax[term.vel];
        gather_line(g, U, a, term.vel, t1, t2, s.u.data());
        for (int i = 0; i < nn; ++i) {
          idx[a] = i;
          const double avg = 0.5 * (s.dm[i] + s.dp[i]);
          const double dif = 0.5 * (s.dp[i] - s.dm[i]);
          out(term.eq, idx[0], idx[1], idx[2]) +=
              term.sign * s.u[i] * avg + c * dif;
        }
      }
    }
}

}  // namespace

void potential_rhs(const Grid& g, const Field& A, const Field& U,
                   const PotentialParams& params, PotentialScratch& s,
                   Field& out) {
  if (A.ghosts() != 0 || out.ghosts() != 0)
    throw std::invalid_argument("potential_rhs: potential fields carry no ghosts");
  if (A.nvar() != potential_components(g))
    throw std::invalid_argument("potential_rhs: wrong component count");

  for (int a = 0; a < g.dim; ++a) {
    std::vector<double> probe(g.nodes(a), 0.0);
    const Line proto{probe.data(), g.nodes(a) - 1, g.dx[a]};
    s.kp[a] = make_kernel_params(params.beta, params.order_k, params.cmax[a],
                                 params.dt, proto, g.dim);
    s.table[a] = build_quadrature_table(s.kp[a].nu);
  }
  for (long m = 0; m < out.size(); ++m) out.raw()[m] = 0.0;

  if (g.dim == 2) {
    for (const Combo& combo : kCombos2d) sweep_combo(g, A, U, params, s, combo, out);
  } else {
    for (const Combo& combo : kCombos3d) sweep_combo(g, A, U, params, s, combo, out);
  }
  sync_periodic_planes(g, out);
}

}  // namespace ctmhd
