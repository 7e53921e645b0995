#include "ctmhd/mhd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ctmhd {

double pressure(const double* q) {
  const double rho = q[0];
  const double kin = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) / rho;
  const double mag = 0.5 * (q[5] * q[5] + q[6] * q[6] + q[7] * q[7]);
  return (kGamma - 1.0) * (q[4] - kin - mag);
}

void physical_flux(const double* q, int axis, double* F) {
  const double rho = q[0];
  const double u[3] = {q[1] / rho, q[2] / rho, q[3] / rho};
  const double* B = q + 5;
  const double p = pressure(q);
  const double ptot = p + 0.5 * (B[0] * B[0] + B[1] * B[1] + B[2] * B[2]);
  const double udotB = u[0] * B[0] + u[1] * B[1] + u[2] * B[2];
  const double ua = u[axis], Ba = B[axis];
  F[0] = q[1 + axis];
  for (int b = 0; b < 3; ++b)
    F[1 + b] = q[1 + axis] * u[b] - Ba * B[b] + (axis == b ? ptot : 0.0);
  F[4] = ua * (q[4] + ptot) - Ba * udotB;
  for (int b = 0; b < 3; ++b) F[5 + b] = ua * B[b] - Ba * u[b];
}

WaveSpeeds wave_speeds(const double* q, int axis) {
  const double rho = q[0];
  if (!(rho > 0.0)) throw std::runtime_error("wave_speeds: nonpositive density");
  const double p = pressure(q);
  if (!(p > 0.0)) throw std::runtime_error("wave_speeds: nonpositive pressure");
  const double* B = q + 5;
  const double a2 = kGamma * p / rho;
  const double b2 = (B[0] * B[0] + B[1] * B[1] + B[2] * B[2]) / rho;
  const double ca2 = B[axis] * B[axis] / rho;
  const double sum = a2 + b2;
  double disc = sum * sum - 4.0 * a2 * ca2;
  if (disc < 0.0) {
    // analytically >= 0; tolerate round-off only
    if (disc >= -1e-14 * sum * sum) disc = 0.0;
    else throw std::runtime_error("wave_speeds: negative discriminant");
  }
  const double root = std::sqrt(disc);
  WaveSpeeds w;
  w.a = std::sqrt(a2);
  w.ca = std::sqrt(ca2);
  w.cf = std::sqrt(0.5 * (sum + root));
  w.cs = std::sqrt(std::max(0.5 * (sum - root), 0.0));
  return w;
}

double weno5_js(const double* v) {
  const double c13 = 13.0 / 12.0;
  const double eps = 1e-6;
  double t;
  t = v[0] - 2.0 * v[1] + v[2];
  double b0 = c13 * t * t;
  t = v[0] - 4.0 * v[1] + 3.0 * v[2];
  b0 += 0.25 * t * t;
  t = v[1] - 2.0 * v[2] + v[3];
  double b1 = c13 * t * t;
  t = v[1] - v[3];
  b1 += 0.25 * t * t;
  t = v[2] - 2.0 * v[3] + v[4];
  double b2 = c13 * t * t;
  t = 3.0 * v[2] - 4.0 * v[3] + v[4];
  b2 += 0.25 * t * t;
  const double a0 = 0.1 / ((eps + b0) * (eps + b0));
  const double a1 = 0.6 / ((eps + b1) * (eps + b1));
  const double a2 = 0.3 / ((eps + b2) * (eps + b2));
  const double h0 = (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0;
  const double h1 = (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0;
  const double h2 = (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0;
  return (a0 * h0 + a1 * h1 + a2 * h2) / (a0 + a1 + a2);
}

MaxSpeeds compute_max_speeds(const Grid& g, const Field& q) {
  MaxSpeeds s;
  double node[NV];
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        for (int v = 0; v < NV; ++v) node[v] = q(v, i, j, k);
        for (int a = 0; a < g.dim; ++a) {
          const WaveSpeeds w = wave_speeds(node, a);
          const double lam = std::abs(node[1 + a] / node[0]) + w.cf;
          s.lambda[a] = std::max(s.lambda[a], lam);
        }
      }
  return s;
}

double compute_dt(const Grid& g, const Field& q, double cfl) {
  const MaxSpeeds s = compute_max_speeds(g, q);
  double em = 0.0, cd = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    em = std::max(em, s.lambda[a]);
    cd += 1.0 / g.dx[a];
  }
  return cfl / (em * cd);
}

namespace {

bool floors_hold(const double* node) {
  return node[0] >= kRhoFloor && pressure(node) >= kPressureFloor;
}

// Direct reset, used when a troubled node has no healthy neighborhood to
// blend toward: density clamped, energy raised to the floor pressure.
void reset_node(Field& q, int i, int j, int k) {
  double node[NV];
  if (q(0, i, j, k) < kRhoFloor) q(0, i, j, k) = kRhoFloor;
  for (int v = 0; v < NV; ++v) node[v] = q(v, i, j, k);
  const double p = pressure(node);
  if (p < kPressureFloor)
    q(4, i, j, k) += (kPressureFloor - p) / (kGamma - 1.0);
}

}  // namespace

void apply_floors(const Grid& g, Field& q, FloorReport& report) {
  // A troubled node is rescaled toward the average of its face neighbors:
  // q := mean + theta*(q - mean) with the largest theta in [0,1] that keeps
  // rho and p at or above their floors. The density constraint is linear in
  // theta; the pressure is concave along the segment, so starting from the
  // feasible mean a bisection brackets the boundary. Means are frozen from
  // the pre-pass state so the operation is sweep-order independent.
  struct Troubled {
    int i, j, k;
    double mean[NV];
  };
  std::vector<Troubled> list;
  double node[NV];
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        ++report.node_stages;
        for (int v = 0; v < NV; ++v) node[v] = q(v, i, j, k);
        const bool rho_bad = node[0] < kRhoFloor;
        if (rho_bad) node[0] = kRhoFloor;  // make the pressure probe safe
        const bool p_bad = pressure(node) < kPressureFloor;
        if (!rho_bad && !p_bad) continue;
        if (rho_bad) ++report.rho_floored;
        if (p_bad) ++report.p_floored;

        Troubled t{i, j, k, {}};
        int count = 0;
        for (int a = 0; a < g.dim; ++a) {
          for (int side = -1; side <= 1; side += 2) {
            int n[3] = {i, j, k};
            n[a] += side;
            if (n[a] < 0) {
              if (!g.periodic(a)) continue;
              n[a] = g.unique(a) - 1;
            } else if (n[a] >= g.nodes(a)) {
              continue;  // non-periodic axes stop at the last stored node
            }
            for (int v = 0; v < NV; ++v) t.mean[v] += q(v, n[0], n[1], n[2]);
            ++count;
          }
        }
        for (int v = 0; v < NV; ++v) t.mean[v] /= count;
        list.push_back(t);
      }

  for (const Troubled& t : list) {
    for (int v = 0; v < NV; ++v) node[v] = q(v, t.i, t.j, t.k);
    if (!floors_hold(t.mean)) {
      reset_node(q, t.i, t.j, t.k);
      continue;
    }
    double blend[NV];
    auto feasible = [&](double theta) {
      for (int v = 0; v < NV; ++v)
        blend[v] = t.mean[v] + theta * (node[v] - t.mean[v]);
      return floors_hold(blend);
    };
    double lo = 0.0;
    double hi = 1.0;
    if (node[0] < kRhoFloor)  // density bound is linear: solve it directly
      hi = (t.mean[0] - kRhoFloor) / (t.mean[0] - node[0]);
    if (!feasible(hi)) {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
      }
      feasible(lo);  // leave `blend` at the feasible end
    }
    for (int v = 0; v < NV; ++v) q(v, t.i, t.j, t.k) = blend[v];
    reset_node(q, t.i, t.j, t.k);  // absorb bisection round-off, if any
  }
  sync_periodic_planes(g, q);
}

void mhd_rhs(const Grid& g, Field& q, Field& out, MhdScratch& s,
             MaxSpeeds* speeds_out) {
  const int G = q.ghosts();
  if (G < 4) throw std::invalid_argument("mhd_rhs: need 4 ghost layers");
  fill_ghosts(g, q);
  const MaxSpeeds speeds = compute_max_speeds(g, q);
  if (speeds_out) *speeds_out = speeds;

  for (long m = 0; m < out.size(); ++m) out.raw()[m] = 0.0;

  for (int a = 0; a < g.dim; ++a) {
    const int nn = g.nodes(a);
    const int L = nn + 2 * G;
    const double lam = speeds.lambda[a];
    const double invdx = 1.0 / g.dx[a];
    s.q.resize(static_cast<std::size_t>(NV) * L);
    s.fp.resize(static_cast<std::size_t>(NV) * L);
    s.fm.resize(static_cast<std::size_t>(NV) * L);
    s.H.resize(nn + 1);

    const int b1 = a == 0 ? 1 : 0;
    const int b2 = a == 2 ? 1 : 2;
    for (int t2 = 0; t2 < g.nodes(b2); ++t2)
      for (int t1 = 0; t1 < g.nodes(b1); ++t1) {
        for (int v = 0; v < NV; ++v)
          gather_line(g, q, a, v, t1, t2, s.q.data() + static_cast<long>(v) * L);
        // pointwise fluxes and the global split
        double node[NV], Fn[NV];
        for (int p = 0; p < L; ++p) {
          for (int v = 0; v < NV; ++v) node[v] = s.q[v * L + p];
          physical_flux(node, a, Fn);
          for (int v = 0; v < NV; ++v) {
            s.fp[v * L + p] = 0.5 * (Fn[v] + lam * node[v]);
            s.fm[v * L + p] = 0.5 * (Fn[v] - lam * node[v]);
          }
        }
        int idx[3];
        switch (a) {
          case 0: idx[1] = t1; idx[2] = t2; break;
          case 1: idx[0] = t1; idx[2] = t2; break;
          default: idx[0] = t1; idx[1] = t2; break;
        }
        for (int v = 0; v < NV; ++v) {
          const double* fp = s.fp.data() + static_cast<long>(v) * L;
          const double* fm = s.fm.data() + static_cast<long>(v) * L;
          // H[i] = \hat f at interface i-1/2; plus-window f_{i-3..i+1},
          // minus-window reflected across the interface.
          for (int i = 0; i <= nn; ++i) {
            const int p = i + G;
            double wm[5];
            for (int r = 0; r < 5; ++r) wm[r] = fm[p + 2 - r];
            s.H[i] = weno5_js(fp + p - 3) + weno5_js(wm);
          }
          for (int i = 0; i < nn; ++i) {
            idx[a] = i;
            out(v, idx[0], idx[1], idx[2]) -= (s.H[i + 1] - s.H[i]) * invdx;
          }
        }
      }
  }
}

}  // namespace ctmhd
