#include "ctmhd/ct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctmhd/mhd.hpp"
#include "ctmhd/potential.hpp"

namespace ctmhd {

namespace {

inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Lagrange weights for the cubic through nodes 0..3 evaluated at s.
inline void cubic_weights(double s, double w[4]) {
  w[0] = (s - 1.0) * (s - 2.0) * (s - 3.0) / -6.0;
  w[1] = s * (s - 2.0) * (s - 3.0) / 2.0;
  w[2] = s * (s - 1.0) * (s - 3.0) / -2.0;
  w[3] = s * (s - 1.0) * (s - 2.0) / 6.0;
}

}  // namespace

void fill_potential_ghosts(const Grid& g, Field& f) {
  sync_periodic_planes(g, f);
  const int G = f.ghosts();
  if (G == 0) return;
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a) hi[a] = g.nodes(a) - 1;
  for (int a = 0; a < g.dim; ++a) {
    const int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
    const int nn = g.nodes(a);
    if (!g.periodic(a) && nn < 4)
      throw std::invalid_argument(
          "fill_potential_ghosts: cubic extension needs 4 nodes per line");
    for (int side = 0; side < 2; ++side) {
      for (int layer = 1; layer <= G; ++layer) {
        const int it = side == 0 ? -layer : nn - 1 + layer;
        double w[4] = {0, 0, 0, 0};
        int base[4] = {0, 0, 0, 0};
        if (g.periodic(a)) {
          base[0] = wrap(it, g.n[a]);
          w[0] = 1.0;
        } else {
          cubic_weights(-static_cast<double>(layer), w);
          for (int j = 0; j < 4; ++j) base[j] = side == 0 ? j : nn - 1 - j;
        }
        for (int v = 0; v < f.nvar(); ++v)
          for (int c2 = lo[b2]; c2 <= hi[b2]; ++c2)
            for (int c1 = lo[b1]; c1 <= hi[b1]; ++c1) {
              int idx[3];
              idx[b1] = c1;
              idx[b2] = c2;
              double val = 0.0;
              for (int j = 0; j < 4; ++j) {
                if (w[j] == 0.0) continue;
                idx[a] = base[j];
                val += w[j] * f(v, idx[0], idx[1], idx[2]);
              }
              idx[a] = it;
              f(v, idx[0], idx[1], idx[2]) = val;
            }
      }
    }
    lo[a] = -G;
    hi[a] = nn - 1 + G;
  }
}

namespace {

// (f_{i-2} - 8 f_{i-1} + 8 f_{i+1} - f_{i+2}) / (12 dx) along axis a.
inline double d4(const Field& f, int var, const int idx[3], int a, double dx) {
  int p[3] = {idx[0], idx[1], idx[2]};
  double s = 0.0;
  p[a] = idx[a] - 2;
  s += f(var, p[0], p[1], p[2]);
  p[a] = idx[a] - 1;
  s -= 8.0 * f(var, p[0], p[1], p[2]);
  p[a] = idx[a] + 1;
  s += 8.0 * f(var, p[0], p[1], p[2]);
  p[a] = idx[a] + 2;
  s -= f(var, p[0], p[1], p[2]);
  return s / (12.0 * dx);
}

}  // namespace

void curl_from_potential(const Grid& g, const Field& A, Field& AE, Field& B) {
  const int npot = potential_components(g);
  if (A.nvar() != npot || AE.nvar() != npot || A.ghosts() != 0 ||
      AE.ghosts() < 4 || B.nvar() != 3 || B.ghosts() < 2)
    throw std::invalid_argument("curl_from_potential: field shape mismatch");
  for (int v = 0; v < npot; ++v)
    for (int k = 0; k < g.nodes(2); ++k)
      for (int j = 0; j < g.nodes(1); ++j)
        for (int i = 0; i < g.nodes(0); ++i) AE(v, i, j, k) = A(v, i, j, k);
  fill_potential_ghosts(g, AE);

  const int M = 2;  // margin so divergence stencils at the boundary close
  const int klo = g.dim == 3 ? -M : 0;
  const int khi = g.dim == 3 ? g.nodes(2) - 1 + M : 0;
  for (int k = klo; k <= khi; ++k)
    for (int j = -M; j <= g.nodes(1) - 1 + M; ++j)
      for (int i = -M; i <= g.nodes(0) - 1 + M; ++i) {
        const int idx[3] = {i, j, k};
        if (g.dim == 2) {
          B(0, i, j, k) = d4(AE, 0, idx, 1, g.dx[1]);
          B(1, i, j, k) = -d4(AE, 0, idx, 0, g.dx[0]);
          B(2, i, j, k) = 0.0;
        } else {
          B(0, i, j, k) = d4(AE, 2, idx, 1, g.dx[1]) - d4(AE, 1, idx, 2, g.dx[2]);
          B(1, i, j, k) = d4(AE, 0, idx, 2, g.dx[2]) - d4(AE, 2, idx, 0, g.dx[0]);
          B(2, i, j, k) = d4(AE, 1, idx, 0, g.dx[0]) - d4(AE, 0, idx, 1, g.dx[1]);
        }
      }
}

double max_divergence(const Grid& g, const Field& B) {
  if (B.ghosts() < 2)
    throw std::invalid_argument("max_divergence: need a 2-layer margin");
  double worst = 0.0;
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        const int idx[3] = {i, j, k};
        double div = 0.0;
        for (int a = 0; a < g.dim; ++a) div += d4(B, a, idx, a, g.dx[a]);
        worst = std::max(worst, std::abs(div));
      }
  return worst;
}

double l2_divergence(const Grid& g, const Field& B) {
  if (B.ghosts() < 2)
    throw std::invalid_argument("l2_divergence: need a 2-layer margin");
  double sum = 0.0;
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        const int idx[3] = {i, j, k};
        double div = 0.0;
        for (int a = 0; a < g.dim; ++a) div += d4(B, a, idx, a, g.dx[a]);
        sum += div * div;
      }
  return std::sqrt(sum / static_cast<double>(g.total_unique()));
}

double max_field_norm(const Grid& g, const Field& B) {
  double worst = 0.0;
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        const double b0 = B(0, i, j, k), b1 = B(1, i, j, k), b2 = B(2, i, j, k);
        worst = std::max(worst, std::sqrt(b0 * b0 + b1 * b1 + b2 * b2));
      }
  return worst;
}

void replace_magnetic_field(const Grid& g, const Field& Bc, int energy_option,
                            Field& q) {
  if (energy_option != 1 && energy_option != 2)
    throw std::invalid_argument("replace_magnetic_field: energy option 1 or 2");
  const int nb = g.dim == 2 ? 2 : 3;  // in 2-D the out-of-plane slot is not
                                      // part of the curl; leave it alone
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        if (energy_option == 2) {
          double shift = 0.0;
          for (int c = 0; c < nb; ++c) {
            const double bn = Bc(c, i, j, k), bo = q(5 + c, i, j, k);
            shift += bn * bn - bo * bo;
          }
          q(4, i, j, k) += 0.5 * shift;
        }
        for (int c = 0; c < nb; ++c) q(5 + c, i, j, k) = Bc(c, i, j, k);
      }
  sync_periodic_planes(g, q);
}

}  // namespace ctmhd
