#include "ctmhd/grid.hpp"

#include <algorithm>

namespace ctmhd {

namespace {
inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}
}  // namespace

Grid Grid::make(int dim, const int* cells, const double* lo, const double* hi) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("Grid::make: dim must be 2 or 3");
  Grid g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (cells[a] < 1)
        throw std::invalid_argument("Grid::make: need at least one cell");
      if (!(hi[a] > lo[a]))
        throw std::invalid_argument("Grid::make: empty axis extent");
      g.n[a] = cells[a];
      g.lo[a] = lo[a];
      g.hi[a] = hi[a];
      g.dx[a] = (hi[a] - lo[a]) / cells[a];
    } else {
      g.n[a] = 0;
      g.lo[a] = 0.0;
      g.hi[a] = 0.0;
      g.dx[a] = 1.0;  // inactive axis: harmless in divisions
    }
  }
  return g;
}

void Grid::validate() const {
  for (int a = 0; a < dim; ++a) {
    const bool p0 = bc[a][0].type == BoundaryType::Periodic;
    const bool p1 = bc[a][1].type == BoundaryType::Periodic;
    if (p0 != p1)
      throw std::invalid_argument(
          "Grid: a periodic axis must be periodic on both faces");
  }
}

Field::Field(const Grid& g, int nvar, int ghosts) : nv_(nvar), g_(ghosts) {
  for (int a = 0; a < 3; ++a) {
    const bool active = a < g.dim;
    ext_[a] = g.nodes(a) + (active ? 2 * ghosts : 0);
    off_[a] = active ? ghosts : 0;
  }
  buf_.assign(static_cast<long>(nvar) * ext_[0] * ext_[1] * ext_[2], 0.0);
}

void sync_periodic_planes(const Grid& g, Field& f) {
  for (int a = 0; a < g.dim; ++a) {
    if (!g.periodic(a)) continue;
    const int last = g.n[a];
    for (int v = 0; v < f.nvar(); ++v)
      for (int c2 = 0; c2 < g.nodes((a + 2) % 3); ++c2)
        for (int c1 = 0; c1 < g.nodes((a + 1) % 3); ++c1) {
          int dst[3], src[3];
          dst[a] = last;
          src[a] = 0;
          dst[(a + 1) % 3] = src[(a + 1) % 3] = c1;
          dst[(a + 2) % 3] = src[(a + 2) % 3] = c2;
          f(v, dst[0], dst[1], dst[2]) = f(v, src[0], src[1], src[2]);
        }
  }
}

void fill_ghosts(const Grid& g, Field& f) {
  sync_periodic_planes(g, f);
  const int G = f.ghosts();
  if (G == 0) return;
  // Ranges grow axis by axis so edge and corner ghosts get defined by the
  // later sweeps reading the earlier ones.
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a) hi[a] = g.nodes(a) - 1;
  for (int a = 0; a < g.dim; ++a) {
    const int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      const FaceBC& bc = g.bc[a][side];
      for (int layer = 1; layer <= G; ++layer) {
        const int it = side == 0 ? -layer : g.nodes(a) - 1 + layer;
        const int is = bc.type == BoundaryType::Periodic
                           ? wrap(it, g.n[a])
                           : std::clamp(it, 0, g.nodes(a) - 1);
        for (int v = 0; v < f.nvar(); ++v) {
          const double inflow_v = v < 8 ? bc.inflow[v] : 0.0;
          for (int c2 = lo[b2]; c2 <= hi[b2]; ++c2)
            for (int c1 = lo[b1]; c1 <= hi[b1]; ++c1) {
              int dst[3], src[3];
              dst[a] = it;
              src[a] = is;
              dst[b1] = src[b1] = c1;
              dst[b2] = src[b2] = c2;
              f(v, dst[0], dst[1], dst[2]) =
                  bc.type == BoundaryType::Inflow
                      ? inflow_v
                      : f(v, src[0], src[1], src[2]);
            }
        }
      }
    }
    lo[a] = -G;
    hi[a] = g.nodes(a) - 1 + G;
  }
}

long pack_size(const Grid& g, int nvar) {
  return static_cast<long>(nvar) * g.total_unique();
}

void pack(const Grid& g, const Field& f, double* out) {
  long m = 0;
  for (int v = 0; v < f.nvar(); ++v)
    for (int k = 0; k < g.unique(2); ++k)
      for (int j = 0; j < g.unique(1); ++j)
        for (int i = 0; i < g.unique(0); ++i) out[m++] = f(v, i, j, k);
}

void unpack(const Grid& g, const double* in, Field& f) {
  long m = 0;
  for (int v = 0; v < f.nvar(); ++v)
    for (int k = 0; k < g.unique(2); ++k)
      for (int j = 0; j < g.unique(1); ++j)
        for (int i = 0; i < g.unique(0); ++i) f(v, i, j, k) = in[m++];
  sync_periodic_planes(g, f);
}

void gather_line(const Grid& g, const Field& f, int axis, int var, int t1,
                 int t2, double* buf) {
  const int G = f.ghosts();
  const int nn = g.nodes(axis);
  int idx[3];
  switch (axis) {
    case 0: idx[1] = t1; idx[2] = t2; break;
    case 1: idx[0] = t1; idx[2] = t2; break;
    default: idx[0] = t1; idx[1] = t2; break;
  }
  for (int i = -G; i < nn + G; ++i) {
    idx[axis] = i;
    buf[i + G] = f(var, idx[0], idx[1], idx[2]);
  }
}

void scatter_line(const Grid& g, Field& f, int axis, int var, int t1, int t2,
                  const double* buf) {
  const int G = f.ghosts();
  const int nn = g.nodes(axis);
  int idx[3];
  switch (axis) {
    case 0: idx[1] = t1; idx[2] = t2; break;
    case 1: idx[0] = t1; idx[2] = t2; break;
    default: idx[0] = t1; idx[1] = t2; break;
  }
  for (int i = 0; i < nn; ++i) {
    idx[axis] = i;
    f(var, idx[0], idx[1], idx[2]) = buf[i + G];
  }
}

}  // namespace ctmhd
