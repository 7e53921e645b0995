#pragma once
// Uniform node-centered grids in 2-D/3-D. An axis with n cells stores n+1
// nodes; on a periodic axis node n duplicates node 0 and the wrap period is
// n. Conserved-variable fields carry ghost layers; potential fields do not.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ctmhd {

enum class BoundaryType : std::uint8_t { Periodic, Outflow, Inflow };

struct FaceBC {
  BoundaryType type = BoundaryType::Periodic;
  std::array<double, 8> inflow{};  // conserved state held in Inflow ghosts
};

struct Grid {
  int dim = 2;
  int n[3] = {0, 0, 0};  // cells per axis; n[2] = 0 in 2-D
  double lo[3] = {0.0, 0.0, 0.0};
  double hi[3] = {1.0, 1.0, 1.0};
  double dx[3] = {0.0, 0.0, 0.0};
  FaceBC bc[3][2];  // [axis][0 = low face, 1 = high face]

  static Grid make(int dim, const int* cells, const double* lo,
                   const double* hi);

  bool periodic(int a) const { return bc[a][0].type == BoundaryType::Periodic; }
  int nodes(int a) const { return a < dim ? n[a] + 1 : 1; }
  int unique(int a) const {
    return a < dim ? (periodic(a) ? n[a] : n[a] + 1) : 1;
  }
  double coord(int a, int i) const { return lo[a] + i * dx[a]; }
  long total_unique() const {
    return static_cast<long>(unique(0)) * unique(1) * unique(2);
  }
  void validate() const;  // periodic faces must pair up, cells >= 1
};

// nvar components over the grid's node box, padded by `ghosts` layers along
// each active axis. Ghost indices are negative / beyond nodes(a)-1.
class Field {
 public:
  Field() = default;
  Field(const Grid& g, int nvar, int ghosts);

  double& operator()(int v, int i, int j, int k = 0) {
    return buf_[index(v, i, j, k)];
  }
  double operator()(int v, int i, int j, int k = 0) const {
    return buf_[index(v, i, j, k)];
  }

  int nvar() const { return nv_; }
  int ghosts() const { return g_; }
  double* raw() { return buf_.data(); }
  const double* raw() const { return buf_.data(); }
  long size() const { return static_cast<long>(buf_.size()); }

  long index(int v, int i, int j, int k) const {
    return ((static_cast<long>(v) * ext_[2] + (k + off_[2])) * ext_[1] +
            (j + off_[1])) *
               ext_[0] +
           (i + off_[0]);
  }
  // Stride of one step along axis a at fixed component.
  long stride(int a) const {
    switch (a) {
      case 0: return 1;
      case 1: return ext_[0];
      default: return static_cast<long>(ext_[0]) * ext_[1];
    }
  }

 private:
  std::vector<double> buf_;
  int nv_ = 0, g_ = 0;
  int ext_[3] = {1, 1, 1};  // padded extent per axis
  int off_[3] = {0, 0, 0};  // ghost offset per axis (0 on inactive axes)
};

// Node n := node 0 on every periodic axis (whole duplicate plane).
void sync_periodic_planes(const Grid& g, Field& f);

// Ghost fill: periodic wrap with period n, zeroth-order copy at Outflow,
// the fixed face state at Inflow. Axis-by-axis sweeps over already-extended
// ranges so edge/corner ghosts end up defined. Duplicate planes are synced
// first.
void fill_ghosts(const Grid& g, Field& f);

// Flat evolved-dof block: nvar * unique nodes, x fastest.
long pack_size(const Grid& g, int nvar);
void pack(const Grid& g, const Field& f, double* out);
void unpack(const Grid& g, const double* in, Field& f);  // + duplicate sync

// Full padded line along `axis` at transverse nodes t1 < t2 in axis order
// (axis 0: (j,k), axis 1: (i,k), axis 2: (i,j)). buf receives
// nodes(axis) + 2*ghosts values, ghost nodes first.
void gather_line(const Grid& g, const Field& f, int axis, int var, int t1,
                 int t2, double* buf);
// Interior stored nodes 0..nodes(axis)-1 from buf (same padding layout).
void scatter_line(const Grid& g, Field& f, int axis, int var, int t1, int t2,
                  const double* buf);

}  // namespace ctmhd
