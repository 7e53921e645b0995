#pragma once
// Magnetic-potential transport. In 2-D the single component A3 is advected
// by the fluid velocity; in 3-D each component picks up stretching terms
// from the others. Spatial derivatives come from the kernel-based biased
// operators, so the update inherits their unconditional stability; each
// directional term carries Lax-Friedrichs dissipation scaled by the global
// maximum of the velocity component multiplying it.

#include <vector>

#include "ctmhd/grid.hpp"
#include "ctmhd/kernel.hpp"

namespace ctmhd {

struct PotentialParams {
  double beta = 0.0;   // per-sweep stability parameter (already per-dim)
  int order_k = 3;
  double dt = 0.0;     // step size the kernel scale is tied to
  double cmax[3] = {0.0, 0.0, 0.0};  // global max |u_m| per component
};

struct PotentialScratch {
  LineWorkspace lws;
  std::vector<double> line, u, dm, dp;
  QuadratureTable table[3];
  KernelParams kp[3];
};

int potential_components(const Grid& g);  // 1 in 2-D (A3), 3 in 3-D

// Global per-component velocity maxima over the unique nodes of U (first
// three components are the point velocities).
void velocity_maxima(const Grid& g, const Field& U, double cmax[3]);

// d(A)/dt at every stored node. A and out carry potential_components(g)
// components and no ghosts; U holds point velocities (3 components).
// Non-periodic lines close with one-sided extrapolated end derivatives.
void potential_rhs(const Grid& g, const Field& A, const Field& U,
                   const PotentialParams& params, PotentialScratch& scratch,
                   Field& out);

}  // namespace ctmhd
