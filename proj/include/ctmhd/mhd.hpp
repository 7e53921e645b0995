#pragma once
// Ideal-MHD conserved variables, fluxes, wave speeds, and the base
// finite-difference update: componentwise global Lax-Friedrichs splitting
// with fifth-order WENO interface reconstruction, dimension by dimension.

#include <vector>

#include "ctmhd/grid.hpp"

namespace ctmhd {

// Conserved layout: rho, rho*u (3), total energy, B (3).
constexpr int NV = 8;
constexpr double kGamma = 5.0 / 3.0;
constexpr double kRhoFloor = 1e-12;
constexpr double kPressureFloor = 1e-12;

double pressure(const double* q);
void physical_flux(const double* q, int axis, double* F);

struct WaveSpeeds {
  double a = 0.0;   // sound
  double ca = 0.0;  // Alfven along the chosen axis
  double cf = 0.0;  // fast magnetosonic
  double cs = 0.0;  // slow magnetosonic
};
WaveSpeeds wave_speeds(const double* q, int axis);

// Upwind-from-the-left interface value \hat f_{i+1/2} from point values
// v[0..4] = f_{i-2..i+2}. The mirrored side is this on the reversed window.
double weno5_js(const double* v);

struct MaxSpeeds {
  double lambda[3] = {0.0, 0.0, 0.0};  // max(|u_a| + c_f(axis a)) per axis
};
MaxSpeeds compute_max_speeds(const Grid& g, const Field& q);

// CFL / (em * sum_a 1/dx_a) with em the largest directional signal speed.
double compute_dt(const Grid& g, const Field& q, double cfl);

struct FloorReport {
  long rho_floored = 0;
  long p_floored = 0;
  long long node_stages = 0;  // floor opportunities seen (nodes x calls)
};
// Pointwise reset: rho >= kRhoFloor; energy raised so p >= kPressureFloor.
void apply_floors(const Grid& g, Field& q, FloorReport& report);

struct MhdScratch {
  std::vector<double> q, fp, fm, H;
};

// d(q)/dt from the flux divergence. Fills the ghosts of q (it is restored
// to a consistent state, not otherwise modified). Adds nothing but the
// hyperbolic terms; out must be a ghost-free NV-component field.
void mhd_rhs(const Grid& g, Field& q, Field& out, MhdScratch& scratch,
             MaxSpeeds* speeds_out = nullptr);

}  // namespace ctmhd
