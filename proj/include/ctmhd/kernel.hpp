#pragma once
// Kernel-based approximation of one-sided spatial derivatives on a uniform
// line. The building block is the smoothing resolvent
//   S_L[v](x) = alpha * Int_a^x e^{-alpha(x-y)} v(y) dy + A_L e^{-alpha(x-a)}
// and its right-moving mirror; the defect operators D_L = I - S_L,
// D_R = I - S_R generate biased derivative approximations
//   d^-(x) ~ dv/dx from the left,  d^+(x) ~ dv/dx from the right
// through filtered partial sums of D^p compositions, p = 1..k. With
// alpha = beta/(c*dt) the resulting semi-discrete advection update is
// A-stable for beta below the order-dependent bound, independent of dt.
//
// All right-direction quantities are evaluated by running the left engine
// on the reversed line, so the L/R mirror symmetry is exact by construction.

#include <array>
#include <cstdint>
#include <vector>

#include "ctmhd/exp_quad.hpp"

namespace ctmhd {

struct Line {
  const double* v = nullptr;  // N+1 node values
  int n_cells = 0;            // N
  double dx = 0.0;
};

enum class ClosureKind : std::uint8_t { Periodic, Extrapolated };

// Extrapolated closures carry prescribed end derivatives d^m v/dx^m,
// m = 1..order_k (entry m-1); Periodic ignores them.
struct BoundaryClosure {
  ClosureKind kind = ClosureKind::Periodic;
  std::array<double, 3> left_derivs{};
  std::array<double, 3> right_derivs{};
};

enum class Side : std::uint8_t { Minus, Plus };

struct KernelParams {
  double beta = 0.0;
  int order_k = 3;
  double c_max = 0.0;   // speed actually used (after the degenerate floor)
  double dt = 0.0;
  double alpha = 0.0;
  double nu = 0.0;      // alpha*dx
  double mu = 0.0;      // e^{-alpha(b-a)}
  int dims = 1;
};

// A-stability bound on beta for the order-k scheme (1D); divide by the
// space dimension in multi-d sweeps.
double beta_stability_max(int order_k);

// Degenerate-speed floor: alpha is built from max(c_max, 1e-8*(b-a)/dt).
KernelParams make_kernel_params(double beta, int order_k, double c_max,
                                double dt, const Line& line, int dims = 1,
                                bool enforce_beta_bound = true);

struct LineWorkspace {
  std::vector<double> decay;                    // e^{-i*nu}, i = 0..N
  std::vector<double> J, I, xi, sigma;
  std::vector<double> w1, in2, w2, in3, w3, Iaux, d0;
  std::vector<double> rv, rout;                 // reversed scratch
  long clamp_activations = 0;
  void resize(int N);
};

// I[0] = 0; I[i] = decay*I[i-1] + J[i].
void accumulate(const double* J, int N, double decay, double* I);

// Low-level defect application in left orientation on values u[0..N] whose
// accumulated integrals are I[0..N]: out[i] = u[i] - I[i] - coef*decay^i.
// Periodic coefficient: I[N]/(1-mu); value closure: coef = u[0] - C.
void defect_from_integrals(const double* u, const double* I, int N,
                           const double* decay, double coef, double* out);

// One application of D_L or D_R with WENO-Z quadrature. Extrapolated
// closures impose the operator's endpoint value C from the first
// derivative: C_a = v'(a)/alpha (left), C_b = -v'(b)/alpha (right).
void apply_defect(const Line& line, const KernelParams& p,
                  const BoundaryClosure& closure, Side dir,
                  const QuadratureTable& table, LineWorkspace& ws,
                  double* out);

// Two-sided defect D_0[v] = v - (I^L + I^R)/2 - A0 e^{-a..} - B0 e^{..b}
// with endpoint values imposed as 0 for the Extrapolated kind.
void apply_two_sided_defect(const Line& line, const KernelParams& p,
                            const BoundaryClosure& closure,
                            const QuadratureTable& table, LineWorkspace& ws,
                            double* out);

// d^-(side Minus) or d^+(side Plus) at every node of the line.
void biased_derivative(const Line& line, const KernelParams& p,
                       const BoundaryClosure& closure, Side side,
                       const QuadratureTable& table, LineWorkspace& ws,
                       double* out);

// End derivatives d^m v/dx^m for m = 1..order_k at both endpoints from a
// one-sided polynomial fit of degree order_k+2 through the nearest
// order_k+3 nodes. Exact for polynomials up to that degree.
void extrapolate_edge_derivatives(const Line& line, int order_k,
                                  std::array<double, 3>& left,
                                  std::array<double, 3>& right);

// Convenience: fills an Extrapolated closure from the line itself.
BoundaryClosure extrapolated_closure(const Line& line, int order_k);

}  // namespace ctmhd
