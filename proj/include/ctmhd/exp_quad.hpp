#pragma once
// Quadrature of cell integrals against a one-sided exponential weight:
//   J_i = nu * Int_{-1}^{0} v(x_i + z*dx) e^{nu z} dz,   nu = alpha*dx > 0,
// evaluated from node values by WENO-Z combination of three 4-node stencils
// (cubic-exact each) whose linear recombination reproduces the 6-node
// quintic-exact rule. All weights are functions of nu and are rebuilt
// whenever nu changes; nodes are integer offsets relative to x_i.

#include <array>
#include <cstdint>
#include <vector>

namespace ctmhd {

// m[q] = nu * Int_{-1}^{0} z^q e^{nu z} dz for q = 0..qmax.
// Upward recurrence for nu >= 1, alternating series for nu < 1 (the
// recurrence loses all digits to cancellation as nu -> 0).
void exp_moments(double nu, int qmax, double* m);

// Node weights w[0..n-1] at integer offsets offs[] (relative to the cell's
// right node) reproducing the moments exactly for degrees < n.
void exp_cell_weights(double nu, const int* offs, int n, double* w);

struct QuadratureTable {
  double nu = 0.0;
  double big[6];                 // offsets {-3..2}
  double small[3][4];            // stencil r at offsets {-3+r .. r}
  double d[3];                   // linear weights: big = sum_r d[r]*small[r]
  double d_residual = 0.0;       // max node residual of that identity
  bool d_negative = false;       // any d[r] < 0: nonlinear weights are clamped
  double big_shifted[5][6];      // boundary cells; index s+2, s = first-offset+3
};

QuadratureTable build_quadrature_table(double nu);

struct SmoothnessReport {
  double beta[3];
  double tau5;
  double xi;                     // in (0,1]; 1 on smooth data, -> 0 at a jump
};

// v6 = {v_{i-3}, ..., v_{i+2}} for the cell [x_{i-1}, x_i].
SmoothnessReport smoothness_indicators(const double* v6);

// WENO-Z weights; increments *clamp_count when a negative linear weight had
// to be clamped. eps = 1e-6.
void wenoz_weights(const QuadratureTable& t, const SmoothnessReport& s,
                   double* omega, long* clamp_count);

// Left-direction cell integrals over v[0..N] (N cells, nodes 0..N).
// J[1..N] filled (J[0] = 0), xi[0..N] filled per cell with xi[0] := xi[N]
// under periodic wrap and xi[0] := xi[1] otherwise (boundary cells carry
// xi = 1: their shifted stencils use the linear rule).
// Periodic lines assume v[N] == v[0] and wrap indices with period N.
void cell_integrals(const double* v, int N, const QuadratureTable& t,
                    bool periodic, double* J, double* xi, long* clamp_count);

// Same cell layout, linear weights only (compositions p >= 2).
void linear_cell_integrals(const double* v, int N, const QuadratureTable& t,
                           bool periodic, double* J);

// sigma[i] = min(xi[i-1], xi[i]) with the wrap/clamp convention above.
void filters(const double* xi, int N, bool periodic, double* sigma);

// Dense linear solve, partial pivoting; A is n x n row-major, overwritten.
// Returns false on a (numerically) singular matrix.
bool solve_dense(int n, double* A, double* b);

}  // namespace ctmhd
