#pragma once
// Benchmark problem registry: domains, boundary kinds, final times, and
// analytic initializers for the conserved state and the magnetic potential.
// Initialization replaces B by the discrete curl of A (pressure-preserving)
// so every run starts with the divergence already at round-off.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ctmhd/grid.hpp"

namespace ctmhd {

struct ProblemSpec {
  std::string name;
  int dim = 2;
  int default_cells[3] = {0, 0, 1};
  double lo[3] = {0, 0, 0}, hi[3] = {1, 1, 1};
  double t_final = 0.0;
  double gamma = 5.0 / 3.0;
  int energy_option = 1;
  BoundaryType bc_type[3][2] = {{BoundaryType::Periodic, BoundaryType::Periodic},
                                {BoundaryType::Periodic, BoundaryType::Periodic},
                                {BoundaryType::Periodic, BoundaryType::Periodic}};
  bool inflow_left = false;            // low-x face pins this conserved state
  std::array<double, 8> inflow{};
  // Analytic node data: conserved 8-vector / potential components.
  std::function<void(double, double, double, double*)> state;
  std::function<void(double, double, double, double*)> potential;
  bool has_exact = false;              // vortex_exact applies
};

const ProblemSpec& problem(const std::string& name);  // throws on unknown
std::vector<std::string> problem_names();

// Grid for the problem; nonpositive counts fall back to the defaults.
Grid make_problem_grid(const ProblemSpec& ps, int nx = 0, int ny = 0,
                       int nz = 0);

// Fill the conserved field (ghosted) and the potential at all stored nodes,
// then install curl(A) as the initial magnetic field without disturbing the
// analytic pressure.
void initialize_fields(const ProblemSpec& ps, const Grid& g, Field& q,
                       Field& A);

// Weak advected loop, shared by the 2-D and 3-D loop problems.
double field_loop_potential(double x, double y);

// Exact smooth-vortex state at time t (profile advected by (1,1), periodic).
void vortex_exact(double t, double x, double y, double* q);

}  // namespace ctmhd
