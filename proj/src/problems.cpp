#include "ctmhd/problems.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "ctmhd/ct.hpp"
#include "ctmhd/mhd.hpp"
#include "ctmhd/potential.hpp"

namespace ctmhd {

namespace {

void prim_to_conserved(double rho, double u1, double u2, double u3, double p,
                       double B1, double B2, double B3, double* q) {
  q[0] = rho;
  q[1] = rho * u1;
  q[2] = rho * u2;
  q[3] = rho * u3;
  q[4] = p / (kGamma - 1.0) + 0.5 * rho * (u1 * u1 + u2 * u2 + u3 * u3) +
         0.5 * (B1 * B1 + B2 * B2 + B3 * B3);
  q[5] = B1;
  q[6] = B2;
  q[7] = B3;
}

// Smooth vortex: uniform background advecting with (1,1); the rotational
// perturbation carries kappa in the velocity and mu in the field so that
// B stays the curl of the printed potential and the pressure perturbation
// closes the radial balance exactly. mu is tuned so the center pressure
// sits just above zero.
constexpr double kVortexMu = 5.389489439;
const double kVortexKappa = std::sqrt(2.0) * kVortexMu;

void vortex_state(double x, double y, double* q) {
  const double r2 = x * x + y * y;
  const double env = std::exp(0.5 * (1.0 - r2));
  const double du = kVortexKappa / (2.0 * M_PI) * env;
  const double db = kVortexMu / (2.0 * M_PI) * env;
  const double dp = (kVortexMu * kVortexMu * (1.0 - r2) -
                     kVortexKappa * kVortexKappa) *
                    env * env / (8.0 * M_PI * M_PI);
  prim_to_conserved(1.0, 1.0 + du * -y, 1.0 + du * x, 0.0, 1.0 + dp,
                    db * -y, db * x, 0.0, q);
}

double vortex_potential(double x, double y) {
  return kVortexMu / (2.0 * M_PI) * std::exp(0.5 * (1.0 - (x * x + y * y)));
}

// Cloud shock: post-shock state driven in from the left, static pre-shock
// medium with a dense circular cloud (density overwrite only).
constexpr double kCloudBL = 2.1826182, kCloudBR = 0.56418958;

void cloud_state(double x, double y, double* q) {
  if (x < 0.05) {
    prim_to_conserved(3.86859, 11.2536, 0, 0, 167.345, 0, kCloudBL, -kCloudBL,
                      q);
  } else {
    const double dx = x - 0.25, dy = y - 0.5;
    const double rho = dx * dx + dy * dy <= 0.15 * 0.15 ? 10.0 : 1.0;
    prim_to_conserved(rho, 0, 0, 0, 1.0, 0, kCloudBR, kCloudBR, q);
  }
}

double cloud_potential(double x) {
  // Continuous at the interface; -d/dx reproduces B2 on both sides.
  return x < 0.05 ? -kCloudBL * (x - 0.05) : -kCloudBR * (x - 0.05);
}

const double kBlastB = 50.0 / std::sqrt(2.0 * M_PI);

void blast_state(double x, double y, double z, double* q) {
  const double r2 = x * x + y * y + z * z;
  const double p = r2 <= 0.1 * 0.1 ? 1000.0 : 0.1;
  prim_to_conserved(1.0, 0, 0, 0, p, kBlastB, kBlastB, 0.0, q);
}

std::map<std::string, ProblemSpec> build_registry() {
  std::map<std::string, ProblemSpec> reg;

  {
    ProblemSpec ps;
    ps.name = "SmoothVortex";
    ps.dim = 2;
    ps.default_cells[0] = ps.default_cells[1] = 160;
    ps.lo[0] = ps.lo[1] = -10.0;
    ps.hi[0] = ps.hi[1] = 10.0;
    ps.t_final = 0.05;
    ps.energy_option = 1;
    ps.state = [](double x, double y, double, double* q) {
      vortex_state(x, y, q);
    };
    ps.potential = [](double x, double y, double, double* A) {
      A[0] = vortex_potential(x, y);
    };
    ps.has_exact = true;
    reg[ps.name] = ps;
  }

  {
    ProblemSpec ps;
    ps.name = "OrszagTang";
    ps.dim = 2;
    ps.default_cells[0] = ps.default_cells[1] = 192;
    ps.lo[0] = ps.lo[1] = 0.0;
    ps.hi[0] = ps.hi[1] = 2.0 * M_PI;
    ps.t_final = 3.0;
    ps.energy_option = 1;
    ps.state = [](double x, double y, double, double* q) {
      const double g = kGamma;
      prim_to_conserved(g * g, -std::sin(y), std::sin(x), 0.0, g,
                        -std::sin(y), std::sin(2.0 * x), 0.0, q);
    };
    ps.potential = [](double x, double y, double, double* A) {
      A[0] = 0.5 * std::cos(2.0 * x) + std::cos(y);
    };
    reg[ps.name] = ps;
  }

  {
    ProblemSpec ps;
    ps.name = "CloudShock";
    ps.dim = 2;
    ps.default_cells[0] = ps.default_cells[1] = 512;
    ps.lo[0] = ps.lo[1] = 0.0;
    ps.hi[0] = ps.hi[1] = 1.0;
    ps.t_final = 0.06;
    ps.energy_option = 2;
    for (int a = 0; a < 2; ++a)
      for (int s = 0; s < 2; ++s) ps.bc_type[a][s] = BoundaryType::Outflow;
    ps.bc_type[0][0] = BoundaryType::Inflow;
    ps.inflow_left = true;
    double qin[NV];
    prim_to_conserved(3.86859, 11.2536, 0, 0, 167.345, 0, kCloudBL, -kCloudBL,
                      qin);
    for (int v = 0; v < NV; ++v) ps.inflow[v] = qin[v];
    ps.state = [](double x, double y, double, double* q) {
      cloud_state(x, y, q);
    };
    ps.potential = [](double x, double, double, double* A) {
      A[0] = cloud_potential(x);
    };
    reg[ps.name] = ps;
  }

  {
    ProblemSpec ps;
    ps.name = "Blast2D";
    ps.dim = 2;
    ps.default_cells[0] = ps.default_cells[1] = 256;
    ps.lo[0] = ps.lo[1] = -0.5;
    ps.hi[0] = ps.hi[1] = 0.5;
    ps.t_final = 0.01;
    ps.energy_option = 2;
    for (int a = 0; a < 2; ++a)
      for (int s = 0; s < 2; ++s) ps.bc_type[a][s] = BoundaryType::Outflow;
    ps.state = [](double x, double y, double, double* q) {
      blast_state(x, y, 0.0, q);
    };
    ps.potential = [](double x, double y, double, double* A) {
      A[0] = kBlastB * (y - x);
    };
    reg[ps.name] = ps;
  }

  {
    ProblemSpec ps;
    ps.name = "FieldLoop2D";
    ps.dim = 2;
    ps.default_cells[0] = ps.default_cells[1] = 128;
    ps.lo[0] = ps.lo[1] = -0.5;
    ps.hi[0] = ps.hi[1] = 0.5;
    ps.t_final = 1.0;
    ps.energy_option = 1;
    ps.state = [](double, double, double, double* q) {
      prim_to_conserved(1.0, 2.0, 1.0, 0.0, 1.0, 0, 0, 0, q);
    };
    ps.potential = [](double x, double y, double, double* A) {
      A[0] = field_loop_potential(x, y);
    };
    reg[ps.name] = ps;
  }

  {
    ProblemSpec ps;
    ps.name = "FieldLoop3D";
    ps.dim = 3;
    ps.default_cells[0] = ps.default_cells[1] = ps.default_cells[2] = 128;
    ps.lo[0] = ps.lo[1] = ps.lo[2] = -0.5;
    ps.hi[0] = ps.hi[1] = ps.hi[2] = 0.5;
    ps.t_final = 1.0;
    ps.energy_option = 1;
    const double s6 = std::sqrt(6.0);
    ps.state = [s6](double, double, double, double* q) {
      prim_to_conserved(1.0, 2.0 / s6, 1.0 / s6, 1.0 / s6, 1.0, 0, 0, 0, q);
    };
    ps.potential = [](double x, double y, double, double* A) {
      A[0] = 0.0;
      A[1] = 0.0;
      A[2] = field_loop_potential(x, y);
    };
    reg[ps.name] = ps;
  }

  {
    ProblemSpec ps;
    ps.name = "Blast3D";
    ps.dim = 3;
    ps.default_cells[0] = ps.default_cells[1] = ps.default_cells[2] = 150;
    ps.lo[0] = ps.lo[1] = ps.lo[2] = -0.5;
    ps.hi[0] = ps.hi[1] = ps.hi[2] = 0.5;
    ps.t_final = 0.01;
    ps.energy_option = 2;
    for (int a = 0; a < 3; ++a)
      for (int s = 0; s < 2; ++s) ps.bc_type[a][s] = BoundaryType::Outflow;
    ps.state = [](double x, double y, double z, double* q) {
      blast_state(x, y, z, q);
    };
    ps.potential = [](double x, double y, double, double* A) {
      A[0] = 0.0;
      A[1] = 0.0;
      A[2] = kBlastB * (y - x);
    };
    reg[ps.name] = ps;
  }

  return reg;
}

const std::map<std::string, ProblemSpec>& registry() {
  static const std::map<std::string, ProblemSpec> reg = build_registry();
  return reg;
}

}  // namespace

double field_loop_potential(double x, double y) {
  const double R = 0.3, r = std::sqrt(x * x + y * y);
  return r <= R ? 0.001 * (R - r) : 0.0;
}

const ProblemSpec& problem(const std::string& name) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end())
    throw std::invalid_argument("unknown problem: " + name);
  return it->second;
}

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const auto& [name, ps] : registry()) names.push_back(name);
  return names;
}

Grid make_problem_grid(const ProblemSpec& ps, int nx, int ny, int nz) {
  int cells[3] = {nx > 0 ? nx : ps.default_cells[0],
                  ny > 0 ? ny : ps.default_cells[1],
                  nz > 0 ? nz : ps.default_cells[2]};
  Grid g = Grid::make(ps.dim, cells, ps.lo, ps.hi);
  for (int a = 0; a < ps.dim; ++a)
    for (int s = 0; s < 2; ++s) {
      g.bc[a][s].type = ps.bc_type[a][s];
      if (ps.bc_type[a][s] == BoundaryType::Inflow) g.bc[a][s].inflow = ps.inflow;
    }
  g.validate();
  return g;
}

void initialize_fields(const ProblemSpec& ps, const Grid& g, Field& q,
                       Field& A) {
  const int npot = potential_components(g);
  if (q.nvar() != NV || A.nvar() != npot || A.ghosts() != 0)
    throw std::invalid_argument("initialize_fields: field shape mismatch");
  double node[NV], pot[3];
  for (int k = 0; k < g.nodes(2); ++k)
    for (int j = 0; j < g.nodes(1); ++j)
      for (int i = 0; i < g.nodes(0); ++i) {
        const double x = g.coord(0, i), y = g.coord(1, j), z = g.coord(2, k);
        ps.state(x, y, z, node);
        for (int v = 0; v < NV; ++v) q(v, i, j, k) = node[v];
        ps.potential(x, y, z, pot);
        for (int c = 0; c < npot; ++c) A(c, i, j, k) = pot[c];
      }
  sync_periodic_planes(g, q);
  sync_periodic_planes(g, A);

  // Start from the discrete curl so the divergence begins at round-off;
  // pressure keeps its analytic value.
  Field AE(g, npot, 4), Bc(g, 3, 2);
  curl_from_potential(g, A, AE, Bc);
  replace_magnetic_field(g, Bc, 2, q);
}

void vortex_exact(double t, double x, double y, double* q) {
  // Profile advected by (1,1) on the periodic square of side 20;
  // remainder() gives the minimum-image coordinates about the center.
  const double xi = std::remainder(x - t, 20.0);
  const double eta = std::remainder(y - t, 20.0);
  vortex_state(xi, eta, q);
}

}  // namespace ctmhd
