#pragma once
// Run orchestration: configuration, the coupled step (base scheme + potential
// transport + curl replacement), diagnostics, snapshots, and the convergence
// harness for the problem with an exact solution.

#include <iosfwd>
#include <string>
#include <vector>

#include "ctmhd/grid.hpp"
#include "ctmhd/mhd.hpp"
#include "ctmhd/potential.hpp"
#include "ctmhd/problems.hpp"

namespace ctmhd {

struct RunConfig {
  std::string problem;
  int nx = 0, ny = 0, nz = 0;   // nonpositive: problem defaults
  double cfl = 0.5;
  int order_k = 3;
  double beta = 0.0;            // nonpositive: stability max / dim
  int energy_option = 0;        // 0: problem default
  double t_final = -1.0;        // negative: problem default
  double fixed_dt = 0.0;        // positive: overrides the CFL step
  long max_steps = 2000000;
  bool ct_enabled = true;       // false: base scheme only (ablation)
  bool curl_per_stage = false;  // also rebuild B inside RK stages
  bool diffusion_limiter = false;  // not part of this scheme; config error
  int snapshot_every = 0;       // steps between snapshots (0: final only)
  std::string outdir;           // empty: no artifacts
};

struct RunStats {
  long steps = 0;
  double t = 0.0;
  bool nan_detected = false;
  double worst_div_ratio = 0.0;        // max over steps of div/max||B||
  double last_div = 0.0, last_normB = 0.0;
  double last_l2_div = 0.0;            // RMS nodal divergence, latest step
  double initial_normB = 0.0, peak_normB = 0.0;
  double worst_pressure_shift = 0.0;   // option 2: relative p change at replace
  FloorReport floors;
  long peak_floor_call = 0;  // most nodes floored by one application, last step
};

class Solver {
 public:
  // The grid must come from make_problem_grid (or match its conventions).
  Solver(const ProblemSpec& ps, const Grid& g, const RunConfig& cfg);

  double suggest_dt() const;
  void advance(double dt);  // one SSP-RK3 step plus the curl replacement

  double time() const { return t_; }
  long steps() const { return steps_; }
  const Grid& grid() const { return g_; }
  const Field& conserved() const { return q_; }
  const Field& potential_field() const { return A_; }
  const RunStats& stats() const { return stats_; }
  bool state_finite() const;

 private:
  void assemble_rhs(const std::vector<double>& y, std::vector<double>& dydt);
  void stage_hook(std::vector<double>& y);
  void refresh_diagnostics();

  ProblemSpec ps_;
  Grid g_;
  RunConfig cfg_;
  int npot_ = 1, energy_option_ = 1;
  double beta_ = 0.0;
  Field q_, A_, U_, rhsq_, rhsA_, AE_, Bc_;
  MhdScratch mhd_s_;
  PotentialScratch pot_s_;
  std::vector<double> y_, p_scratch_;
  long nq_ = 0;
  double t_ = 0.0, current_dt_ = 0.0;
  long steps_ = 0;
  RunStats stats_;
};

// Full time loop with artifacts. Returns 0 on success, 1 on a run failure
// (non-finite state or a positivity-floor storm), 2 on a configuration
// error. Messages go to `log`.
int run(const RunConfig& cfg, std::ostream& log);

struct ConvergenceRow {
  int n = 0;
  double l1 = 0.0, linf = 0.0;
  double order_l1 = 0.0, order_linf = 0.0;  // NaN on the first row
};

// Error-vs-exact study (SmoothVortex); throws if the problem has no exact
// solution.
std::vector<ConvergenceRow> convergence_table(const RunConfig& base,
                                              const std::vector<int>& res);
void write_convergence_text(const std::vector<ConvergenceRow>& rows,
                            std::ostream& out);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           std::ostream& out);

struct SnapshotData {
  std::string problem;
  double time = 0.0;
  long step = 0;
  int dim = 0, n[3] = {0, 0, 0};  // stored sample counts per axis
  double lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0}, dx[3] = {0, 0, 0};
  std::vector<std::pair<std::string, std::vector<double>>> fields;
};

// Binary snapshot of derived node data (rho, u, p, B, ||B||, A), unique
// nodes, x fastest. Round trips bitwise.
void write_snapshot(const std::string& path, const std::string& problem,
                    double t, long step, const Grid& g, const Field& q,
                    const Field& A);
SnapshotData read_snapshot(const std::string& path);

// One z-plane (2-D: the whole domain) of a snapshot as CSV.
void write_plane_csv(const SnapshotData& snap, int kplane, std::ostream& out);

}  // namespace ctmhd
