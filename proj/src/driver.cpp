#include "ctmhd/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ctmhd/ct.hpp"
#include "ctmhd/kernel.hpp"
#include "ctmhd/ssp.hpp"

namespace ctmhd {

Solver::Solver(const ProblemSpec& ps, const Grid& g, const RunConfig& cfg)
    : ps_(ps), g_(g), cfg_(cfg) {
  npot_ = potential_components(g_);
  energy_option_ =
      cfg_.energy_option > 0 ? cfg_.energy_option : ps_.energy_option;
  if (energy_option_ != 1 && energy_option_ != 2)
    throw std::invalid_argument("Solver: energy option must be 1 or 2");
  if (cfg_.order_k < 1 || cfg_.order_k > 3)
    throw std::invalid_argument("Solver: kernel order must be 1, 2 or 3");
  beta_ = cfg_.beta > 0.0 ? cfg_.beta
                          : beta_stability_max(cfg_.order_k) / g_.dim;

  q_ = Field(g_, NV, 4);
  A_ = Field(g_, npot_, 0);
  U_ = Field(g_, 3, 0);
  rhsq_ = Field(g_, NV, 0);
  rhsA_ = Field(g_, npot_, 0);
  AE_ = Field(g_, npot_, 4);
  Bc_ = Field(g_, 3, 2);
  initialize_fields(ps_, g_, q_, A_);

  nq_ = pack_size(g_, NV);
  y_.resize(nq_ + pack_size(g_, npot_));
  pack(g_, q_, y_.data());
  pack(g_, A_, y_.data() + nq_);

  curl_from_potential(g_, A_, AE_, Bc_);
  stats_.initial_normB = max_field_norm(g_, Bc_);
  stats_.peak_normB = stats_.initial_normB;
  stats_.last_normB = stats_.initial_normB;
  stats_.last_div = max_divergence(g_, Bc_);
}

double Solver::suggest_dt() const { return compute_dt(g_, q_, cfg_.cfl); }

void Solver::assemble_rhs(const std::vector<double>& y,
                          std::vector<double>& dydt) {
  unpack(g_, y.data(), q_);
  unpack(g_, y.data() + nq_, A_);
  for (int k = 0; k < g_.nodes(2); ++k)
    for (int j = 0; j < g_.nodes(1); ++j)
      for (int i = 0; i < g_.nodes(0); ++i) {
        const double rho = q_(0, i, j, k);
        for (int c = 0; c < 3; ++c) U_(c, i, j, k) = q_(1 + c, i, j, k) / rho;
      }

  mhd_rhs(g_, q_, rhsq_, mhd_s_);

  PotentialParams pp;
  pp.beta = beta_;
  pp.order_k = cfg_.order_k;
  pp.dt = current_dt_;
  velocity_maxima(g_, U_, pp.cmax);
  potential_rhs(g_, A_, U_, pp, pot_s_, rhsA_);

  pack(g_, rhsq_, dydt.data());
  pack(g_, rhsA_, dydt.data() + nq_);
}

void Solver::stage_hook(std::vector<double>& y) {
  unpack(g_, y.data(), q_);
  const long before = stats_.floors.rho_floored + stats_.floors.p_floored;
  apply_floors(g_, q_, stats_.floors);
  const long fired =
      stats_.floors.rho_floored + stats_.floors.p_floored - before;
  stats_.peak_floor_call = std::max(stats_.peak_floor_call, fired);
  if (cfg_.curl_per_stage && cfg_.ct_enabled) {
    unpack(g_, y.data() + nq_, A_);
    curl_from_potential(g_, A_, AE_, Bc_);
    replace_magnetic_field(g_, Bc_, energy_option_, q_);
  }
  pack(g_, q_, y.data());
}

void Solver::refresh_diagnostics() {
  const double div = max_divergence(g_, Bc_);
  const double bn = max_field_norm(g_, Bc_);
  stats_.last_div = div;
  stats_.last_l2_div = l2_divergence(g_, Bc_);
  stats_.last_normB = bn;
  if (bn > 0.0)
    stats_.worst_div_ratio = std::max(stats_.worst_div_ratio, div / bn);
  stats_.peak_normB = std::max(stats_.peak_normB, bn);
}

void Solver::advance(double dt) {
  current_dt_ = dt;
  stats_.peak_floor_call = 0;
  ssp_rk_step(
      3, t_, dt, y_,
      [this](const std::vector<double>& y, double, std::vector<double>& f) {
        assemble_rhs(y, f);
      },
      [this](std::vector<double>& y, double) { stage_hook(y); });

  unpack(g_, y_.data(), q_);
  unpack(g_, y_.data() + nq_, A_);
  if (cfg_.ct_enabled) {
    curl_from_potential(g_, A_, AE_, Bc_);
    if (energy_option_ == 2) {
      p_scratch_.assign(static_cast<std::size_t>(g_.total_unique()), 0.0);
      std::size_t m = 0;
      double node[NV];
      for (int k = 0; k < g_.unique(2); ++k)
        for (int j = 0; j < g_.unique(1); ++j)
          for (int i = 0; i < g_.unique(0); ++i) {
            for (int v = 0; v < NV; ++v) node[v] = q_(v, i, j, k);
            p_scratch_[m++] = pressure(node);
          }
    }
    replace_magnetic_field(g_, Bc_, energy_option_, q_);
    if (energy_option_ == 2) {
      std::size_t m = 0;
      double node[NV];
      for (int k = 0; k < g_.unique(2); ++k)
        for (int j = 0; j < g_.unique(1); ++j)
          for (int i = 0; i < g_.unique(0); ++i) {
            for (int v = 0; v < NV; ++v) node[v] = q_(v, i, j, k);
            const double p0 = p_scratch_[m++];
            const double shift =
                std::abs(pressure(node) - p0) / std::max(std::abs(p0), 1e-300);
            stats_.worst_pressure_shift =
                std::max(stats_.worst_pressure_shift, shift);
          }
    }
    pack(g_, q_, y_.data());
  } else {
    // Diagnostics only: extend the base-scheme field so the divergence
    // stencil closes at the boundary.
    for (int k = 0; k < g_.nodes(2); ++k)
      for (int j = 0; j < g_.nodes(1); ++j)
        for (int i = 0; i < g_.nodes(0); ++i)
          for (int c = 0; c < 3; ++c) Bc_(c, i, j, k) = q_(5 + c, i, j, k);
    fill_potential_ghosts(g_, Bc_);
  }
  refresh_diagnostics();
  t_ += dt;
  ++steps_;
  stats_.steps = steps_;
  stats_.t = t_;
  if (!state_finite()) stats_.nan_detected = true;
}

bool Solver::state_finite() const {
  for (double v : y_)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

void derived_node(const double* q, double* out9) {
  const double rho = q[0];
  out9[0] = rho;
  for (int c = 0; c < 3; ++c) out9[1 + c] = q[1 + c] / rho;
  out9[4] = pressure(q);
  for (int c = 0; c < 3; ++c) out9[5 + c] = q[5 + c];
  out9[8] = std::sqrt(q[5] * q[5] + q[6] * q[6] + q[7] * q[7]);
}

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void get(std::ifstream& f, T& v) {
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
}

constexpr char kSnapshotMagic[8] = {'C', 'T', 'M', 'H', 'D', 'S', 'N', '1'};

}  // namespace

void write_snapshot(const std::string& path, const std::string& problem,
                    double t, long step, const Grid& g, const Field& q,
                    const Field& A) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open snapshot for write: " + path);
  f.write(kSnapshotMagic, 8);
  const std::int32_t nlen = static_cast<std::int32_t>(problem.size());
  put(f, nlen);
  f.write(problem.data(), nlen);
  put(f, t);
  const std::int64_t step64 = step;
  put(f, step64);
  const std::int32_t dim = g.dim;
  put(f, dim);
  for (int a = 0; a < 3; ++a) put(f, static_cast<std::int32_t>(g.unique(a)));
  for (int a = 0; a < 3; ++a) put(f, g.lo[a]);
  for (int a = 0; a < 3; ++a) put(f, g.hi[a]);
  for (int a = 0; a < 3; ++a) put(f, g.dx[a]);

  std::vector<std::string> names = {"rho", "u1", "u2", "u3", "p",
                                    "B1",  "B2", "B3", "normB"};
  const int npot = A.nvar();
  if (npot == 1) {
    names.push_back("A3");
  } else {
    names.push_back("A1");
    names.push_back("A2");
    names.push_back("A3");
  }
  const std::int32_t nfields = static_cast<std::int32_t>(names.size());
  put(f, nfields);
  const std::int64_t count = g.total_unique();
  for (const std::string& name : names) {
    const std::int32_t len = static_cast<std::int32_t>(name.size());
    put(f, len);
    f.write(name.data(), len);
    put(f, count);
  }

  std::vector<std::vector<double>> data(names.size());
  for (auto& d : data) d.reserve(count);
  double node[NV], der[9];
  for (int k = 0; k < g.unique(2); ++k)
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        for (int v = 0; v < NV; ++v) node[v] = q(v, i, j, k);
        derived_node(node, der);
        for (int m = 0; m < 9; ++m) data[m].push_back(der[m]);
        for (int c = 0; c < npot; ++c) data[9 + c].push_back(A(c, i, j, k));
      }
  for (const auto& d : data)
    f.write(reinterpret_cast<const char*>(d.data()),
            static_cast<std::streamsize>(d.size() * sizeof(double)));
  if (!f) throw std::runtime_error("snapshot write failed: " + path);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[8];
  f.read(magic, 8);
  if (std::memcmp(magic, kSnapshotMagic, 8) != 0)
    throw std::runtime_error("not a snapshot file: " + path);
  SnapshotData s;
  std::int32_t nlen = 0;
  get(f, nlen);
  s.problem.resize(nlen);
  f.read(s.problem.data(), nlen);
  get(f, s.time);
  std::int64_t step64 = 0;
  get(f, step64);
  s.step = static_cast<long>(step64);
  std::int32_t dim = 0;
  get(f, dim);
  s.dim = dim;
  for (int a = 0; a < 3; ++a) {
    std::int32_t n = 0;
    get(f, n);
    s.n[a] = n;
  }
  for (int a = 0; a < 3; ++a) get(f, s.lo[a]);
  for (int a = 0; a < 3; ++a) get(f, s.hi[a]);
  for (int a = 0; a < 3; ++a) get(f, s.dx[a]);
  std::int32_t nfields = 0;
  get(f, nfields);
  std::vector<std::int64_t> counts(nfields);
  for (int m = 0; m < nfields; ++m) {
    std::int32_t len = 0;
    get(f, len);
    std::string name(len, '\0');
    f.read(name.data(), len);
    get(f, counts[m]);
    s.fields.emplace_back(std::move(name), std::vector<double>());
  }
  for (int m = 0; m < nfields; ++m) {
    s.fields[m].second.resize(counts[m]);
    f.read(reinterpret_cast<char*>(s.fields[m].second.data()),
           static_cast<std::streamsize>(counts[m] * sizeof(double)));
  }
  if (!f) throw std::runtime_error("snapshot truncated: " + path);
  return s;
}

void write_plane_csv(const SnapshotData& snap, int kplane, std::ostream& out) {
  const int cx = std::max(1, snap.n[0]);
  const int cy = std::max(1, snap.n[1]);
  const int cz = std::max(1, snap.n[2]);
  if (static_cast<long>(cx) * cy * cz !=
      static_cast<long>(snap.fields.at(0).second.size()))
    throw std::runtime_error("snapshot node counts inconsistent");
  if (kplane < 0 || kplane >= cz)
    throw std::invalid_argument("plane index out of range");

  out << "x,y,z";
  for (const auto& [name, d] : snap.fields) out << ',' << name;
  out << '\n';
  out << std::setprecision(17);
  for (int j = 0; j < cy; ++j)
    for (int i = 0; i < cx; ++i) {
      const long m =
          (static_cast<long>(kplane) * cy + j) * cx + i;
      out << snap.lo[0] + i * snap.dx[0] << ','
          << snap.lo[1] + j * snap.dx[1] << ','
          << snap.lo[2] + kplane * snap.dx[2];
      for (const auto& [name, d] : snap.fields) out << ',' << d.at(m);
      out << '\n';
    }
}

int run(const RunConfig& cfg, std::ostream& log) {
  ProblemSpec ps;
  try {
    ps = problem(cfg.problem);
    if (cfg.diffusion_limiter)
      throw std::invalid_argument(
          "diffusion limiter is not part of this scheme (the kernel solver "
          "is unconditionally stable without it)");
    if (cfg.cfl <= 0.0) throw std::invalid_argument("CFL must be positive");
    if (cfg.order_k < 1 || cfg.order_k > 3)
      throw std::invalid_argument("kernel order must be 1, 2 or 3");
    if (cfg.beta > 0.0 &&
        cfg.beta > beta_stability_max(cfg.order_k) / ps.dim + 1e-12)
      throw std::invalid_argument("beta exceeds the stability bound");
    if (cfg.energy_option < 0 || cfg.energy_option > 2)
      throw std::invalid_argument("energy option must be 1 or 2");
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  }

  const double t_final = cfg.t_final >= 0.0 ? cfg.t_final : ps.t_final;
  std::ofstream divlog;
  if (!cfg.outdir.empty()) {
    std::filesystem::create_directories(cfg.outdir);
    divlog.open(cfg.outdir + "/divergence.csv");
    divlog << "step,t,dt,max_div,l2_div,floored\n" << std::setprecision(17);
  }

  try {
    Grid g = make_problem_grid(ps, cfg.nx, cfg.ny, cfg.nz);
    Solver solver(ps, g, cfg);
    const long nodes = g.total_unique();
    log << cfg.problem << ": " << g.unique(0) << "x" << g.unique(1);
    if (g.dim == 3) log << "x" << g.unique(2);
    log << " nodes, t_final=" << t_final << ", energy option "
        << (cfg.energy_option > 0 ? cfg.energy_option : ps.energy_option)
        << '\n';

    long prev_rho = 0, prev_p = 0;
    while (solver.time() < t_final * (1.0 - 1e-14) &&
           solver.steps() < cfg.max_steps) {
      double dt = cfg.fixed_dt > 0.0 ? cfg.fixed_dt : solver.suggest_dt();
      dt = std::min(dt, t_final - solver.time());
      solver.advance(dt);

      const RunStats& st = solver.stats();
      const long fired = (st.floors.rho_floored - prev_rho) +
                         (st.floors.p_floored - prev_p);
      prev_rho = st.floors.rho_floored;
      prev_p = st.floors.p_floored;
      if (divlog)
        divlog << st.steps << ',' << st.t << ',' << dt << ',' << st.last_div
               << ',' << st.last_l2_div << ',' << fired << '\n';
      if (st.nan_detected) {
        log << "run failed: non-finite state at t=" << st.t << " (step "
            << st.steps << ")\n";
        return 1;
      }
      // Storm abort keys off the largest single application, not the sum
      // over the step's stages, so a chronic node is not triple-counted.
      if (st.peak_floor_call > nodes / 100) {
        log << "run failed: positivity-floor storm (" << st.peak_floor_call
            << " of " << nodes << " nodes) at t=" << st.t << '\n';
        return 1;
      }
      if (!cfg.outdir.empty() && cfg.snapshot_every > 0 &&
          st.steps % cfg.snapshot_every == 0) {
        std::ostringstream name;
        name << cfg.outdir << "/snap_" << std::setw(6) << std::setfill('0')
             << st.steps << ".bin";
        write_snapshot(name.str(), cfg.problem, st.t, st.steps, g,
                       solver.conserved(), solver.potential_field());
      }
    }

    const RunStats& st = solver.stats();
    log << "done: " << st.steps << " steps to t=" << st.t
        << "; max div/||B|| = " << st.worst_div_ratio
        << "; floors rho=" << st.floors.rho_floored
        << " p=" << st.floors.p_floored << '\n';
    if (!cfg.outdir.empty())
      write_snapshot(cfg.outdir + "/final.bin", cfg.problem, st.t, st.steps,
                     g, solver.conserved(), solver.potential_field());

    if (ps.has_exact) {
      double l1 = 0.0, linf = 0.0;
      double node[NV];
      for (int j = 0; j < g.unique(1); ++j)
        for (int i = 0; i < g.unique(0); ++i) {
          vortex_exact(st.t, g.coord(0, i), g.coord(1, j), node);
          const double e = std::abs(solver.conserved()(0, i, j) - node[0]);
          l1 += e;
          linf = std::max(linf, e);
        }
      l1 /= static_cast<double>(nodes);
      log << "density error vs exact: L1=" << l1 << " Linf=" << linf << '\n';
    }
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    log << "run failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

std::vector<ConvergenceRow> convergence_table(const RunConfig& base,
                                              const std::vector<int>& res) {
  const ProblemSpec& ps = problem(base.problem);
  if (!ps.has_exact)
    throw std::invalid_argument("convergence table needs an exact solution");
  std::vector<ConvergenceRow> rows;
  for (int n : res) {
    RunConfig cfg = base;
    cfg.nx = cfg.ny = n;
    cfg.outdir.clear();
    const double t_final = cfg.t_final >= 0.0 ? cfg.t_final : ps.t_final;
    Grid g = make_problem_grid(ps, n, n, 0);
    Solver solver(ps, g, cfg);
    while (solver.time() < t_final * (1.0 - 1e-14) &&
           solver.steps() < cfg.max_steps) {
      double dt = cfg.fixed_dt > 0.0 ? cfg.fixed_dt : solver.suggest_dt();
      dt = std::min(dt, t_final - solver.time());
      solver.advance(dt);
      if (!solver.state_finite())
        throw std::runtime_error("non-finite state in convergence run");
    }
    ConvergenceRow row;
    row.n = n;
    double node[NV];
    for (int j = 0; j < g.unique(1); ++j)
      for (int i = 0; i < g.unique(0); ++i) {
        vortex_exact(solver.time(), g.coord(0, i), g.coord(1, j), node);
        const double e = std::abs(solver.conserved()(0, i, j) - node[0]);
        row.l1 += e;
        row.linf = std::max(row.linf, e);
      }
    row.l1 /= static_cast<double>(g.total_unique());
    if (rows.empty()) {
      row.order_l1 = row.order_linf = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double ratio = std::log2(static_cast<double>(row.n) /
                                     static_cast<double>(rows.back().n));
      row.order_l1 = std::log2(rows.back().l1 / row.l1) / ratio;
      row.order_linf = std::log2(rows.back().linf / row.linf) / ratio;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {
std::string order_cell(double v) {
  if (std::isnan(v)) return "--";
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}
}  // namespace

void write_convergence_text(const std::vector<ConvergenceRow>& rows,
                            std::ostream& out) {
  out << std::left << std::setw(12) << "N" << std::setw(14) << "L1"
      << std::setw(10) << "order" << std::setw(14) << "Linf" << std::setw(10)
      << "order" << '\n';
  for (const ConvergenceRow& r : rows) {
    std::ostringstream n;
    n << r.n << "x" << r.n;
    out << std::left << std::setw(12) << n.str() << std::scientific
        << std::setprecision(3) << std::setw(14) << r.l1 << std::setw(10)
        << order_cell(r.order_l1) << std::setw(14) << r.linf << std::setw(10)
        << order_cell(r.order_linf) << '\n';
  }
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           std::ostream& out) {
  out << "n,l1,order_l1,linf,order_linf\n" << std::setprecision(17);
  for (const ConvergenceRow& r : rows) {
    out << r.n << ',' << r.l1 << ',' << order_cell(r.order_l1) << ','
        << r.linf << ',' << order_cell(r.order_linf) << '\n';
  }
}

}  // namespace ctmhd
