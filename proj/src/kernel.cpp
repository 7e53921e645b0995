#include "ctmhd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctmhd {

double beta_stability_max(int order_k) {
  switch (order_k) {
    case 1: return 2.0;
    case 2: return 1.0;
    case 3: return 1.243;
  }
  throw std::invalid_argument("beta_stability_max: order_k must be 1, 2 or 3");
}

KernelParams make_kernel_params(double beta, int order_k, double c_max,
                                double dt, const Line& line, int dims,
                                bool enforce_beta_bound) {
  if (order_k < 1 || order_k > 3)
    throw std::invalid_argument("make_kernel_params: order_k must be 1, 2 or 3");
  if (!(beta > 0.0)) throw std::invalid_argument("make_kernel_params: beta <= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("make_kernel_params: dt <= 0");
  if (!(line.dx > 0.0) || line.n_cells < 8)
    throw std::invalid_argument("make_kernel_params: need dx > 0 and at least 8 cells");
  if (c_max < 0.0) throw std::invalid_argument("make_kernel_params: c_max < 0");
  const double bound = beta_stability_max(order_k) / dims;
  if (enforce_beta_bound && beta > bound * (1.0 + 1e-12))
    throw std::invalid_argument("make_kernel_params: beta above the stability bound");
  KernelParams p;
  p.beta = beta;
  p.order_k = order_k;
  p.dt = dt;
  p.dims = dims;
  const double length = line.n_cells * line.dx;
  p.c_max = std::max(c_max, 1e-8 * length / dt);
  p.alpha = beta / (p.c_max * dt);
  p.nu = p.alpha * line.dx;
  p.mu = std::exp(-p.alpha * length);
  return p;
}

void LineWorkspace::resize(int N) {
  const std::size_t n = static_cast<std::size_t>(N) + 1;
  for (auto* buf : {&decay, &J, &I, &xi, &sigma, &w1, &in2, &w2, &in3, &w3,
                    &Iaux, &d0, &rv, &rout})
    buf->assign(n, 0.0);
}

void accumulate(const double* J, int N, double decay1, double* I) {
  I[0] = 0.0;
  for (int i = 1; i <= N; ++i) I[i] = decay1 * I[i - 1] + J[i];
}

void defect_from_integrals(const double* u, const double* I, int N,
                           const double* decay, double coef, double* out) {
  for (int i = 0; i <= N; ++i) out[i] = u[i] - I[i] - coef * decay[i];
}

namespace {

void build_decay(int N, double nu, std::vector<double>& decay) {
  const double e1 = std::exp(-nu);
  decay[0] = 1.0;
  for (int i = 1; i <= N; ++i) decay[i] = decay[i - 1] * e1;
}

// Left-orientation engine producing the minus-side biased derivative of
// u[0..N]. left_derivs are the imposed endpoint derivatives at the line's
// low end (already mirrored by the caller for the plus side).
void engine_minus(const double* u, int N, const KernelParams& p, bool periodic,
                  const std::array<double, 3>& left_derivs,
                  const QuadratureTable& table, LineWorkspace& ws, double* out) {
  const int k = p.order_k;
  const double alpha = p.alpha;
  const double mu = p.mu;
  const double e1 = std::exp(-p.nu);
  const double om = -std::expm1(-p.nu * N);  // 1 - mu
  build_decay(N, p.nu, ws.decay);
  const double* decay = ws.decay.data();

  cell_integrals(u, N, table, periodic, ws.J.data(), ws.xi.data(),
                 &ws.clamp_activations);
  accumulate(ws.J.data(), N, e1, ws.I.data());
  const double coef1 =
      periodic ? ws.I[N] / om : u[0] - left_derivs[0] / alpha;
  defect_from_integrals(u, ws.I.data(), N, decay, coef1, ws.w1.data());
  if (k == 1) {
    for (int i = 0; i <= N; ++i) out[i] = alpha * ws.w1[i];
    return;
  }

  // input of the second application; non-periodic lines subtract the
  // boundary-derivative exponential so the imposed value there is 0
  double corr2 = 0.0;
  if (!periodic) {
    double pow_ma = 1.0;  // (-1/alpha)^m
    for (int m = 2; m <= k; ++m) {
      pow_ma = (m == 2) ? 1.0 / (alpha * alpha) : -pow_ma / alpha;
      corr2 += pow_ma * left_derivs[m - 1];
    }
  }
  if (periodic) {
    std::copy(ws.w1.begin(), ws.w1.end(), ws.in2.begin());
  } else {
    for (int i = 0; i <= N; ++i) ws.in2[i] = ws.w1[i] - corr2 * decay[i];
  }
  linear_cell_integrals(ws.in2.data(), N, table, periodic, ws.J.data());
  accumulate(ws.J.data(), N, e1, ws.I.data());
  const double coef2 = periodic ? ws.I[N] / om : ws.in2[0];
  defect_from_integrals(ws.in2.data(), ws.I.data(), N, decay, coef2, ws.w2.data());
  if (k == 2) {
    for (int i = 0; i <= N; ++i) out[i] = alpha * (ws.w1[i] + ws.w2[i]);
    return;
  }

  double corr3 = 0.0;
  if (!periodic) {
    double pow_ma = 1.0;
    for (int m = 2; m <= k; ++m) {
      pow_ma = (m == 2) ? 1.0 / (alpha * alpha) : -pow_ma / alpha;
      corr3 += (m - 1) * pow_ma * left_derivs[m - 1];
    }
  }
  if (periodic) {
    std::copy(ws.w2.begin(), ws.w2.end(), ws.in3.begin());
  } else {
    for (int i = 0; i <= N; ++i) ws.in3[i] = ws.w2[i] + corr3 * decay[i];
  }
  linear_cell_integrals(ws.in3.data(), N, table, periodic, ws.J.data());
  accumulate(ws.J.data(), N, e1, ws.I.data());
  const double coef3 = periodic ? ws.I[N] / om : ws.in3[0];
  defect_from_integrals(ws.in3.data(), ws.I.data(), N, decay, coef3, ws.w3.data());

  // two-sided defect of the third-stage input; right integrals via reversal
  for (int i = 0; i <= N; ++i) ws.rv[i] = ws.in3[N - i];
  linear_cell_integrals(ws.rv.data(), N, table, periodic, ws.rout.data());
  accumulate(ws.rout.data(), N, e1, ws.Iaux.data());
  // ws.Iaux reversed holds I^R of in3
  const double I0a = 0.5 * ws.Iaux[N];
  const double I0b = 0.5 * ws.I[N];
  double A0, B0;
  if (periodic) {
    A0 = I0b / om;
    B0 = I0a / om;
  } else {
    const double Qa = I0a - ws.in3[0];
    const double Qb = I0b - ws.in3[N];
    const double den = om * (1.0 + mu);  // 1 - mu^2
    A0 = (mu * Qb - Qa) / den;
    B0 = (mu * Qa - Qb) / den;
  }
  for (int i = 0; i <= N; ++i) {
    ws.d0[i] = ws.in3[i] - 0.5 * (ws.I[i] + ws.Iaux[N - i]) - A0 * decay[i] -
               B0 * decay[N - i];
  }
  filters(ws.xi.data(), N, periodic, ws.sigma.data());
  for (int i = 0; i <= N; ++i)
    out[i] = alpha * (ws.w1[i] + ws.w2[i] + ws.sigma[i] * ws.w3[i] - ws.d0[i]);
}

inline std::array<double, 3> mirror_derivs(const std::array<double, 3>& d) {
  return {-d[0], d[1], -d[2]};
}

}  // namespace

void apply_defect(const Line& line, const KernelParams& p,
                  const BoundaryClosure& closure, Side dir,
                  const QuadratureTable& table, LineWorkspace& ws,
                  double* out) {
  const int N = line.n_cells;
  ws.resize(N);
  const bool periodic = closure.kind == ClosureKind::Periodic;
  const double e1 = std::exp(-p.nu);
  const double om = -std::expm1(-p.nu * N);
  build_decay(N, p.nu, ws.decay);
  if (dir == Side::Minus) {
    cell_integrals(line.v, N, table, periodic, ws.J.data(), ws.xi.data(),
                   &ws.clamp_activations);
    accumulate(ws.J.data(), N, e1, ws.I.data());
    const double coef = periodic ? ws.I[N] / om
                                 : line.v[0] - closure.left_derivs[0] / p.alpha;
    defect_from_integrals(line.v, ws.I.data(), N, ws.decay.data(), coef, out);
    return;
  }
  for (int i = 0; i <= N; ++i) ws.rv[i] = line.v[N - i];
  cell_integrals(ws.rv.data(), N, table, periodic, ws.J.data(), ws.xi.data(),
                 &ws.clamp_activations);
  accumulate(ws.J.data(), N, e1, ws.I.data());
  const double coef = periodic ? ws.I[N] / om
                               : ws.rv[0] + closure.right_derivs[0] / p.alpha;
  defect_from_integrals(ws.rv.data(), ws.I.data(), N, ws.decay.data(), coef,
                        ws.rout.data());
  for (int i = 0; i <= N; ++i) out[i] = ws.rout[N - i];
}

void apply_two_sided_defect(const Line& line, const KernelParams& p,
                            const BoundaryClosure& closure,
                            const QuadratureTable& table, LineWorkspace& ws,
                            double* out) {
  const int N = line.n_cells;
  ws.resize(N);
  const bool periodic = closure.kind == ClosureKind::Periodic;
  const double e1 = std::exp(-p.nu);
  const double om = -std::expm1(-p.nu * N);
  build_decay(N, p.nu, ws.decay);
  linear_cell_integrals(line.v, N, table, periodic, ws.J.data());
  accumulate(ws.J.data(), N, e1, ws.I.data());
  for (int i = 0; i <= N; ++i) ws.rv[i] = line.v[N - i];
  linear_cell_integrals(ws.rv.data(), N, table, periodic, ws.rout.data());
  accumulate(ws.rout.data(), N, e1, ws.Iaux.data());
  const double I0a = 0.5 * ws.Iaux[N];
  const double I0b = 0.5 * ws.I[N];
  double A0, B0;
  if (periodic) {
    A0 = I0b / om;
    B0 = I0a / om;
  } else {
    const double Qa = I0a - line.v[0];
    const double Qb = I0b - line.v[N];
    const double den = om * (1.0 + p.mu);
    A0 = (p.mu * Qb - Qa) / den;
    B0 = (p.mu * Qa - Qb) / den;
  }
  for (int i = 0; i <= N; ++i)
    out[i] = line.v[i] - 0.5 * (ws.I[i] + ws.Iaux[N - i]) - A0 * ws.decay[i] -
             B0 * ws.decay[N - i];
}

void biased_derivative(const Line& line, const KernelParams& p,
                       const BoundaryClosure& closure, Side side,
                       const QuadratureTable& table, LineWorkspace& ws,
                       double* out) {
  const int N = line.n_cells;
  ws.resize(N);
  const bool periodic = closure.kind == ClosureKind::Periodic;
  if (side == Side::Minus) {
    engine_minus(line.v, N, p, periodic, closure.left_derivs, table, ws, out);
    return;
  }
  std::vector<double> rev(N + 1), res(N + 1);
  for (int i = 0; i <= N; ++i) rev[i] = line.v[N - i];
  engine_minus(rev.data(), N, p, periodic, mirror_derivs(closure.right_derivs),
               table, ws, res.data());
  for (int i = 0; i <= N; ++i) out[i] = -res[N - i];
}

void extrapolate_edge_derivatives(const Line& line, int order_k,
                                  std::array<double, 3>& left,
                                  std::array<double, 3>& right) {
  const int n = order_k + 3;  // nodes in the fit, degree order_k + 2
  if (line.n_cells + 1 < n)
    throw std::invalid_argument("extrapolate_edge_derivatives: line too short");
  double A[36], c[6];
  const double fact[4] = {1.0, 1.0, 2.0, 6.0};
  left.fill(0.0);
  right.fill(0.0);
  // p(s) = sum_q c_q s^q through (s, v[s]), s = 0..n-1
  for (int s = 0; s < n; ++s) {
    A[s * n] = 1.0;
    for (int q = 1; q < n; ++q) A[s * n + q] = A[s * n + q - 1] * s;
    c[s] = line.v[s];
  }
  if (!solve_dense(n, A, c))
    throw std::runtime_error("extrapolate_edge_derivatives: singular fit");
  double dxm = 1.0;
  for (int m = 1; m <= order_k; ++m) {
    dxm *= line.dx;
    left[m - 1] = fact[m] * c[m] / dxm;
  }
  for (int s = 0; s < n; ++s) {
    A[s * n] = 1.0;
    for (int q = 1; q < n; ++q) A[s * n + q] = A[s * n + q - 1] * s;
    c[s] = line.v[line.n_cells - s];
  }
  if (!solve_dense(n, A, c))
    throw std::runtime_error("extrapolate_edge_derivatives: singular fit");
  dxm = 1.0;
  for (int m = 1; m <= order_k; ++m) {
    dxm *= -line.dx;  // d/dx = -(1/dx) d/ds at the high end
    right[m - 1] = fact[m] * c[m] / dxm;
  }
}

BoundaryClosure extrapolated_closure(const Line& line, int order_k) {
  BoundaryClosure c;
  c.kind = ClosureKind::Extrapolated;
  extrapolate_edge_derivatives(line, order_k, c.left_derivs, c.right_derivs);
  return c;
}

}  // namespace ctmhd
