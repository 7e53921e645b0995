#include "ctmhd/exp_quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ctmhd {

void exp_moments(double nu, int qmax, double* m) {
  if (!(nu > 0.0)) throw std::invalid_argument("exp_moments: nu must be positive");
  if (nu >= 1.0) {
    // The upward recurrence amplifies round-off by ~q!/nu^q when q > nu;
    // extended precision absorbs that for the q <= 7 we ever need.
    const long double lnu = nu;
    const long double e = std::exp(-lnu);
    long double prev = 1.0L - e;
    m[0] = static_cast<double>(prev);
    long double sign = 1.0L;  // -(-1)^q, q = 1
    for (int q = 1; q <= qmax; ++q) {
      prev = sign * e - (q / lnu) * prev;
      m[q] = static_cast<double>(prev);
      sign = -sign;
    }
    return;
  }
  // m_q = (-1)^q sum_{n>=0} (-1)^n nu^{n+1} / (n! (q+n+1))
  for (int q = 0; q <= qmax; ++q) {
    long double sum = 0.0L, term = nu;  // n = 0 term: nu / (q+1)
    long double fact = 1.0L;
    for (int n = 0; n < 60; ++n) {
      const long double contrib = term / (fact * (q + n + 1));
      sum += (n % 2 == 0) ? contrib : -contrib;
      term *= nu;
      fact *= (n + 1);
      if (contrib < 1e-19L * std::abs(sum) + 1e-300L) break;
    }
    m[q] = static_cast<double>((q % 2 == 0) ? sum : -sum);
  }
}

bool solve_dense(int n, double* A, double* b) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
    if (std::abs(A[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const double inv = 1.0 / A[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r * n + c] * b[c];
    b[r] = s / A[r * n + r];
  }
  return true;
}

void exp_cell_weights(double nu, const int* offs, int n, double* w) {
  double m[8];
  exp_moments(nu, n - 1, m);
  double A[64];
  // row q: sum_s offs[s]^q w_s = m_q
  for (int s = 0; s < n; ++s) A[s] = 1.0;
  for (int q = 1; q < n; ++q)
    for (int s = 0; s < n; ++s) A[q * n + s] = A[(q - 1) * n + s] * offs[s];
  for (int q = 0; q < n; ++q) w[q] = m[q];
  if (!solve_dense(n, A, w))
    throw std::runtime_error("exp_cell_weights: singular moment system");
}

QuadratureTable build_quadrature_table(double nu) {
  QuadratureTable t;
  t.nu = nu;
  int offs[6];
  for (int s = -2; s <= 2; ++s) {
    for (int j = 0; j < 6; ++j) offs[j] = -3 + s + j;
    exp_cell_weights(nu, offs, 6, t.big_shifted[s + 2]);
  }
  std::memcpy(t.big, t.big_shifted[2], sizeof t.big);
  for (int r = 0; r < 3; ++r) {
    for (int j = 0; j < 4; ++j) offs[j] = -3 + r + j;
    exp_cell_weights(nu, offs, 4, t.small[r]);
  }
  // Linear combination weights from the two single-coverage corner nodes;
  // the remaining four node equations are a consistency check on the build.
  t.d[0] = t.big[0] / t.small[0][0];
  t.d[2] = t.big[5] / t.small[2][3];
  t.d[1] = 1.0 - t.d[0] - t.d[2];
  double scale = 0.0;
  for (int j = 0; j < 6; ++j) scale = std::max(scale, std::abs(t.big[j]));
  double res = 0.0;
  for (int node = 0; node < 6; ++node) {
    double s = t.big[node];
    for (int r = 0; r < 3; ++r) {
      const int k = node - r;
      if (k >= 0 && k < 4) s -= t.d[r] * t.small[r][k];
    }
    res = std::max(res, std::abs(s));
  }
  t.d_residual = res / scale;
  t.d_negative = t.d[0] < 0.0 || t.d[1] < 0.0 || t.d[2] < 0.0;
  return t;
}

SmoothnessReport smoothness_indicators(const double* v) {
  SmoothnessReport s;
  const double c13 = 13.0 / 12.0;
  {
    const double a = -v[0] + 3.0 * v[1] - 3.0 * v[2] + v[3];
    const double b = v[0] - 5.0 * v[1] + 7.0 * v[2] - 3.0 * v[3];
    s.beta[0] = c13 * a * a + 0.25 * b * b;
  }
  {
    const double a = -v[1] + 3.0 * v[2] - 3.0 * v[3] + v[4];
    const double b = v[1] - v[2] - v[3] + v[4];
    s.beta[1] = c13 * a * a + 0.25 * b * b;
  }
  {
    const double a = -v[2] + 3.0 * v[3] - 3.0 * v[4] + v[5];
    const double b = -3.0 * v[2] + 7.0 * v[3] - 5.0 * v[4] + v[5];
    s.beta[2] = c13 * a * a + 0.25 * b * b;
  }
  s.tau5 = std::abs(s.beta[0] - s.beta[2]);
  const double eps = 1e-6;
  const double lo = std::min(s.beta[0], s.beta[2]);
  const double hi = std::max(s.beta[0], s.beta[2]);
  const double rmax = s.tau5 / (eps + lo);
  const double rmin = s.tau5 / (eps + hi);
  s.xi = (1.0 + rmin * rmin) / (1.0 + rmax * rmax);
  return s;
}

void wenoz_weights(const QuadratureTable& t, const SmoothnessReport& s,
                   double* omega, long* clamp_count) {
  const double eps = 1e-6;
  double sum = 0.0;
  for (int r = 0; r < 3; ++r) {
    double w = t.d[r] * (1.0 + s.tau5 / (eps + s.beta[r]));
    if (t.d_negative && w < 0.0) {
      w = 0.0;
      if (clamp_count) ++*clamp_count;
    }
    omega[r] = w;
    sum += w;
  }
  const double inv = 1.0 / sum;
  for (int r = 0; r < 3; ++r) omega[r] *= inv;
}

namespace {

inline int wrap(int j, int N) {
  j %= N;
  return j < 0 ? j + N : j;
}

// Gather v at offsets o0..o0+len-1 around cell node i with periodic wrap.
inline void gather(const double* v, int N, int i, int o0, int len, double* out) {
  for (int j = 0; j < len; ++j) out[j] = v[wrap(i + o0 + j, N)];
}

}  // namespace

void cell_integrals(const double* v, int N, const QuadratureTable& t,
                    bool periodic, double* J, double* xi, long* clamp_count) {
  J[0] = 0.0;
  double w6[6], omega[3];
  if (periodic) {
    for (int i = 1; i <= N; ++i) {
      gather(v, N, i, -3, 6, w6);
      const SmoothnessReport rep = smoothness_indicators(w6);
      xi[i] = rep.xi;
      wenoz_weights(t, rep, omega, clamp_count);
      double sum = 0.0;
      for (int r = 0; r < 3; ++r) {
        double jr = 0.0;
        for (int k = 0; k < 4; ++k) jr += t.small[r][k] * w6[r + k];
        sum += omega[r] * jr;
      }
      J[i] = sum;
    }
    xi[0] = xi[N];
    return;
  }
  for (int i = 1; i <= N; ++i) {
    const int start = std::clamp(i - 3, 0, N - 5);
    const int s = start - (i - 3);  // 0 interior, ±1, ±2 at the ends
    if (s == 0) {
      for (int j = 0; j < 6; ++j) w6[j] = v[start + j];
      const SmoothnessReport rep = smoothness_indicators(w6);
      xi[i] = rep.xi;
      wenoz_weights(t, rep, omega, clamp_count);
      double sum = 0.0;
      for (int r = 0; r < 3; ++r) {
        double jr = 0.0;
        for (int k = 0; k < 4; ++k) jr += t.small[r][k] * w6[r + k];
        sum += omega[r] * jr;
      }
      J[i] = sum;
    } else {
      const double* bw = t.big_shifted[s + 2];
      double sum = 0.0;
      for (int j = 0; j < 6; ++j) sum += bw[j] * v[start + j];
      J[i] = sum;
      xi[i] = 1.0;
    }
  }
  xi[0] = xi[1];
}

void linear_cell_integrals(const double* v, int N, const QuadratureTable& t,
                           bool periodic, double* J) {
  J[0] = 0.0;
  if (periodic) {
    double w6[6];
    for (int i = 1; i <= N; ++i) {
      gather(v, N, i, -3, 6, w6);
      double sum = 0.0;
      for (int j = 0; j < 6; ++j) sum += t.big[j] * w6[j];
      J[i] = sum;
    }
    return;
  }
  for (int i = 1; i <= N; ++i) {
    const int start = std::clamp(i - 3, 0, N - 5);
    const double* bw = t.big_shifted[start - (i - 3) + 2];
    double sum = 0.0;
    for (int j = 0; j < 6; ++j) sum += bw[j] * v[start + j];
    J[i] = sum;
  }
}

void filters(const double* xi, int N, bool periodic, double* sigma) {
  sigma[0] = periodic ? std::min(xi[N - 1], xi[0]) : xi[0];
  for (int i = 1; i <= N; ++i) sigma[i] = std::min(xi[i - 1], xi[i]);
  if (periodic) sigma[N] = sigma[0];
}

}  // namespace ctmhd
