#pragma once
// Strong-stability-preserving explicit Runge-Kutta steps (orders 1-3) as
// convex combinations of forward-Euler updates on a flat dof vector. The
// optional hook runs after every stage state is formed — intermediate
// convex combinations included — so pointwise floors see each state the
// right-hand side will see.

#include <functional>
#include <stdexcept>
#include <vector>

namespace ctmhd {

using RhsFn = std::function<void(const std::vector<double>&, double,
                                 std::vector<double>&)>;
using StageHook = std::function<void(std::vector<double>&, double)>;

inline void ssp_rk_step(int order, double t, double dt, std::vector<double>& y,
                        const RhsFn& rhs, const StageHook& post = {}) {
  const std::size_t n = y.size();
  std::vector<double> f(n), y1(n), y2(n);
  auto euler = [&](const std::vector<double>& src, double tloc,
                   std::vector<double>& dst) {
    rhs(src, tloc, f);
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] + dt * f[i];
    if (post) post(dst, tloc + dt);
  };
  switch (order) {
    case 1:
      euler(y, t, y1);
      y.swap(y1);
      return;
    case 2:
      euler(y, t, y1);
      euler(y1, t + dt, y2);
      for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (y[i] + y2[i]);
      if (post) post(y, t + dt);
      return;
    case 3:
      euler(y, t, y1);
      euler(y1, t + dt, y2);
      for (std::size_t i = 0; i < n; ++i)
        y2[i] = 0.75 * y[i] + 0.25 * y2[i];
      if (post) post(y2, t + 0.5 * dt);
      euler(y2, t + 0.5 * dt, y1);
      for (std::size_t i = 0; i < n; ++i)
        y[i] = y[i] / 3.0 + (2.0 / 3.0) * y1[i];
      if (post) post(y, t + dt);
      return;
    default:
      throw std::invalid_argument("ssp_rk_step: order must be 1, 2 or 3");
  }
}

}  // namespace ctmhd
