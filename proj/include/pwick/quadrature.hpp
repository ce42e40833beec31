#pragma once

#include <vector>

#include "pwick/common.hpp"

namespace pwick {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre rule on [-1,1]; nodes by Newton iteration on P_n.
QuadRule gauss_legendre(int n);

// Gauss-Legendre mapped to [a,b].
QuadRule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre: [a,b] split into panels of length <= max_panel,
// n-point rule on each.  The integrands here are analytic in a strip of
// half-width ~m around the real axis, so short panels keep the per-panel
// convergence geometric regardless of the total interval length.
QuadRule composite_gauss_legendre(int n, double a, double b, double max_panel);

template <typename F>
auto integrate(const QuadRule& q, F&& f) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  R acc{};
  for (std::size_t i = 0; i < q.nodes.size(); ++i) acc += q.weights[i] * f(q.nodes[i]);
  return acc;
}

// Adaptive Simpson on [a,b]; used only as an independent oracle in tests and
// bound sweeps, never on the production evaluation path.  The interval is
// pre-split so oscillatory integrands cannot fool the first error estimate.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 40,
                        int initial_panels = 64) {
  auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  struct Rec {
    double a, b, whole;
    int depth;
  };
  std::vector<Rec> stack;
  const double h = (b - a) / initial_panels;
  for (int p = 0; p < initial_panels; ++p) {
    const double lo = a + p * h, hi = a + (p + 1) * h;
    stack.push_back({lo, hi, simpson(lo, hi), depth});
  }
  const double panel_tol = tol / initial_panels;
  double total = 0.0;
  while (!stack.empty()) {
    Rec r = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (r.a + r.b);
    const double left = simpson(r.a, mid);
    const double right = simpson(mid, r.b);
    const double err = left + right - r.whole;
    if (r.depth <= 0 || std::abs(err) < 15.0 * panel_tol) {
      total += left + right + err / 15.0;
    } else {
      stack.push_back({r.a, mid, left, r.depth - 1});
      stack.push_back({mid, r.b, right, r.depth - 1});
    }
  }
  return total;
}

}  // namespace pwick
