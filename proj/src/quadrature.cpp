#include "pwick/quadrature.hpp"

#include <map>
#include <mutex>

namespace pwick {

namespace {

QuadRule make_gauss_legendre(int n) {
  QuadRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x).
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.weights[i] = w;
    q.nodes[n - 1 - i] = x;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

}  // namespace

QuadRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: order must be >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre(int n, double a, double b) {
  QuadRule base = gauss_legendre(n);
  QuadRule q;
  q.nodes.resize(base.size());
  q.weights.resize(base.size());
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < base.size(); ++i) {
    q.nodes[i] = mid + half * base.nodes[i];
    q.weights[i] = half * base.weights[i];
  }
  return q;
}

QuadRule composite_gauss_legendre(int n, double a, double b, double max_panel) {
  require(b > a, "composite_gauss_legendre: empty interval");
  require(max_panel > 0.0, "composite_gauss_legendre: panel length must be positive");
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double h = (b - a) / panels;
  QuadRule q;
  q.nodes.reserve(static_cast<std::size_t>(panels) * n);
  q.weights.reserve(static_cast<std::size_t>(panels) * n);
  for (int p = 0; p < panels; ++p) {
    QuadRule panel = gauss_legendre(n, a + p * h, a + (p + 1) * h);
    q.nodes.insert(q.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    q.weights.insert(q.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return q;
}

}  // namespace pwick
