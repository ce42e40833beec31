#include "pwick/kernels.hpp"

#include <algorithm>

namespace pwick::kernels {

using symbols::BoostSpec;

complexd time_profile(double t, double mu, double delta) {
  return std::exp(-std::abs(t) * mu + t * delta) / (2.0 * mu);
}

namespace {

double max_abs_space(const GridSpec& g) {
  double m = 0.0;
  for (const auto& p : g.space_points) {
    for (double c : p) m = std::max(m, std::abs(c));
  }
  return m;
}

// Momentum cutoff from the exponential tail e^{-t_ref (mu(K) - |v| K)}.
double derive_cutoff(const BoostSpec& b, double t_ref, double tail_target) {
  const double v = b.speed();
  const double rate = (1.0 - v);
  const double k = std::log(1.0 / tail_target) / std::max(1e-12, t_ref * rate);
  return std::max(10.0 * b.mass, 1.1 * k);
}

double tail_estimate_at(const BoostSpec& b, double t_ref, double cutoff) {
  const double mu_k = std::hypot(cutoff, b.mass);
  return std::exp(-t_ref * (mu_k - b.speed() * cutoff));
}

// Quadrature rule along one momentum axis, panel length tuned to the spatial
// oscillation e^{i k x} and the strip of analyticity (half-width m).
QuadRule momentum_rule(const GridSpec& g, const BoostSpec& b, double cutoff) {
  const double xmax = max_abs_space(g);
  double panel = std::min(g.quad.panel_length * std::max(1.0, b.mass), 8.0 / (1.0 + xmax));
  return composite_gauss_legendre(g.quad.nodes_per_panel, -cutoff, cutoff, panel);
}

// Tensor evaluation of (2 pi)^{-(d-1)} Int dk F(k) e^{i k.x} over d-1 axes.
// d = 2 is the hot path; higher d recurses (spot-check scale only).
struct TensorIntegrator {
  const QuadRule& rule;
  int axes;

  template <typename F>
  complexd eval(F&& f, const std::vector<double>& x) const {
    std::vector<double> k(axes, 0.0);
    const complexd raw = recurse(f, x, k, 0);
    return raw / std::pow(kTwoPi, axes);
  }

 private:
  template <typename F>
  complexd recurse(F&& f, const std::vector<double>& x, std::vector<double>& k, int axis) const {
    complexd acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.size(); ++i) {
      k[axis] = rule.nodes[i];
      complexd inner;
      if (axis + 1 == axes) {
        double phase = 0.0;
        for (int a = 0; a < axes; ++a) phase += k[a] * x[a];
        inner = f(k) * std::polar(1.0, phase);
      } else {
        inner = recurse(f, x, k, axis + 1);
      }
      acc += rule.weights[i] * inner;
    }
    return acc;
  }
};

}  // namespace

SampledKernel kernel_continuum(const GridSpec& grid, const BoostSpec& b) {
  grid.validate(b.dim);
  require(grid.geometry == Geometry::flat, "kernel_continuum: grid must be flat");

  double t_ref = std::numeric_limits<double>::infinity();
  for (double t : grid.time_points) t_ref = std::min(t_ref, std::abs(t));
  if (t_ref == 0.0) {
    require(grid.quad.momentum_cutoff > 0.0,
            "kernel_continuum: coincident-time evaluation needs an explicit momentum cutoff "
            "(UV-divergent without one)");
  }
  const double cutoff = grid.quad.momentum_cutoff > 0.0
                            ? grid.quad.momentum_cutoff
                            : derive_cutoff(b, t_ref, grid.quad.tail_target);

  SampledKernel out;
  out.grid = grid;
  out.kind = KernelKind::D;
  out.boost = b;
  out.tail_estimate = tail_estimate_at(b, t_ref, cutoff);
  out.tail_ok = out.tail_estimate <= grid.quad.tail_target;
  out.values.assign(grid.time_points.size(),
                    std::vector<complexd>(grid.space_points.size()));

  const QuadRule rule = momentum_rule(grid, b, cutoff);
  const int axes = b.dim - 1;

  if (axes == 1) {
    // Precompute the per-node time factor once per t, then sweep x.
    const std::size_t nq = rule.size();
    std::vector<double> mu(nq), delta(nq);
    for (std::size_t i = 0; i < nq; ++i) {
      mu[i] = symbols::mu1(rule.nodes[i], b);
      delta[i] = symbols::delta1(rule.nodes[i], b);
    }
    for (std::size_t it = 0; it < grid.time_points.size(); ++it) {
      const double t = grid.time_points[it];
      std::vector<complexd> w(nq);
      for (std::size_t i = 0; i < nq; ++i) {
        w[i] = rule.weights[i] * time_profile(t, mu[i], delta[i]);
      }
      for (std::size_t ix = 0; ix < grid.space_points.size(); ++ix) {
        const double x = grid.space_points[ix][0];
        complexd acc{0.0, 0.0};
        for (std::size_t i = 0; i < nq; ++i) acc += w[i] * std::polar(1.0, rule.nodes[i] * x);
        out.values[it][ix] = acc / kTwoPi;
      }
    }
  } else {
    TensorIntegrator ti{rule, axes};
    for (std::size_t it = 0; it < grid.time_points.size(); ++it) {
      const double t = grid.time_points[it];
      auto f = [&](const std::vector<double>& k) {
        return time_profile(t, symbols::mu_of(k, b), symbols::delta_of(k, b));
      };
      for (std::size_t ix = 0; ix < grid.space_points.size(); ++ix) {
        out.values[it][ix] = ti.eval(f, grid.space_points[ix]);
      }
    }
  }
  return out;
}

SampledKernel reflected_kernel(const GridSpec& grid, const BoostSpec& b, KernelKind kind) {
  grid.validate(b.dim);
  require(kind != KernelKind::D, "reflected_kernel: use kernel_continuum for kind D");

  SampledKernel out;
  out.grid = grid;
  out.kind = kind;
  out.boost = b;
  out.values.assign(grid.time_points.size(),
                    std::vector<complexd>(grid.space_points.size()));

  if (kind == KernelKind::thetaD || kind == KernelKind::Dtheta) {
    // Kernel of e^{-(t+t') mu_pm}/(2 mu); first grid axis holds u = t+t'.
    for (double u : grid.time_points) {
      require(u >= 0.0, "reflected_kernel: t+t' must lie in the positive half-space");
    }
    const int sign = (kind == KernelKind::thetaD) ? +1 : -1;
    const double u_ref = grid.time_points.front();
    if (u_ref == 0.0) {
      require(grid.quad.momentum_cutoff > 0.0,
              "reflected_kernel: u = 0 evaluation needs an explicit momentum cutoff");
    }
    const double cutoff = grid.quad.momentum_cutoff > 0.0
                              ? grid.quad.momentum_cutoff
                              : derive_cutoff(b, u_ref, grid.quad.tail_target);
    out.tail_estimate = tail_estimate_at(b, u_ref, cutoff);
    out.tail_ok = out.tail_estimate <= grid.quad.tail_target;
    const QuadRule rule = momentum_rule(grid, b, cutoff);
    const int axes = b.dim - 1;
    TensorIntegrator ti{rule, axes};
    for (std::size_t iu = 0; iu < grid.time_points.size(); ++iu) {
      const double u = grid.time_points[iu];
      auto f = [&](const std::vector<double>& k) -> complexd {
        const double mu = symbols::mu_of(k, b);
        const double mpm = mu + sign * symbols::delta_of(k, b);
        return std::exp(-u * mpm) / (2.0 * mu);
      };
      for (std::size_t ix = 0; ix < grid.space_points.size(); ++ix) {
        out.values[iu][ix] = ti.eval(f, grid.space_points[ix]);
      }
    }
    return out;
  }

  // Spatial reflections, d = 2: kernel of e^{k_-(E) w}/(2 nu(E)) (piD) or
  // e^{-k_+(E) w}/(2 nu(E)) (Dpi) against the transverse time difference.
  require(b.dim == 2, "reflected_kernel: piD/Dpi implemented for d = 2");
  for (const auto& p : grid.space_points) {
    require(p[0] >= 0.0, "reflected_kernel: x1 + x1' must lie in the positive half-space");
  }
  double w_ref = std::numeric_limits<double>::infinity();
  for (const auto& p : grid.space_points) w_ref = std::min(w_ref, p[0]);
  if (w_ref == 0.0) {
    require(grid.quad.momentum_cutoff > 0.0,
            "reflected_kernel: w = 0 evaluation needs an explicit energy cutoff");
  }
  // Decay rate in E of e^{k_- w} is at least (1-|v|) cosh^2(eta) |E| w.
  const double rate = (1.0 - b.speed()) * b.cosh_eta() * b.cosh_eta();
  const double cutoff =
      grid.quad.momentum_cutoff > 0.0
          ? grid.quad.momentum_cutoff
          : std::max(10.0 * b.mass, 1.1 * std::log(1.0 / grid.quad.tail_target) /
                                        std::max(1e-12, w_ref * rate));
  out.tail_estimate = std::exp(-w_ref * rate * cutoff);
  out.tail_ok = out.tail_estimate <= grid.quad.tail_target;

  GridSpec tuned = grid;  // panel tuning sees the transverse oscillation e^{iE tau}
  tuned.space_points.clear();
  for (double tau : grid.time_points) tuned.space_points.push_back({tau});
  std::sort(tuned.space_points.begin(), tuned.space_points.end());
  const QuadRule rule = momentum_rule(tuned, b, cutoff);

  for (std::size_t itau = 0; itau < grid.time_points.size(); ++itau) {
    const double tau = grid.time_points[itau];
    for (std::size_t iw = 0; iw < grid.space_points.size(); ++iw) {
      const double w = grid.space_points[iw][0];
      complexd acc{0.0, 0.0};
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double e = rule.nodes[i];
        const auto sb = symbols::spatial_symbols(e, {}, b);
        const double expo = (kind == KernelKind::piD) ? sb.k_minus * w : -sb.k_plus * w;
        acc += rule.weights[i] * std::exp(expo) / (2.0 * sb.nu) * std::polar(1.0, e * tau);
      }
      out.values[itau][iw] = acc / kTwoPi;
    }
  }
  return out;
}

namespace {

std::ptrdiff_t find_value(const std::vector<double>& v, double x) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i] - x) < 1e-12 * (1.0 + std::abs(x))) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

std::ptrdiff_t find_point(const std::vector<std::vector<double>>& pts,
                          const std::vector<double>& p) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double dev = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) dev = std::max(dev, std::abs(pts[i][a] - p[a]));
    if (dev < 1e-12) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

}  // namespace

SymmetryReport verify_kernel_symmetries(const SampledKernel& kern) {
  require(kern.kind == KernelKind::D, "verify_kernel_symmetries: expects kind D");
  const auto& g = kern.grid;
  SymmetryReport rep;
  const auto& n = kern.boost.direction;
  for (std::size_t it = 0; it < g.time_points.size(); ++it) {
    for (std::size_t ix = 0; ix < g.space_points.size(); ++ix) {
      const double t = g.time_points[it];
      const auto& x = g.space_points[ix];
      std::vector<double> neg(x.size()), pi(x.size());
      double xn = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) xn += x[a] * n[a];
      for (std::size_t a = 0; a < x.size(); ++a) {
        neg[a] = -x[a];
        pi[a] = x[a] - 2.0 * xn * n[a];
      }
      const auto jt = find_value(g.time_points, -t);
      const auto jneg = find_point(g.space_points, neg);
      const auto jpi = find_point(g.space_points, pi);
      require(jt >= 0 && jneg >= 0 && jpi >= 0,
              "verify_kernel_symmetries: grid is not reflection-closed");
      const complexd v = kern.values[it][ix];
      rep.max_even_violation =
          std::max(rep.max_even_violation, std::abs(kern.values[jt][jneg] - v));
      rep.max_theta_violation =
          std::max(rep.max_theta_violation, std::abs(kern.values[jt][ix] - std::conj(v)));
      rep.max_pi_violation =
          std::max(rep.max_pi_violation, std::abs(kern.values[it][jpi] - std::conj(v)));
      rep.max_theta_pi_violation =
          std::max(rep.max_theta_pi_violation, std::abs(kern.values[jt][jneg] - v));
      ++rep.compared;
    }
  }
  return rep;
}

namespace {

struct SymbolDerivs {
  complexd f, fp, fpp, fppp;  // f = 1/q and its E-derivatives at fixed k
};

SymbolDerivs symbol_derivs(double e, double mu, double delta) {
  const complexd z(e, delta);
  const complexd q = z * z + mu * mu;
  const complexd qp = 2.0 * z;
  SymbolDerivs d;
  d.f = 1.0 / q;
  d.fp = -qp / (q * q);
  d.fpp = (2.0 * qp * qp - 2.0 * q) / (q * q * q);
  d.fppp = 12.0 * qp / (q * q * q) - 6.0 * qp * qp * qp / (q * q * q * q);
  return d;
}

// Correction that upgrades the finite E-lattice sum to the full integral:
// integration-by-parts tails of Int_{|E|>W} f e^{iEt} dE (three terms each)
// minus the Euler-Maclaurin boundary terms of the discarded lattice tails,
//   sum_{n>N} de g(E_n) = Int_W^inf g - (de/2) g(W) - (de^2/12) g'(W) + ...
// with g = f e^{iEt}.
complexd lattice_tail_correction(double t, double w, double de, double mu, double delta) {
  const complexd it(0.0, t);
  const SymbolDerivs up = symbol_derivs(w, mu, delta);
  const SymbolDerivs lo = symbol_derivs(-w, mu, delta);
  const complexd e_up = std::polar(1.0, w * t);
  const complexd e_lo = std::polar(1.0, -w * t);
  const complexd it2 = it * it;
  const complexd t_up = e_up * (-up.f / it + up.fp / it2 - up.fpp / (it2 * it) +
                                up.fppp / (it2 * it2));
  const complexd t_lo = e_lo * (lo.f / it - lo.fp / it2 + lo.fpp / (it2 * it) -
                                lo.fppp / (it2 * it2));
  const complexd g_up = up.f * e_up;
  const complexd g_lo = lo.f * e_lo;
  const complexd gp_up = (up.fp + it * up.f) * e_up;
  const complexd gp_lo = (lo.fp + it * lo.f) * e_lo;
  return t_up + t_lo - 0.5 * de * (g_up + g_lo) -
         de * de / 12.0 * (gp_up - gp_lo);
}

}  // namespace

std::vector<std::vector<complexd>> kernel_fft_oracle(const GridSpec& grid, const BoostSpec& b,
                                                     FftOracleSpec spec) {
  grid.validate(b.dim);
  require(b.dim == 2, "kernel_fft_oracle: implemented for d = 2");
  require(grid.geometry == Geometry::flat, "kernel_fft_oracle: flat geometry only");

  double t_min = std::numeric_limits<double>::infinity(), t_max = 0.0;
  for (double t : grid.time_points) {
    require(t != 0.0, "kernel_fft_oracle: needs |t| > 0");
    t_min = std::min(t_min, std::abs(t));
    t_max = std::max(t_max, std::abs(t));
  }
  const double w = spec.e_window > 0.0 ? spec.e_window : std::max(240.0, 60.0 / t_min);
  const double v = b.speed();
  const double k_win = spec.k_window > 0.0
                           ? spec.k_window
                           : std::max(20.0 * b.mass,
                                      1.2 * 26.0 / std::max(1e-12, t_min * (1.0 - v)));

  const long ne = std::lround(std::ceil(w / spec.delta_e));
  const long nk = std::lround(std::ceil(k_win / spec.delta_k));
  const double de = spec.delta_e;
  const double dk = spec.delta_k;

  const std::size_t n_t = grid.time_points.size();
  const std::size_t n_x = grid.space_points.size();

  // g[ik][it] = Int dE f(E, k) e^{i E t}  (lattice sum + IBP tails).
  std::vector<std::vector<complexd>> g(static_cast<std::size_t>(2 * nk + 1),
                                       std::vector<complexd>(n_t));
  for (long jk = -nk; jk <= nk; ++jk) {
    const double k = jk * dk;
    const double mu = symbols::mu1(k, b);
    const double delta = symbols::delta1(k, b);
    std::vector<complexd> f(static_cast<std::size_t>(2 * ne + 1));
    for (long n = -ne; n <= ne; ++n) {
      f[static_cast<std::size_t>(n + ne)] = symbols::propagator_symbol(n * de, mu, delta);
    }
    auto& row = g[static_cast<std::size_t>(jk + nk)];
    for (std::size_t it = 0; it < n_t; ++it) {
      // Reduce t < 0 via f(E,k) = f(-E,-k): handled by the caller loop below,
      // here every t is taken as given (the symbol handles either sign).
      const double t = grid.time_points[it];
      const complexd step = std::polar(1.0, de * t);
      complexd phase = std::polar(1.0, -static_cast<double>(ne) * de * t);
      complexd acc{0.0, 0.0};
      for (long n = -ne; n <= ne; ++n) {
        acc += f[static_cast<std::size_t>(n + ne)] * phase;
        if (((n + ne) & 255) == 255) {
          phase = std::polar(1.0, static_cast<double>(n + 1) * de * t);
        } else {
          phase *= step;
        }
      }
      const double wgrid = ne * de;
      row[it] = de * acc + lattice_tail_correction(t, wgrid, de, mu, delta);
    }
  }

  std::vector<std::vector<complexd>> out(n_t, std::vector<complexd>(n_x));
  const double norm = 1.0 / (kTwoPi * kTwoPi);
  for (std::size_t it = 0; it < n_t; ++it) {
    for (std::size_t ix = 0; ix < n_x; ++ix) {
      const double x = grid.space_points[ix][0];
      const complexd step = std::polar(1.0, dk * x);
      complexd phase = std::polar(1.0, -static_cast<double>(nk) * dk * x);
      complexd acc{0.0, 0.0};
      for (long jk = -nk; jk <= nk; ++jk) {
        acc += g[static_cast<std::size_t>(jk + nk)][it] * phase;
        if (((jk + nk) & 255) == 255) {
          phase = std::polar(1.0, static_cast<double>(jk + 1) * dk * x);
        } else {
          phase *= step;
        }
      }
      out[it][ix] = norm * dk * acc;
    }
  }
  return out;
}

}  // namespace pwick::kernels
