#include "pwick/periodize.hpp"

#include "pwick/kernels.hpp"

namespace pwick::periodize {

CompactSpec CompactSpec::make(double beta, BoostSpec boost, std::vector<double> lengths) {
  require(beta > 0.0, "CompactSpec: beta must be positive");
  for (double l : lengths) require(l > 0.0, "CompactSpec: lengths must be positive");
  CompactSpec s;
  s.beta = beta;
  s.boost = std::move(boost);
  s.lengths = std::move(lengths);
  return s;
}

MatsubaraLattice MatsubaraLattice::make(double beta, int max_index) {
  require(beta > 0.0, "MatsubaraLattice: beta must be positive");
  require(max_index >= 0, "MatsubaraLattice: max_index must be >= 0");
  return {beta, max_index};
}

double rho_of(double beta, double mu_pm) {
  require(mu_pm > 0.0, "rho_of: needs mu_pm > 0");
  const double x = beta * mu_pm;
  if (x > 700.0) return 0.0;  // e^{-x} underflows; the exact value does too
  return std::exp(-x) / (-std::expm1(-x));
}

double rho_factor(const std::vector<double>& kvec, const CompactSpec& spec, int sign) {
  require(sign == +1 || sign == -1, "rho_factor: sign must be +-1");
  const double mu = symbols::mu_of(kvec, spec.boost);
  const double delta = symbols::delta_of(kvec, spec.boost);
  return rho_of(spec.beta, mu + sign * delta);
}

double rho_bound(const CompactSpec& spec) {
  const double x = spec.beta * spec.boost.mass_gap();
  return 1.0 / std::expm1(x);
}

complexd cylinder_mode_closed(double t, double tp, double beta, double mu, double delta) {
  double dt = std::fmod(t - tp, beta);
  if (dt < 0.0) dt += beta;
  const double mu_p = mu + delta;
  const double mu_m = mu - delta;
  const double rho_p = rho_of(beta, mu_p);
  const double rho_m = rho_of(beta, mu_m);
  // dt in [0, beta): the t > t' branch; dt = 0 is the continuous limit.
  const double val =
      ((1.0 + rho_m) * std::exp(-dt * mu_m) + (1.0 + rho_p) * std::exp(-(beta - dt) * mu_p)) /
      (2.0 * mu);
  return {val, 0.0};
}

complexd cylinder_mode_winding(double t, double tp, double beta, double mu, double delta,
                               int n_max, double* tail_bound) {
  require(n_max >= 0, "cylinder_mode_winding: n_max must be >= 0");
  complexd acc{0.0, 0.0};
  for (int n = -n_max; n <= n_max; ++n) {
    acc += kernels::time_profile(t - tp + n * beta, mu, delta);
  }
  if (tail_bound) {
    const double rho_max = std::max(rho_of(beta, mu + delta), rho_of(beta, mu - delta));
    *tail_bound = 2.0 * rho_max * std::exp(-std::max(0, n_max - 1) * beta * (mu - std::abs(delta)));
  }
  return acc;
}

double cylinder_mode_closed_v0(double dt, double beta, double mu) {
  dt = std::fmod(std::abs(dt), beta);
  // cosh(mu(beta/2 - dt)) / (2 mu sinh(beta mu / 2)), written with exp to
  // stay finite for large beta*mu.
  const double a = std::exp(-dt * mu) + std::exp(-(beta - dt) * mu);
  const double b = -std::expm1(-beta * mu);
  return a / (2.0 * mu * b);
}

complexd cylinder_mode_matsubara(double t, double tp, double beta, double mu, double delta,
                                 const MatsubaraLattice& lat, bool accelerate) {
  require(std::abs(lat.beta - beta) < 1e-12 * beta, "cylinder_mode_matsubara: beta mismatch");
  const double dt = t - tp;
  complexd acc{0.0, 0.0};
  for (int n = -lat.max_index; n <= lat.max_index; ++n) {
    const double e = lat.frequency(n);
    complexd term = symbols::propagator_symbol(e, mu, delta);
    if (accelerate) term -= symbols::propagator_symbol(e, mu, 0.0);
    acc += term * std::polar(1.0, e * dt);
  }
  acc /= beta;
  if (accelerate) acc += cylinder_mode_closed_v0(dt, beta, mu);
  return acc;
}

complexd theta_dc_mode(double s, double sp, double beta, double mu, double delta, int sign) {
  require(sign == +1 || sign == -1, "theta_dc_mode: sign must be +-1");
  const double mu_p = mu + sign * delta;
  const double mu_m = mu - sign * delta;
  const double rho_p = rho_of(beta, mu_p);
  const double rho_m = rho_of(beta, mu_m);
  const double u = s + sp;
  // rho_m e^{u mu_m} rewritten as (1 + rho_m) e^{-(beta-u) mu_m}, which stays
  // finite for deep modes where rho underflows while the bare exponential
  // overflows.
  return {((1.0 + rho_p) * std::exp(-u * mu_p) + (1.0 + rho_m) * std::exp(-(beta - u) * mu_m)) /
              (2.0 * mu),
          0.0};
}

complexd cylinder_kernel(double t, double tp, double xdiff, const CompactSpec& spec,
                         double momentum_cutoff, int nodes_per_panel) {
  require(spec.boost.dim == 2, "cylinder_kernel: d = 2 only");
  const double wrapped = std::abs(std::remainder(t - tp, spec.beta));
  if (wrapped == 0.0) {
    require(momentum_cutoff > 0.0,
            "cylinder_kernel: coincident-time evaluation needs an explicit momentum cutoff");
  }
  const double cutoff = momentum_cutoff > 0.0 ? momentum_cutoff : 40.0 / spec.beta + 40.0;
  const double panel = std::min(2.0, 8.0 / (1.0 + std::abs(xdiff)));
  const QuadRule rule = composite_gauss_legendre(nodes_per_panel, -cutoff, cutoff, panel);
  complexd acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double k = rule.nodes[i];
    const double mu = symbols::mu1(k, spec.boost);
    const double delta = symbols::delta1(k, spec.boost);
    acc += rule.weights[i] * cylinder_mode_closed(t, tp, spec.beta, mu, delta) *
           std::polar(1.0, k * xdiff);
  }
  return acc / kTwoPi;
}

complexd torus_kernel(double t, double tp, const std::vector<double>& xdiff,
                      const CompactSpec& spec, const std::vector<int>& cutoffs, int sign) {
  require(!spec.lengths.empty(), "torus_kernel: spec carries no spatial lengths");
  require(sign == +1 || sign == -1, "torus_kernel: sign must be +-1");
  require(xdiff.size() == spec.lengths.size(), "torus_kernel: xdiff dimension mismatch");
  const auto lat = lattice::SpatialLattice::make(spec.lengths, cutoffs);
  double tau = std::fmod(t - tp, spec.beta);
  if (tau < 0.0) tau += spec.beta;
  // As printed for the +- kernel with tau = t - t' >= 0: per mode
  // (1/2mu)[ e^{-tau mu_mp}/(1-e^{-beta mu_mp}) + e^{-(beta-tau) mu_pm}/(1-e^{-beta mu_pm}) ]
  // against e^{-i k.dx}; mu_pm means mu + sign*delta.
  complexd acc{0.0, 0.0};
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto k = lat.mode(i);
    const double mu = symbols::mu_of(k, spec.boost);
    const double delta = symbols::delta_of(k, spec.boost);
    const double mu_s = mu + sign * delta;
    const double mu_o = mu - sign * delta;
    const double rho_s = rho_of(spec.beta, mu_s);
    const double rho_o = rho_of(spec.beta, mu_o);
    const double factor =
        ((1.0 + rho_o) * std::exp(-tau * mu_o) + (1.0 + rho_s) * std::exp(-(spec.beta - tau) * mu_s)) /
        (2.0 * mu);
    double phase = 0.0;
    for (std::size_t a = 0; a < k.size(); ++a) phase -= k[a] * xdiff[a];
    acc += factor * std::polar(1.0, phase);
  }
  return acc / lat.volume();
}

symbols::BoundReport verify_compact_bounds(
    const std::vector<std::pair<int, std::vector<double>>>& samples, const MatsubaraLattice& lat,
    const CompactSpec& spec) {
  require(!samples.empty(), "verify_compact_bounds: empty sample set");
  const BoostSpec& b = spec.boost;
  symbols::BoundReport rep;
  rep.samples = samples.size();
  const double v2 = b.speed() * b.speed();
  const double a = 1.0 - v2;
  const double sup_target = b.speed() / std::sqrt(a);  // = sinh eta
  rep.ratio_sup_target = sup_target;
  const double tol = 1e-13;

  auto check = [&](const char* family, double energy, const std::vector<double>& kvec, double lhs,
                   double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    if (lhs > rhs + tol * scale) rep.violations.push_back({family, energy, kvec, lhs, rhs});
  };

  for (const auto& [n, kvec] : samples) {
    require(std::abs(n) <= lat.max_index, "verify_compact_bounds: index outside lattice");
    const double e = lat.frequency(n);
    const symbols::Momentum q = symbols::Momentum::make(e, kvec, b);
    const auto s = symbols::one_particle_symbols(q, b);
    const double absd = std::abs(s.d_tilde);
    const double cc = 1.0 / (e * e + s.mu * s.mu);
    check("a:K<=|D|", e, kvec, s.k_tilde, absd);
    check("a:|D|<=a^{-1/2}K", e, kvec, absd, s.k_tilde / std::sqrt(a));
    check("b:a C/2<K", e, kvec, 0.5 * a * cc, s.k_tilde);
    check("b:K<a^{-2}C", e, kvec, s.k_tilde, cc / (a * a));
    check("c:|L|<sup K", e, kvec, std::abs(s.l_tilde), sup_target * s.k_tilde);
    check("d:a C/2<|D|", e, kvec, 0.5 * a * cc, absd);
    check("d:|D|<a^{-5/2}C", e, kvec, absd, cc / (a * a * std::sqrt(a)));
  }

  // Sup sequence along the Matsubara lattice with matched spatial momentum.
  const double ch = b.cosh_eta();
  for (int n : {8, 64, 512, 4096}) {
    const double e = -lat.frequency(std::min(n, std::max(1, lat.max_index)));
    std::vector<double> kvec(b.velocity.size(), 0.0);
    for (std::size_t i = 0; i < kvec.size(); ++i) kvec[i] = -e * ch * b.direction[i];
    const symbols::Momentum q = symbols::Momentum::make(e, kvec, b);
    const auto [kt, lt] = symbols::split_symbols(q, b);
    rep.ratio_sup_estimate = std::max(rep.ratio_sup_estimate, std::abs(lt) / kt);
  }
  return rep;
}

rp::GramReport gram_reflection_compact(const rp::TestFunctionFamily& fam, const CompactSpec& spec,
                                       double tolerance, int quad_nodes) {
  require(fam.half == rp::HalfSpace::positive_time,
          "gram_reflection_compact: positive-time family expected");
  const int n = static_cast<int>(fam.members.size());
  require(n >= 1, "gram_reflection_compact: empty family");
  for (const auto& m : fam.members) {
    require(m.lo >= 0.0 && m.hi <= 0.5 * spec.beta,
            "gram_reflection_compact: member support must lie in (0, beta/2)");
  }
  const std::size_t nk = fam.lat.size();
  std::vector<double> mu(nk), delta(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    mu[k] = lattice::mu_mode(fam.lat, k, spec.boost);
    delta[k] = lattice::delta_mode(fam.lat, k, spec.boost);
  }
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    const QuadRule qi = gauss_legendre(quad_nodes, fam.members[i].lo, fam.members[i].hi);
    for (int j = 0; j < n; ++j) {
      const QuadRule qj = gauss_legendre(quad_nodes, fam.members[j].lo, fam.members[j].hi);
      complexd acc{0.0, 0.0};
      for (std::size_t k = 0; k < nk; ++k) {
        const complexd amp = std::conj(fam.members[i].amp[k]) * fam.members[j].amp[k];
        if (amp == complexd{0.0, 0.0}) continue;
        complexd dbl{0.0, 0.0};
        for (std::size_t a = 0; a < qi.size(); ++a) {
          const double fi = fam.members[i].profile(qi.nodes[a]);
          if (fi == 0.0) continue;
          for (std::size_t c = 0; c < qj.size(); ++c) {
            const double fj = fam.members[j].profile(qj.nodes[c]);
            if (fj == 0.0) continue;
            dbl += qi.weights[a] * qj.weights[c] * fi * fj *
                   theta_dc_mode(qi.nodes[a], qj.nodes[c], spec.beta, mu[k], delta[k]);
          }
        }
        acc += amp * dbl;
      }
      m(i, j) = acc;
    }
  }
  rp::GramReport rep;
  rep.family_seed = fam.seed;
  rep.tolerance = tolerance;
  rep.hermiticity_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  rep.matrix = std::move(m);
  rep.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  rep.min_eig = rep.eigenvalues.front();
  const double norm =
      std::max(std::abs(rep.eigenvalues.front()), std::abs(rep.eigenvalues.back()));
  rep.verdict = rep.min_eig >= -tolerance * std::max(norm, 1e-300);
  return rep;
}

double sharp_time_embedding_constant(const lattice::SpatialLattice& lat, const CompactSpec& spec) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double mu = lattice::mu_mode(lat, i, spec.boost);
    // (1/beta) sum_{n in Z} 1/(E_n^2 + mu^2) = coth(beta mu / 2)/(2 mu); the
    // ratio against the Riemann integral 1/(2 mu) is 1 + 2 rho(mu).
    worst = std::max(worst, 1.0 + 2.0 * rho_of(spec.beta, mu));
  }
  return worst;
}

}  // namespace pwick::periodize
