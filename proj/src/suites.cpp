#include "pwick/suites.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <thread>

#include "pwick/fock.hpp"
#include "pwick/gaussian.hpp"
#include "pwick/kernels.hpp"
#include "pwick/periodize.hpp"
#include "pwick/rp.hpp"
#include "pwick/thermal.hpp"

namespace pwick::suites {

using json = nlohmann::json;

namespace {

void add_check(SuiteResult& r, const std::string& name, const std::string& statement,
               double value, double threshold, bool pass) {
  r.checks.push_back({name, statement, value, threshold, pass});
}

// value must be <= threshold
void add_upper(SuiteResult& r, const std::string& name, const std::string& statement,
               double value, double threshold) {
  add_check(r, name, statement, value, threshold, value <= threshold);
}

// value must be >= threshold
void add_lower(SuiteResult& r, const std::string& name, const std::string& statement,
               double value, double threshold) {
  add_check(r, name, statement, value, threshold, value >= threshold);
}

template <typename F>
void parallel_for(int jobs, std::size_t n, F&& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

// ---------------------------------------------------------------- symbols --

SuiteResult run_symbols_suite(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "symbols";
  using namespace symbols;
  std::size_t total_violations = 0;
  double worst_sup_err = 0.0;
  for (int d : cfg.symbols.dims) {
    for (double v : cfg.symbols.velocities) {
      std::vector<double> vel(static_cast<std::size_t>(d - 1), 0.0);
      vel[0] = v;
      const BoostSpec b = BoostSpec::make(1.0, vel);
      Rng rng(cfg.seed ^ (static_cast<std::uint64_t>(d) << 32) ^
              static_cast<std::uint64_t>(std::llround(v * 1000) + 5000));
      std::vector<Momentum> samples;
      samples.reserve(static_cast<std::size_t>(cfg.symbols.samples));
      for (int i = 0; i < cfg.symbols.samples; ++i) {
        std::vector<double> k(static_cast<std::size_t>(d - 1));
        for (auto& c : k) c = rng.uniform(-cfg.symbols.range, cfg.symbols.range);
        samples.push_back(
            Momentum::make(rng.uniform(-cfg.symbols.range, cfg.symbols.range), std::move(k), b));
      }
      const BoundReport rep = verify_symbol_bounds(samples, b);
      total_violations += rep.violations.size();
      if (b.speed() > 0.0) {
        worst_sup_err = std::max(
            worst_sup_err, std::abs(rep.ratio_sup_estimate - rep.ratio_sup_target) /
                               rep.ratio_sup_target);
      }
    }
  }
  add_upper(res, "bound_violations", "K<=|D|<=cosh K; C/(2cosh^2)<K<cosh^4 C; |L|<sinh K; |D|<cosh^5 C",
            static_cast<double>(total_violations), 0.0);
  add_upper(res, "sup_ratio", "sup |L/K| approaches sinh(eta) along k.n=|k|=-E cosh(eta)",
            worst_sup_err, 0.01);
  return res;
}

// ---------------------------------------------------------------- kernels --

SuiteResult run_kernels_suite(const RunConfig& cfg, const std::string& dump_dir) {
  SuiteResult res;
  res.suite = "kernels";
  using namespace kernels;
  const int n = cfg.kernels.grid_n;
  std::vector<double> ts(static_cast<std::size_t>(n)), xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ts[static_cast<std::size_t>(i)] =
        cfg.kernels.t_min + (cfg.kernels.t_max - cfg.kernels.t_min) * i / (n - 1);
    xs[static_cast<std::size_t>(i)] = -cfg.kernels.x_max + 2.0 * cfg.kernels.x_max * i / (n - 1);
  }

  std::vector<double> rel_errs(cfg.kernels.velocities.size(), 0.0);
  parallel_for(cfg.jobs, cfg.kernels.velocities.size(), [&](std::size_t iv) {
    const BoostSpec b = BoostSpec::make1d(1.0, cfg.kernels.velocities[iv]);
    const GridSpec grid = GridSpec::flat2d(ts, xs);
    const SampledKernel quad = kernel_continuum(grid, b);
    const auto oracle = kernel_fft_oracle(grid, b);
    double worst = 0.0;
    for (std::size_t it = 0; it < ts.size(); ++it) {
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const double scale = std::max(std::abs(oracle[it][ix]), 1e-300);
        worst = std::max(worst, std::abs(quad.values[it][ix] - oracle[it][ix]) / scale);
      }
    }
    rel_errs[iv] = worst;
  });
  for (std::size_t iv = 0; iv < cfg.kernels.velocities.size(); ++iv) {
    char name[32];
    std::snprintf(name, sizeof name, "duality_v%.2g", cfg.kernels.velocities[iv]);
    add_upper(res, name, "quadrature kernel vs Fourier-lattice route, relative", rel_errs[iv],
              cfg.kernels.duality_rel_tol);
  }

  // Symmetries on a reflection-closed grid, and the v <-> -v conjugation.
  {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    std::vector<double> tsym, xsym;
    for (int i = -4; i <= 4; ++i) {
      if (i != 0) tsym.push_back(0.4 * i);
    }
    for (int i = -4; i <= 4; ++i) xsym.push_back(0.5 * i);
    const GridSpec grid = GridSpec::flat2d(tsym, xsym);
    const SampledKernel kern = kernel_continuum(grid, b);
    const SymmetryReport sym = verify_kernel_symmetries(kern);
    double scale = 0.0;
    for (const auto& row : kern.values) {
      for (const auto& z : row) scale = std::max(scale, std::abs(z));
    }
    add_upper(res, "evenness", "D(-x) = D(x)", sym.max_even_violation / scale, 1e-9);
    add_upper(res, "theta_reflection", "D(theta x) = conj D(x)", sym.max_theta_violation / scale,
              1e-9);
    add_upper(res, "pi_reflection", "D(pi_n x) = conj D(x)", sym.max_pi_violation / scale, 1e-9);

    const SampledKernel kern_rev = kernel_continuum(grid, b.reversed());
    double conj_dev = 0.0;
    for (std::size_t it = 0; it < kern.values.size(); ++it) {
      for (std::size_t ix = 0; ix < kern.values[it].size(); ++ix) {
        conj_dev = std::max(conj_dev,
                            std::abs(kern.values[it][ix] - std::conj(kern_rev.values[it][ix])));
      }
    }
    add_upper(res, "velocity_conjugation", "D(v) = conj D(-v)", conj_dev / scale, 1e-12);

    if (!dump_dir.empty()) {
      dump_csv(kern, dump_dir + "/kernel_flat_v0.6.csv");
      dump_binary(kern, dump_dir + "/kernel_flat_v0.6.bin");
    }
  }

  // Free Euclidean propagator at v = 0: (1/2pi) K0(m r).
  {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.0);
    const GridSpec grid = GridSpec::flat2d({1.0}, {0.0});
    const SampledKernel kern = kernel_continuum(grid, b);
    const double expect = std::cyl_bessel_k(0.0, 1.0) / kTwoPi;
    add_upper(res, "bessel_point", "v=0 kernel at unit separation = K0(m r)/(2 pi)",
              std::abs(kern.values[0][0].real() - expect) + std::abs(kern.values[0][0].imag()),
              1e-8);
  }
  return res;
}

// --------------------------------------------------------------------- rp --

SuiteResult run_rp_suite(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "rp";
  using namespace rp;
  const SpatialLattice lat = SpatialLattice::make1d(cfg.rp.length, cfg.rp.modes);
  double worst_min_eig_scaled = 0.0;  // most negative min_eig / ||M||
  double worst_iso = 0.0;
  bool all_verdicts = true;
  json gram_details = json::array();
  auto record = [&](const GramReport& g, const char* reflection, double v, int sign) {
    all_verdicts = all_verdicts && g.verdict;
    const double norm =
        std::max(std::abs(g.eigenvalues.front()), std::abs(g.eigenvalues.back()));
    worst_min_eig_scaled = std::min(worst_min_eig_scaled, g.min_eig / std::max(norm, 1e-300));
    gram_details.push_back({{"family_seed", g.family_seed},
                            {"reflection", reflection},
                            {"velocity", v},
                            {"sign", sign},
                            {"eigenvalues", g.eigenvalues},
                            {"min_eig", g.min_eig},
                            {"verdict", g.verdict}});
  };
  for (double v : cfg.rp.velocities) {
    const BoostSpec b = BoostSpec::make1d(1.0, v);
    for (int s = 0; s < cfg.rp.gram_seeds; ++s) {
      const std::uint64_t seed = cfg.seed + 977 * static_cast<std::uint64_t>(s) +
                                 static_cast<std::uint64_t>(std::llround((v + 1.0) * 4096));
      const auto fam = TestFunctionFamily::random_temporal(lat, cfg.rp.members, seed);
      for (int sign : {+1, -1}) {
        record(gram_reflection(fam, Reflection::theta, b, cfg.rp.gram_tol, 48, sign), "theta",
               v, sign);
      }
      const auto sfam = TestFunctionFamily::random_spatial(48, 6.0, cfg.rp.members, seed);
      for (int sign : {+1, -1}) {
        record(gram_reflection(sfam, Reflection::pi_n, b, cfg.rp.gram_tol, 48, sign), "pi_n", v,
               sign);
      }
      const IsometryReport iso = verify_isometry(fam, b);
      worst_iso = std::max(
          worst_iso, std::max(iso.max_plus_deviation, iso.max_minus_deviation) / iso.scale);
    }
  }
  res.details_json = gram_details.dump();
  add_check(res, "gram_positivity", "min eig >= -tol ||M|| for theta and pi_n Grams",
            worst_min_eig_scaled, -cfg.rp.gram_tol, all_verdicts);
  add_upper(res, "os_isometry", "<f, theta D g> = <f^+, g^+>_{-1/2} (and mu_- twin)", worst_iso,
            cfg.rp.isometry_rel_tol);

  // Contraction of the quantization map on a fixed member.
  {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    Rng rng(cfg.seed + 5);
    auto fam = TestFunctionFamily::random_temporal(lat, 1, cfg.seed + 5);
    const auto rep = verify_contraction(fam.members[0], lat, +1, b);
    add_check(res, "contraction", "||f^||^2_{-1/2} <= <f, |D| f>", rep.quantum_norm2,
              rep.classical_norm2, rep.pass());
  }
  return res;
}

// -------------------------------------------------------------- periodize --

SuiteResult run_periodize_suite(const RunConfig& cfg, const std::string& dump_dir) {
  SuiteResult res;
  res.suite = "periodize";
  using namespace periodize;
  const double beta = cfg.periodize.beta;

  if (!dump_dir.empty()) {
    // Cylinder kernel dump in the shared formats, tagged with its geometry.
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const CompactSpec spec = CompactSpec::make(beta, b);
    kernels::SampledKernel kern;
    kern.kind = kernels::KernelKind::D;
    kern.boost = b;
    kern.grid.geometry = kernels::Geometry::time_circle;
    kern.grid.beta = beta;
    for (int i = -7; i <= 7; ++i) kern.grid.time_points.push_back(beta * i / 15.0);
    for (int i = -4; i <= 4; ++i) kern.grid.space_points.push_back({0.5 * i});
    kern.values.assign(kern.grid.time_points.size(),
                       std::vector<complexd>(kern.grid.space_points.size()));
    for (std::size_t it = 0; it < kern.grid.time_points.size(); ++it) {
      for (std::size_t ix = 0; ix < kern.grid.space_points.size(); ++ix) {
        kern.values[it][ix] = cylinder_kernel(kern.grid.time_points[it], 0.0,
                                              kern.grid.space_points[ix][0], spec, 60.0);
      }
    }
    kernels::dump_csv(kern, dump_dir + "/kernel_cylinder_v0.6.csv");
    kernels::dump_binary(kern, dump_dir + "/kernel_cylinder_v0.6.bin");
  }

  double worst_triple = 0.0;
  double worst_rho_excess = -std::numeric_limits<double>::infinity();
  for (double v : cfg.periodize.velocities) {
    const BoostSpec b = BoostSpec::make1d(1.0, v);
    const CompactSpec spec = CompactSpec::make(beta, b);
    const MatsubaraLattice lat = MatsubaraLattice::make(beta, cfg.periodize.matsubara_max);
    const double bound = rho_bound(spec);
    for (double k : {0.0, 0.7, -1.3, 2.9, 6.1}) {
      const double mu = symbols::mu1(k, b);
      const double delta = symbols::delta1(k, b);
      for (int sign : {+1, -1}) {
        // the bound is attained exactly at v = 0, k = 0; compare in ulps
        worst_rho_excess =
            std::max(worst_rho_excess, (rho_of(beta, mu + sign * delta) - bound) / bound);
      }
      for (double dt : {beta / 100.0, 0.3, 0.5 * beta, 0.93 * beta}) {
        const complexd closed = cylinder_mode_closed(dt, 0.0, beta, mu, delta);
        const complexd wind =
            cylinder_mode_winding(dt, 0.0, beta, mu, delta, cfg.periodize.n_winding);
        const complexd mats = cylinder_mode_matsubara(dt, 0.0, beta, mu, delta, lat, true);
        worst_triple = std::max({worst_triple, std::abs(closed - wind), std::abs(closed - mats),
                                 std::abs(wind - mats)});
      }
    }
  }
  add_upper(res, "triple_agreement",
            "closed form vs winding(64) vs accelerated Matsubara, per mode",
            worst_triple, cfg.periodize.triple_tol);
  add_upper(res, "rho_bound", "rho_pm <= (e^{m beta sqrt(1-v^2)} - 1)^{-1}", worst_rho_excess,
            1e-14);

  // Torus -> cylinder refinement: deviation strictly decreasing in l.
  {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    std::vector<double> devs;
    for (double ell : cfg.periodize.torus_lengths) {
      const CompactSpec spec = CompactSpec::make(beta, b, {ell});
      const int cutoff = static_cast<int>(80.0 * ell / kTwoPi);
      const complexd torus = torus_kernel(0.4, 0.0, {0.3}, spec, {cutoff}, +1);
      const CompactSpec flat_spec = CompactSpec::make(beta, b);
      const complexd cyl = cylinder_kernel(0.4, 0.0, 0.3, flat_spec, 80.0);
      devs.push_back(std::abs(torus - cyl));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < devs.size(); ++i) monotone = monotone && devs[i] < devs[i - 1];
    add_check(res, "torus_refinement", "torus kernel -> cylinder kernel as lengths grow",
              devs.back(), devs.front(), monotone);
  }

  // Compactified symbol bounds on Matsubara x momentum samples.
  {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const CompactSpec spec = CompactSpec::make(beta, b);
    const MatsubaraLattice lat = MatsubaraLattice::make(beta, 5000);
    Rng rng(cfg.seed + 17);
    std::vector<std::pair<int, std::vector<double>>> samples;
    for (int i = 0; i < 1000; ++i) {
      samples.emplace_back(static_cast<int>(rng.next_u64() % 2001) - 1000,
                           std::vector<double>{rng.uniform(-10.0, 10.0)});
    }
    const auto rep = verify_compact_bounds(samples, lat, spec);
    add_upper(res, "compact_bounds", "K^c..|D^c| bounds with (1-v^2) constants",
              static_cast<double>(rep.violations.size()), 0.0);
    add_upper(res, "compact_sup_ratio", "sup|L^c/K^c| -> |v|/sqrt(1-v^2)",
              std::abs(rep.ratio_sup_estimate - rep.ratio_sup_target) / rep.ratio_sup_target,
              0.02);
  }

  // Compact reflected Gram and the sharp-time embedding constant.
  {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const CompactSpec spec = CompactSpec::make(beta, b);
    const auto lat = lattice::SpatialLattice::make1d(kTwoPi, 6);
    auto fam = rp::TestFunctionFamily::random_temporal(lat, 12, cfg.seed + 23,
                                                       0.45 * beta);
    const auto g = gram_reflection_compact(fam, spec, 1e-10, 40);
    const double norm =
        std::max(std::abs(g.eigenvalues.front()), std::abs(g.eigenvalues.back()));
    add_check(res, "compact_gram", "0 <= theta D^c on positive-time members",
              g.min_eig / std::max(norm, 1e-300), -1e-10, g.verdict);
    const double mt = sharp_time_embedding_constant(lat, spec);
    add_upper(res, "sharp_time_embedding", "Matsubara sum vs Riemann integral, M~ = 1 + O(1/beta)",
              mt - 1.0, 2.0 * rho_bound(spec) * 1.0001 + 1e-12);
  }
  return res;
}

// ---------------------------------------------------------------- thermal --

SuiteResult run_thermal_suite(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "thermal";
  using namespace thermal;
  const auto lat = SpatialLattice::make1d(cfg.thermal.length, cfg.thermal.modes);
  double worst_kms = 0.0, worst_modular = 0.0, worst_comm = 0.0, worst_tp_kms = 0.0;
  double worst_gap_deficit = -std::numeric_limits<double>::infinity();
  double min_sigma = std::numeric_limits<double>::infinity();
  for (double v : cfg.thermal.velocities) {
    const BoostSpec b = BoostSpec::make1d(1.0, v);
    const CompactSpec spec = periodize::CompactSpec::make(cfg.thermal.beta, b);
    Rng rng(cfg.seed ^ 0x9e37u ^ static_cast<std::uint64_t>(std::llround((v + 1) * 512)));
    for (int sign : {+1, -1}) {
      const auto a1 = SpatialFunction::random_real(lat, rng);
      const auto a2 = SpatialFunction::random_real(lat, rng);
      const auto kms =
          one_particle_kms_check(a1, a2, {0.0, 0.31, -1.7, 2.4}, spec, sign);
      worst_kms = std::max(worst_kms, kms.max_residual / std::max(kms.scale, 1e-300));

      const auto mod = modular_check(spec, sign, lat, cfg.seed + 31, 6);
      worst_modular = std::max({worst_modular, mod.j_kappa_residual, mod.j_squared_residual,
                                mod.tomita_action_residual, mod.polar_residual,
                                mod.half_shift_residual});

      const auto ls = liouvillian_spectrum(lat, spec, sign);
      worst_gap_deficit = std::max(worst_gap_deficit, b.mass_gap() - ls.gap);

      const auto dens = sharp_time_density_check(0.1 * spec.beta, 0.35 * spec.beta, lat, spec, sign);
      min_sigma = std::min(min_sigma, dens.sigma_min);

      worst_comm = std::max(worst_comm, commutator_residual(a1, a2, 0.45, -0.8, spec, sign));
      for (double t : {-5.0, -1.2, 0.4, 2.6, 5.0}) {
        worst_tp_kms = std::max(worst_tp_kms,
                                two_point_kms_residual(a1, a2, {t}, spec, sign));
      }
    }
  }
  add_upper(res, "one_particle_kms", "<ka, e^{(is-b)l} ka'> = <e^{is l} ka', ka>", worst_kms,
            cfg.thermal.kms_tol);
  add_upper(res, "modular_identities", "j kappa = -kappa'; s = j e^{-beta l/2}; j^2 = 1",
            worst_modular, cfg.thermal.modular_tol);
  add_upper(res, "liouvillian_gap", "per-mode |generator| >= m sqrt(1-v^2)", worst_gap_deficit,
            1e-12);
  add_lower(res, "sharp_time_density", "two-slice map smallest singular value > 0", min_sigma,
            1e-12);
  add_upper(res, "thermal_commutator", "evolved field vs beta/2 field commute", worst_comm,
            cfg.thermal.commutator_tol);
  add_upper(res, "two_point_kms_boundary", "F(t+i beta) = <e^{it l} ka', ka>", worst_tp_kms,
            cfg.thermal.kms_tol);
  return res;
}

// --------------------------------------------------------------- gaussian --

SuiteResult run_gaussian_suite(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "gaussian";
  using namespace gaussian;
  const auto lat = lattice::SpatialLattice::make1d(kTwoPi, cfg.gaussian.modes);
  const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
  Rng rng(cfg.seed + 101);

  auto random_field = [&](double lo_center, double hi_center) {
    MomentField f;
    f.fn.center = rng.uniform(lo_center, hi_center);
    f.fn.width = rng.uniform(0.05, 0.12);
    f.fn.lo = f.fn.center - 9.0 * f.fn.width;
    f.fn.hi = f.fn.center + 9.0 * f.fn.width;
    f.fn.amp.resize(lat.size());
    for (auto& c : f.fn.amp) c = rng.cnormal();
    return f;
  };

  // Recursion S_4 = 3 S_2^2 and S_6 = 15 S_2^3 against the pairing sum.
  {
    MomentRequest req;
    req.lat = lat;
    req.boost = b;
    req.route = CovarianceRoute::flat;
    const MomentField f = random_field(-0.5, 0.5);
    req.fields.assign(4, f);
    const complexd s2 = pair_covariance(f, f, req);
    const complexd s4 = wick_moment_pairing(req);
    req.fields.assign(6, f);
    const complexd s6 = wick_moment_pairing(req);
    add_upper(res, "s4_recursion", "S_4 = 3 S_2^2",
              std::abs(s4 - 3.0 * s2 * s2) / std::abs(s4), cfg.gaussian.moment_tol);
    add_upper(res, "s6_recursion", "S_6 = 15 S_2^3",
              std::abs(s6 - 15.0 * s2 * s2 * s2) / std::abs(s6), cfg.gaussian.moment_tol);
    req.fields.assign(3, f);
    add_upper(res, "odd_moment", "S_n = 0 for odd n", std::abs(wick_moment_pairing(req)), 0.0);
  }

  // Mixed 8-field pairing sum vs the polarization oracle.
  {
    MomentRequest req;
    req.lat = lat;
    req.boost = b;
    req.route = CovarianceRoute::flat;
    for (int i = 0; i < 8; ++i) req.fields.push_back(random_field(-0.8, 0.8));
    const complexd pairing = wick_moment_pairing(req);
    const complexd polar = wick_moment_polarized(req);
    add_upper(res, "pairing_vs_polarization", "105 pairings vs 2^8 polarization evaluations",
              std::abs(pairing - polar) / std::max(std::abs(pairing), 1e-300),
              cfg.gaussian.moment_tol);
  }

  // (2n-1)!! law, flat and thermal, dual path, n <= 4.
  {
    double worst = 0.0;
    const periodize::CompactSpec spec = periodize::CompactSpec::make(2.0, b);
    for (int n = 0; n <= 4; ++n) {
      const auto h = lattice::SpatialFunction::random_real(lat, rng);
      const double direct = quantized_norm(h, n, b);
      const double paired = quantized_norm_via_pairings(h, n, b);
      worst = std::max(worst, std::abs(direct - paired) / std::max(direct, 1e-300));
      const double tdirect = quantized_norm_thermal(h, n, spec, +1);
      const double tpaired = quantized_norm_thermal_via_pairings(h, n, spec, +1);
      worst = std::max(worst, std::abs(tdirect - tpaired) / std::max(tdirect, 1e-300));
    }
    add_upper(res, "double_factorial_law", "||phi(h)^n O||^2 = (2n-1)!! <h,h>^n, dual path",
              worst, cfg.gaussian.dual_tol);
  }

  // Field-vector bound over random spacetime lattice functions.
  {
    std::vector<double> e_nodes;
    for (int j = -8; j <= 8; ++j) e_nodes.push_back(0.7 * j);
    double worst_ratio = 0.0, worst_ratio_v0 = 0.0;
    const BoostSpec b0 = BoostSpec::make1d(1.0, 0.0);
    for (int s = 0; s < cfg.gaussian.field_samples; ++s) {
      std::vector<std::vector<complexd>> coeff(
          e_nodes.size(), std::vector<complexd>(lat.size()));
      for (auto& row : coeff) {
        for (auto& c : row) c = rng.cnormal();
      }
      worst_ratio = std::max(worst_ratio,
                             field_vector_bound(e_nodes, lat, coeff, b).ratio);
      worst_ratio_v0 = std::max(worst_ratio_v0,
                                field_vector_bound(e_nodes, lat, coeff, b0).ratio);
    }
    const double ch = b.cosh_eta();
    add_upper(res, "field_vector_bound", "|| |D|^{1/2} f ||^2 <= cosh^5(eta) ||C^{1/2} f||^2",
              worst_ratio, ch * ch * ch * ch * ch);
    add_upper(res, "field_vector_bound_v0", "equality at v = 0", std::abs(worst_ratio_v0 - 1.0),
              1e-12);
  }
  return res;
}

// ------------------------------------------------------------------- fock --

SuiteResult run_fock_suite(const RunConfig& cfg, const std::string& dump_dir) {
  SuiteResult res;
  res.suite = "fock";
  using namespace fock;
  const auto trunc = FockTruncation::make(cfg.fock.ell, cfg.fock.mass, cfg.fock.mode_cutoff,
                                          cfg.fock.max_particles, cfg.fock.dimension_cap);
  const auto ops = build_operators(trunc, PolySpec::phi4(cfg.fock.lambda));
  add_upper(res, "hermiticity", "H_int = H_int^T in the truncated basis",
            ops.hermiticity_deviation, 1e-12);

  const auto spec = spectrum_condition(ops, cfg.fock.velocities, cfg.fock.spectrum_tol);
  double min_eig = 0.0;
  bool sector_zero = true, ph_pass = true;
  for (const auto& r : spec.per_velocity) {
    min_eig = std::min(min_eig, r.min_eig);
    sector_zero = sector_zero && (r.ground_sector_momentum == 0);
    ph_pass = ph_pass && r.ph_bound_pass;
  }
  add_lower(res, "spectrum_condition", "min spec(H + vP) >= -tol after the v=0 shift", min_eig,
            -cfg.fock.spectrum_tol);
  add_check(res, "ground_sector", "ground sector carries total momentum 0", sector_zero ? 1 : 0,
            1, sector_zero);
  add_check(res, "ph_bound", "eps^2 P^2 <= H_v^2 eigenvalue-wise, eps = (1-|v|)/2", ph_pass ? 1 : 0,
            1, ph_pass);

  if (cfg.fock.refine) {
    const auto trunc2 = FockTruncation::make(cfg.fock.ell, cfg.fock.mass, cfg.fock.mode_cutoff + 1,
                                             cfg.fock.max_particles + 2, cfg.fock.dimension_cap);
    const auto ops2 = build_operators(trunc2, PolySpec::phi4(cfg.fock.lambda));
    const auto spec2 = spectrum_condition(ops2, cfg.fock.velocities, cfg.fock.spectrum_tol);
    double min2 = 0.0;
    for (const auto& r : spec2.per_velocity) min2 = std::min(min2, r.min_eig);
    add_check(res, "refinement_trend", "min eig moves toward 0 under (K,N) refinement", min2,
              min_eig, min2 >= min_eig - 1e-12);
  }

  // Free-field Gibbs cross-checks and the analyticity chain.
  {
    const auto free_ops = build_operators(trunc, PolySpec::zero());
    const auto gibbs = heat_kernel_and_gibbs(free_ops, cfg.fock.beta, 0.3, cfg.seed + 7);
    const double rel = std::abs(gibbs.partition_function - gibbs.free_product_formula) /
                       gibbs.free_product_formula;
    add_upper(res, "partition_product_formula",
              "Tr e^{-beta H_v} = prod (1-e^{-beta mu_v})^{-1} within the particle-cap budget",
              rel, std::max(gibbs.particle_cap_bound / gibbs.free_product_formula, 1e-14));
    add_upper(res, "gibbs_kms", "F(t + i beta) = <alpha_t(B) A> for the Gibbs state",
              gibbs.kms_residual, 1e-10);
    add_upper(res, "gibbs_cyclicity", "Gibbs state invariant under e^{itH} conjugation",
              gibbs.cyclicity_residual, 1e-12);

    const auto ana = analyticity_check(ops, 1.0, 0.5, 0.25, 6, cfg.seed + 11, 1000);
    add_check(res, "analyticity_terms",
              "Gamma^n/n! ||(tP)^n e^{-tH}|| <= (Gamma/(1-eps))^n ||e^{-t(eps Hfree+Hint-E)}||",
              ana.terms_pass ? 1 : 0, 1, ana.terms_pass);
    add_upper(res, "trotter_lemma", "||C e^{A+B}|| <= ||e^A|| ||C e^B|| on commuting triples",
              ana.trotter_max_violation, 1e-10);
  }

  if (!dump_dir.empty()) {
    std::FILE* f = std::fopen((dump_dir + "/spectrum.csv").c_str(), "w");
    if (f) {
      std::fprintf(f, "sector_momentum,index,eigenvalue\n");
      for (std::size_t s = 0; s < ops.n_sectors(); ++s) {
        for (int i = 0; i < ops.eigenvalues[s].size(); ++i) {
          std::fprintf(f, "%d,%d,%.17g\n", ops.trunc.sector_momentum[s], i,
                       ops.eigenvalues[s](i));
        }
      }
      std::fclose(f);
    }
  }

  // Heat-kernel matrix elements against the classical reflected pairing.
  for (const auto& c : run_fk_suite(cfg).checks) res.checks.push_back(c);
  return res;
}

// --------------------------------------------------------------------- fk --

SuiteResult run_fk_suite(const RunConfig& cfg) {
  SuiteResult res;
  res.suite = "fk_gaussian";
  using namespace fock;
  const auto trunc = FockTruncation::make(cfg.fock.ell, cfg.fock.mass, 2, 4, cfg.fock.dimension_cap);
  Rng rng(cfg.seed + 41);
  rp::TestMember f, g;
  f.center = 0.6;
  f.width = 0.12;
  f.lo = 1e-6;
  f.hi = f.center + 9.0 * f.width;
  g.center = 0.9;
  g.width = 0.1;
  g.lo = 1e-6;
  g.hi = g.center + 9.0 * g.width;
  f.amp.resize(static_cast<std::size_t>(trunc.n_modes()));
  g.amp.resize(static_cast<std::size_t>(trunc.n_modes()));
  for (auto& c : f.amp) c = rng.cnormal();
  for (auto& c : g.amp) c = rng.cnormal();
  double worst = 0.0;
  for (double T : {0.0, 0.5, 1.0}) {
    const auto rep = fk_gaussian_check(T, f, g, trunc, 0.6);
    worst = std::max(worst, rep.deviation / std::max(rep.scale, 1e-300));
  }
  add_upper(res, "fk_gaussian", "<f^, e^{-T H_v} g^> = <f, theta D T(T) g>", worst,
            cfg.fock.fk_tol);
  return res;
}

// ------------------------------------------------------------ orchestration

namespace {

json to_json(const SuiteResult& r, std::uint64_t seed) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"statement", c.statement},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  }
  json doc{{"schema", 1}, {"suite", r.suite}, {"seed", seed}, {"pass", r.pass()},
           {"checks", checks}};
  if (!r.details_json.empty()) doc["details"] = json::parse(r.details_json);
  return doc;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    require(allowed.count(it.key()) > 0, "config: unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
void maybe(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  reject_unknown_keys(doc, {"schema", "seed", "jobs", "out", "suites", "tolerances", "symbols",
                            "kernels", "rp", "periodize", "thermal", "gaussian", "fock"},
                      "top level");
  if (doc.contains("schema")) {
    require(doc.at("schema").get<int>() == 1, "config: unsupported schema");
  }
  maybe(doc, "seed", cfg.seed);
  maybe(doc, "jobs", cfg.jobs);
  maybe(doc, "out", cfg.out_dir);
  if (doc.contains("suites")) cfg.suites = doc.at("suites").get<std::vector<std::string>>();
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    reject_unknown_keys(t, {"kernel_duality_rel", "gram_min_eig", "isometry_rel",
                            "triple_agreement_abs", "kms", "modular", "commutator", "moment",
                            "dual_path", "fk", "spectrum"},
                        "tolerances");
    maybe(t, "kernel_duality_rel", cfg.kernels.duality_rel_tol);
    maybe(t, "gram_min_eig", cfg.rp.gram_tol);
    maybe(t, "isometry_rel", cfg.rp.isometry_rel_tol);
    maybe(t, "triple_agreement_abs", cfg.periodize.triple_tol);
    maybe(t, "kms", cfg.thermal.kms_tol);
    maybe(t, "modular", cfg.thermal.modular_tol);
    maybe(t, "commutator", cfg.thermal.commutator_tol);
    maybe(t, "moment", cfg.gaussian.moment_tol);
    maybe(t, "dual_path", cfg.gaussian.dual_tol);
    maybe(t, "fk", cfg.fock.fk_tol);
    maybe(t, "spectrum", cfg.fock.spectrum_tol);
    for (auto it = t.begin(); it != t.end(); ++it) {
      require(it.value().is_number() && it.value().get<double>() > 0.0,
              "config: tolerance '" + it.key() + "' must be a positive number");
    }
  }
  if (doc.contains("symbols")) {
    const auto& s = doc.at("symbols");
    reject_unknown_keys(s, {"samples", "velocities", "dims", "range"}, "symbols");
    maybe(s, "samples", cfg.symbols.samples);
    maybe(s, "velocities", cfg.symbols.velocities);
    maybe(s, "dims", cfg.symbols.dims);
    maybe(s, "range", cfg.symbols.range);
  }
  if (doc.contains("kernels")) {
    const auto& s = doc.at("kernels");
    reject_unknown_keys(s, {"grid_n", "velocities", "t_min", "t_max", "x_max"}, "kernels");
    maybe(s, "grid_n", cfg.kernels.grid_n);
    maybe(s, "velocities", cfg.kernels.velocities);
    maybe(s, "t_min", cfg.kernels.t_min);
    maybe(s, "t_max", cfg.kernels.t_max);
    maybe(s, "x_max", cfg.kernels.x_max);
  }
  if (doc.contains("rp")) {
    const auto& s = doc.at("rp");
    reject_unknown_keys(s, {"members", "gram_seeds", "velocities", "modes", "length"}, "rp");
    maybe(s, "members", cfg.rp.members);
    maybe(s, "gram_seeds", cfg.rp.gram_seeds);
    maybe(s, "velocities", cfg.rp.velocities);
    maybe(s, "modes", cfg.rp.modes);
    maybe(s, "length", cfg.rp.length);
  }
  if (doc.contains("periodize")) {
    const auto& s = doc.at("periodize");
    reject_unknown_keys(s, {"beta", "n_winding", "matsubara_max", "velocities", "torus_lengths"},
                        "periodize");
    maybe(s, "beta", cfg.periodize.beta);
    maybe(s, "n_winding", cfg.periodize.n_winding);
    maybe(s, "matsubara_max", cfg.periodize.matsubara_max);
    maybe(s, "velocities", cfg.periodize.velocities);
    maybe(s, "torus_lengths", cfg.periodize.torus_lengths);
  }
  if (doc.contains("thermal")) {
    const auto& s = doc.at("thermal");
    reject_unknown_keys(s, {"beta", "modes", "length", "velocities"}, "thermal");
    maybe(s, "beta", cfg.thermal.beta);
    maybe(s, "modes", cfg.thermal.modes);
    maybe(s, "length", cfg.thermal.length);
    maybe(s, "velocities", cfg.thermal.velocities);
  }
  if (doc.contains("gaussian")) {
    const auto& s = doc.at("gaussian");
    reject_unknown_keys(s, {"modes", "field_samples"}, "gaussian");
    maybe(s, "modes", cfg.gaussian.modes);
    maybe(s, "field_samples", cfg.gaussian.field_samples);
  }
  if (doc.contains("fock")) {
    const auto& s = doc.at("fock");
    reject_unknown_keys(s, {"ell", "mass", "mode_cutoff", "max_particles", "lambda", "velocities",
                            "beta", "dimension_cap", "refine"},
                        "fock");
    maybe(s, "ell", cfg.fock.ell);
    maybe(s, "mass", cfg.fock.mass);
    maybe(s, "mode_cutoff", cfg.fock.mode_cutoff);
    maybe(s, "max_particles", cfg.fock.max_particles);
    maybe(s, "lambda", cfg.fock.lambda);
    maybe(s, "velocities", cfg.fock.velocities);
    maybe(s, "beta", cfg.fock.beta);
    maybe(s, "dimension_cap", cfg.fock.dimension_cap);
    maybe(s, "refine", cfg.fock.refine);
  }
  return cfg;
}

}  // namespace

std::string describe_available_suites() {
  return "symbols kernels rp periodize thermal gaussian fock";
}

int run_from_config(const std::string& config_json_text, const std::string& out_override,
                    const std::vector<std::string>& suite_override, long seed_override,
                    int jobs_override) {
  RunConfig cfg;
  try {
    if (!config_json_text.empty()) {
      cfg = parse_config(json::parse(config_json_text));
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (!suite_override.empty()) cfg.suites = suite_override;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (jobs_override > 0) cfg.jobs = jobs_override;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "i/o error: cannot create %s\n", cfg.out_dir.c_str());
    return 3;
  }

  const std::set<std::string> known{"symbols", "kernels", "rp",      "periodize",
                                    "thermal", "gaussian", "fock"};
  for (const auto& s : cfg.suites) {
    if (known.count(s) == 0) {
      std::fprintf(stderr, "config error: unknown suite '%s' (available: %s)\n", s.c_str(),
                   describe_available_suites().c_str());
      return 2;
    }
  }

  bool all_pass = true;
  json summary = json::array();
  for (const auto& name : cfg.suites) {
    SuiteResult r;
    try {
      if (name == "symbols") r = run_symbols_suite(cfg);
      else if (name == "kernels") r = run_kernels_suite(cfg, cfg.out_dir);
      else if (name == "rp") r = run_rp_suite(cfg);
      else if (name == "periodize") r = run_periodize_suite(cfg, cfg.out_dir);
      else if (name == "thermal") r = run_thermal_suite(cfg);
      else if (name == "gaussian") r = run_gaussian_suite(cfg);
      else if (name == "fock") r = run_fock_suite(cfg, cfg.out_dir);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "suite %s raised: %s\n", name.c_str(), e.what());
      return 1;
    }
    const json doc = to_json(r, cfg.seed);
    std::ofstream os(cfg.out_dir + "/" + name + ".json");
    if (!os.good()) {
      std::fprintf(stderr, "i/o error: cannot write report for %s\n", name.c_str());
      return 3;
    }
    os << doc.dump(2) << "\n";
    for (const auto& c : r.checks) {
      summary.push_back({{"suite", name}, {"check", c.name}, {"statement", c.statement},
                         {"pass", c.pass}});
      std::printf("[%s] %-28s %s\n", c.pass ? "pass" : "FAIL", (name + ":" + c.name).c_str(),
                  c.statement.c_str());
      if (!c.pass) all_pass = false;
    }
  }
  {
    std::ofstream os(cfg.out_dir + "/summary.json");
    if (!os.good()) return 3;
    os << json{{"schema", 1}, {"seed", cfg.seed}, {"pass", all_pass}, {"table", summary}}.dump(2)
       << "\n";
  }
  if (cfg.suites.empty()) std::printf("no suites selected; nothing to do\n");
  return all_pass ? 0 : 1;
}

}  // namespace pwick::suites
