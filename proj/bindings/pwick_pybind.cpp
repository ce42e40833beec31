#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pwick/fock.hpp"
#include "pwick/gaussian.hpp"
#include "pwick/kernels.hpp"
#include "pwick/periodize.hpp"
#include "pwick/suites.hpp"
#include "pwick/thermal.hpp"

namespace py = pybind11;
using namespace pwick;

PYBIND11_MODULE(_pwick, m) {
  m.doc() = "Boosted complex free-field covariances: symbols, kernels, "
            "reflection positivity, thermal doubling and truncated Fock spectra";

  // ---- symbols ----
  py::class_<symbols::BoostSpec>(m, "BoostSpec")
      .def(py::init([](double mass, std::vector<double> velocity) {
             return symbols::BoostSpec::make(mass, std::move(velocity));
           }),
           py::arg("mass"), py::arg("velocity"))
      .def_readonly("mass", &symbols::BoostSpec::mass)
      .def_readonly("velocity", &symbols::BoostSpec::velocity)
      .def_readonly("rapidity", &symbols::BoostSpec::rapidity)
      .def_readonly("dim", &symbols::BoostSpec::dim)
      .def("mass_gap", &symbols::BoostSpec::mass_gap);

  py::class_<symbols::SymbolBundle>(m, "SymbolBundle")
      .def_readonly("mu", &symbols::SymbolBundle::mu)
      .def_readonly("delta", &symbols::SymbolBundle::delta)
      .def_readonly("mu_plus", &symbols::SymbolBundle::mu_plus)
      .def_readonly("mu_minus", &symbols::SymbolBundle::mu_minus)
      .def_readonly("d_tilde", &symbols::SymbolBundle::d_tilde)
      .def_readonly("k_tilde", &symbols::SymbolBundle::k_tilde)
      .def_readonly("l_tilde", &symbols::SymbolBundle::l_tilde)
      .def_readonly("sigma_tilde", &symbols::SymbolBundle::sigma_tilde);

  m.def(
      "one_particle_symbols",
      [](double energy, std::vector<double> kvec, const symbols::BoostSpec& b) {
        return symbols::one_particle_symbols(
            symbols::Momentum::make(energy, std::move(kvec), b), b);
      },
      py::arg("energy"), py::arg("kvec"), py::arg("boost"));
  m.def(
      "propagator_symbol",
      [](double energy, std::vector<double> kvec, const symbols::BoostSpec& b) {
        return symbols::propagator_symbol(symbols::Momentum::make(energy, std::move(kvec), b),
                                          b);
      },
      py::arg("energy"), py::arg("kvec"), py::arg("boost"));
  m.def(
      "sigma_symbol",
      [](double energy, std::vector<double> kvec, const symbols::BoostSpec& b) {
        return symbols::sigma_symbol(symbols::Momentum::make(energy, std::move(kvec), b), b);
      },
      py::arg("energy"), py::arg("kvec"), py::arg("boost"));
  m.def(
      "verify_symbol_bounds",
      [](const std::vector<std::pair<double, std::vector<double>>>& samples,
         const symbols::BoostSpec& b) {
        std::vector<symbols::Momentum> ms;
        ms.reserve(samples.size());
        for (const auto& [e, k] : samples) ms.push_back(symbols::Momentum::make(e, k, b));
        const auto rep = symbols::verify_symbol_bounds(ms, b);
        py::dict d;
        d["samples"] = rep.samples;
        d["violations"] = rep.violations.size();
        d["ratio_sup_estimate"] = rep.ratio_sup_estimate;
        d["ratio_sup_target"] = rep.ratio_sup_target;
        d["pass"] = rep.pass();
        return d;
      },
      py::arg("samples"), py::arg("boost"));
  m.def(
      "spatial_symbols",
      [](double energy, std::vector<double> kperp, const symbols::BoostSpec& b) {
        const auto s = symbols::spatial_symbols(energy, kperp, b);
        py::dict d;
        d["nu"] = s.nu;
        d["nu_plus"] = s.nu_plus;
        d["nu_minus"] = s.nu_minus;
        d["k_plus"] = s.k_plus;
        d["k_minus"] = s.k_minus;
        return d;
      },
      py::arg("energy"), py::arg("kperp"), py::arg("boost"));

  // ---- kernels ----
  m.def(
      "kernel_continuum",
      [](std::vector<double> ts, std::vector<double> xs, const symbols::BoostSpec& b,
         double momentum_cutoff) {
        kernels::GridSpec grid = kernels::GridSpec::flat2d(std::move(ts), std::move(xs));
        grid.quad.momentum_cutoff = momentum_cutoff;
        return kernels::kernel_continuum(grid, b).values;
      },
      py::arg("time_points"), py::arg("x_points"), py::arg("boost"),
      py::arg("momentum_cutoff") = 0.0,
      "Flat d=2 kernel values on the grid (exact time factor, "
      "Gauss-Legendre momentum quadrature)");
  m.def(
      "kernel_fft_oracle",
      [](std::vector<double> ts, std::vector<double> xs, const symbols::BoostSpec& b) {
        const kernels::GridSpec grid = kernels::GridSpec::flat2d(std::move(ts), std::move(xs));
        return kernels::kernel_fft_oracle(grid, b);
      },
      py::arg("time_points"), py::arg("x_points"), py::arg("boost"),
      "Independent Fourier-lattice evaluation of the same kernel");

  // ---- periodize ----
  m.def("rho_factor", &periodize::rho_of, py::arg("beta"), py::arg("mu_pm"));
  m.def(
      "cylinder_mode",
      [](double t, double tp, double beta, double mu, double delta, const std::string& route,
         int order) {
        if (route == "closed") return periodize::cylinder_mode_closed(t, tp, beta, mu, delta);
        if (route == "winding") {
          return periodize::cylinder_mode_winding(t, tp, beta, mu, delta, order);
        }
        if (route == "matsubara") {
          const auto lat = periodize::MatsubaraLattice::make(beta, order);
          return periodize::cylinder_mode_matsubara(t, tp, beta, mu, delta, lat, true);
        }
        throw std::invalid_argument("route must be closed|winding|matsubara");
      },
      py::arg("t"), py::arg("tp"), py::arg("beta"), py::arg("mu"), py::arg("delta"),
      py::arg("route") = "closed", py::arg("order") = 64,
      "Time-periodized kernel mode by the closed form, winding sum or "
      "accelerated Matsubara sum");
  m.def(
      "torus_kernel",
      [](double t, double tp, std::vector<double> xdiff, double beta, double mass,
         std::vector<double> velocity, std::vector<double> lengths, std::vector<int> cutoffs,
         int sign) {
        const auto spec = periodize::CompactSpec::make(
            beta, symbols::BoostSpec::make(mass, std::move(velocity)), std::move(lengths));
        return periodize::torus_kernel(t, tp, xdiff, spec, cutoffs, sign);
      },
      py::arg("t"), py::arg("tp"), py::arg("xdiff"), py::arg("beta"), py::arg("mass"),
      py::arg("velocity"), py::arg("lengths"), py::arg("cutoffs"), py::arg("sign") = 1);

  // ---- thermal ----
  auto make_spec = [](double beta, double mass, double v) {
    return periodize::CompactSpec::make(beta, symbols::BoostSpec::make1d(mass, v));
  };
  m.def(
      "one_particle_kms_residual",
      [make_spec](double beta, double mass, double v, int modes, std::uint64_t seed, int sign) {
        const auto spec = make_spec(beta, mass, v);
        const auto lat = lattice::SpatialLattice::make1d(kTwoPi, modes);
        Rng rng(seed);
        const auto a = lattice::SpatialFunction::random_real(lat, rng);
        const auto ap = lattice::SpatialFunction::random_real(lat, rng);
        const auto rep =
            thermal::one_particle_kms_check(a, ap, {0.0, 0.7, -1.3, 2.9}, spec, sign);
        return rep.max_residual / std::max(rep.scale, 1e-300);
      },
      py::arg("beta"), py::arg("mass"), py::arg("velocity"), py::arg("modes") = 16,
      py::arg("seed") = 1, py::arg("sign") = 1);
  m.def(
      "modular_residuals",
      [make_spec](double beta, double mass, double v, int modes, std::uint64_t seed, int sign) {
        const auto spec = make_spec(beta, mass, v);
        const auto lat = lattice::SpatialLattice::make1d(kTwoPi, modes);
        const auto rep = thermal::modular_check(spec, sign, lat, seed, 6);
        py::dict d;
        d["j_kappa"] = rep.j_kappa_residual;
        d["j_squared"] = rep.j_squared_residual;
        d["tomita_action"] = rep.tomita_action_residual;
        d["polar"] = rep.polar_residual;
        d["half_shift"] = rep.half_shift_residual;
        return d;
      },
      py::arg("beta"), py::arg("mass"), py::arg("velocity"), py::arg("modes") = 16,
      py::arg("seed") = 1, py::arg("sign") = 1);
  m.def(
      "liouvillian_gap",
      [make_spec](double beta, double mass, double v, int modes, int sign) {
        const auto spec = make_spec(beta, mass, v);
        const auto lat = lattice::SpatialLattice::make1d(kTwoPi, modes);
        return thermal::liouvillian_spectrum(lat, spec, sign).gap;
      },
      py::arg("beta"), py::arg("mass"), py::arg("velocity"), py::arg("modes") = 16,
      py::arg("sign") = 1);

  // ---- gaussian ----
  m.def("double_factorial_odd", &gaussian::double_factorial_odd, py::arg("n"));
  m.def(
      "quantized_norm",
      [](std::vector<complexd> coeff, int n, double mass, double v, double length) {
        const auto lat = lattice::SpatialLattice::make1d(
            length, static_cast<int>((coeff.size() - 1) / 2));
        require(coeff.size() == lat.size(), "quantized_norm: need an odd number of modes");
        lattice::SpatialFunction h{lat, std::move(coeff)};
        return gaussian::quantized_norm(h, n, symbols::BoostSpec::make1d(mass, v));
      },
      py::arg("mode_coefficients"), py::arg("n"), py::arg("mass") = 1.0,
      py::arg("velocity") = 0.0, py::arg("length") = kTwoPi,
      "(2n-1)!! <h,h>^n_{-1/2} for mode coefficients on a symmetric lattice");
  m.def(
      "quantized_norm_via_pairings",
      [](std::vector<complexd> coeff, int n, double mass, double v, double length) {
        const auto lat = lattice::SpatialLattice::make1d(
            length, static_cast<int>((coeff.size() - 1) / 2));
        require(coeff.size() == lat.size(),
                "quantized_norm_via_pairings: need an odd number of modes");
        lattice::SpatialFunction h{lat, std::move(coeff)};
        return gaussian::quantized_norm_via_pairings(h, n,
                                                     symbols::BoostSpec::make1d(mass, v));
      },
      py::arg("mode_coefficients"), py::arg("n"), py::arg("mass") = 1.0,
      py::arg("velocity") = 0.0, py::arg("length") = kTwoPi,
      "The same moment rebuilt by explicit enumeration of the (2n-1)!! pairings");

  // ---- fock ----
  m.def(
      "spectrum_condition",
      [](double ell, double mass, int mode_cutoff, int max_particles, double lambda,
         std::vector<double> velocities, double tolerance, std::size_t dimension_cap) {
        const auto trunc =
            fock::FockTruncation::make(ell, mass, mode_cutoff, max_particles, dimension_cap);
        const auto ops = fock::build_operators(trunc, fock::PolySpec::phi4(lambda));
        const auto rep = fock::spectrum_condition(ops, velocities, tolerance);
        py::list rows;
        for (const auto& r : rep.per_velocity) {
          py::dict d;
          d["v"] = r.v;
          d["min_eig"] = r.min_eig;
          d["ground_sector_momentum"] = r.ground_sector_momentum;
          d["gap"] = r.gap;
          d["ph_bound_pass"] = r.ph_bound_pass;
          rows.append(d);
        }
        py::dict out;
        out["dimension"] = trunc.dimension;
        out["ground_energy"] = ops.ground_energy;
        out["per_velocity"] = rows;
        out["pass"] = rep.pass();
        return out;
      },
      py::arg("ell"), py::arg("mass"), py::arg("mode_cutoff"), py::arg("max_particles"),
      py::arg("lambda_phi4"), py::arg("velocities"), py::arg("tolerance") = 1e-8,
      py::arg("dimension_cap") = 20000,
      "Exact diagonalization of the truncated quartic Hamiltonian per "
      "momentum sector, spectrum condition for H + vP");

  // ---- suites ----
  m.def(
      "run_suites",
      [](const std::string& config_json, const std::string& out_dir,
         std::vector<std::string> suites, long seed, int jobs) {
        return suites::run_from_config(config_json, out_dir, std::move(suites), seed, jobs);
      },
      py::arg("config_json") = "", py::arg("out_dir") = "reports",
      py::arg("suites") = std::vector<std::string>{}, py::arg("seed") = -1, py::arg("jobs") = 0,
      "Run the verification suites exactly as the CLI does; returns the exit status");
  m.def("available_suites", &suites::describe_available_suites);
}
