#pragma once

#include "pwick/lattice.hpp"
#include "pwick/quadrature.hpp"
#include "pwick/rp.hpp"
#include "pwick/symbols.hpp"

namespace pwick::periodize {

using symbols::BoostSpec;

// Time circle of circumference beta (the inverse temperature), optionally
// with compactified spatial directions.
struct CompactSpec {
  double beta = 1.0;
  std::vector<double> lengths;  // empty: spatial directions stay flat
  BoostSpec boost;

  static CompactSpec make(double beta, BoostSpec boost, std::vector<double> lengths = {});
};

struct MatsubaraLattice {
  double beta = 1.0;
  int max_index = 0;  // |n| <= max_index, E_n = 2 pi n / beta

  static MatsubaraLattice make(double beta, int max_index);
  double frequency(int n) const { return kTwoPi * n / beta; }
  std::size_t size() const { return static_cast<std::size_t>(2 * max_index + 1); }
};

// Bose factor rho = e^{-beta m}/(1 - e^{-beta m}); overflow-safe for large
// beta*m (returns 0 in the deep-underflow regime).
double rho_of(double beta, double mu_pm);
double rho_factor(const std::vector<double>& kvec, const CompactSpec& spec, int sign);
// Uniform bound (e^{m beta sqrt(1-v^2)} - 1)^{-1}.
double rho_bound(const CompactSpec& spec);

// ---- per-mode cylinder kernels (one spatial Fourier mode, fixed mu/delta) --

// Closed two-branch form; exactly periodic in t - t'.
complexd cylinder_mode_closed(double t, double tp, double beta, double mu, double delta);

// Truncated winding-image sum of flat kernels; *tail_bound receives
// 2 max(rho) e^{-(n_max - 1) beta (mu - |delta|)}.
complexd cylinder_mode_winding(double t, double tp, double beta, double mu, double delta,
                               int n_max, double* tail_bound = nullptr);

// Truncated Matsubara sum (1/beta) sum_E e^{iE(t-t')}/((E+i delta)^2+mu^2).
// accelerate = true subtracts the analytically summable v = 0 part (whose
// full sum is the textbook cosh/sinh form) and sums only the remainder,
// which decays two orders faster after +-E pairing.
complexd cylinder_mode_matsubara(double t, double tp, double beta, double mu, double delta,
                                 const MatsubaraLattice& lat, bool accelerate = true);

// v = 0 closed form cosh(mu(beta/2 - |dt|))/(2 mu sinh(beta mu/2)).
double cylinder_mode_closed_v0(double dt, double beta, double mu);

// Reflected cylinder mode factor (theta D^c)(s, s'):
//   [(1 + rho_+) e^{-(s+s') mu_+} + rho_- e^{+(s+s') mu_-}]/(2 mu)   (sign +)
// and the mu_+/mu_- swap for sign - (D^c theta).
complexd theta_dc_mode(double s, double sp, double beta, double mu, double delta, int sign = +1);

// ---- spatially resolved kernels ---------------------------------------

// Cylinder kernel on S^1_beta x R^{d-1} at spatial separation xdiff,
// momentum integral via composite Gauss-Legendre (d = 2).
complexd cylinder_kernel(double t, double tp, double xdiff, const CompactSpec& spec,
                         double momentum_cutoff = 0.0, int nodes_per_panel = 16);

// Fully compactified kernel D^c_{sign, beta, Lambda}(x - x'): mode sum over
// the dual lattice of `lengths` with the two-branch thermal factor.
complexd torus_kernel(double t, double tp, const std::vector<double>& xdiff,
                      const CompactSpec& spec, const std::vector<int>& cutoffs, int sign = +1);

// ---- verification ------------------------------------------------------

// Pointwise bounds on the compactified symbol over Matsubara x momentum
// samples, constants in terms of a = 1 - v^2; C^c is the v = 0 symbol on the
// same lattice.
symbols::BoundReport verify_compact_bounds(const std::vector<std::pair<int, std::vector<double>>>& samples,
                                           const MatsubaraLattice& lat, const CompactSpec& spec);

// Gram of <f_i, theta D^c f_j> for members supported in t in (0, beta/2).
rp::GramReport gram_reflection_compact(const rp::TestFunctionFamily& fam,
                                       const CompactSpec& spec, double tolerance = 1e-10,
                                       int quad_nodes = 48);

// Sharp-time embedding constant: the ratio of the Matsubara sum
// (1/beta) sum_E 1/(E^2 + mu^2) to its Riemann integral 1/(2 mu), maximised
// over the lattice; equals 1 + 2 rho(mu(k)) at the minimizing mode.
double sharp_time_embedding_constant(const lattice::SpatialLattice& lat, const CompactSpec& spec);

}  // namespace pwick::periodize
