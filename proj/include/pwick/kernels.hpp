#pragma once

#include "pwick/grid.hpp"
#include "pwick/quadrature.hpp"

namespace pwick::kernels {

using symbols::BoostSpec;

// Configuration-space kernel on flat R^d,
//   D(t, x) = (2 pi)^{-(d-1)} Int dk  e^{-|t| mu(k) + t delta(k) + i k.x} / (2 mu(k)),
// with the exact closed form in the time direction and composite
// Gauss-Legendre quadrature over momentum.  d = 2 uses a single axis,
// d = 3, 4 tensor rules (slow; meant for spot checks).
SampledKernel kernel_continuum(const GridSpec& grid, const BoostSpec& b);

// Reflected kernels on the positive half-space:
//   thetaD : e^{-(t+t') mu_+}/(2 mu)  sampled against (u = t+t', dx)
//   Dtheta : same with mu_-
//   piD    : e^{ k_-(E) (x1+x1') }/(2 nu)  sampled against (tau = t-t', w = x1+x1')
//   Dpi    : same with -k_+ in place of k_-
// piD/Dpi are implemented for d = 2.
SampledKernel reflected_kernel(const GridSpec& grid, const BoostSpec& b, KernelKind kind);

struct SymmetryReport {
  double max_even_violation = 0.0;       // |D(-x) - D(x)|
  double max_theta_violation = 0.0;      // |D(theta x) - conj D(x)|
  double max_pi_violation = 0.0;         // |D(pi_n x) - conj D(x)|
  double max_theta_pi_violation = 0.0;   // |D(theta pi x) - D(x)| (double conjugation)
  std::size_t compared = 0;
};

// Requires a reflection-closed grid (time points and space points closed
// under negation).  Violations land in the report, nothing throws.
SymmetryReport verify_kernel_symmetries(const SampledKernel& kern);

// Independent dual route for d = 2: evaluates the full 2-D Fourier integral
// of the symbol 1/((E+i delta)^2 + mu^2) by trapezoidal lattice sums in E and
// k with analytic integration-by-parts tail corrections in E.  Shares no code
// with kernel_continuum beyond the symbol itself.
struct FftOracleSpec {
  double delta_e = 0.098;     // E lattice spacing (Poisson image period 2pi/dE)
  double e_window = 0.0;      // half-width W; 0 => derived from t range
  double delta_k = 0.22;      // k lattice spacing
  double k_window = 0.0;      // 0 => derived from tail decay at min |t|
};

std::vector<std::vector<complexd>> kernel_fft_oracle(const GridSpec& grid, const BoostSpec& b,
                                                     FftOracleSpec spec = {});

// Exact per-mode time profile e^{-|t| mu + t delta}/(2 mu); exposed because
// several modules build mode sums out of it.
complexd time_profile(double t, double mu, double delta);

}  // namespace pwick::kernels
