#pragma once

#include "pwick/lattice.hpp"
#include "pwick/periodize.hpp"

namespace pwick::thermal {

using lattice::SpatialFunction;
using lattice::SpatialLattice;
using periodize::CompactSpec;
using symbols::BoostSpec;

// One-particle thermal vector in h_{-1/2} (+) conj(h_{-1/2}).
//
// Concrete storage: two plain coefficient arrays (A, B) over the mode
// lattice, with the plain inner product sum_k [conj(A1)A2 + conj(B1)B2]/(2mu).
// The conjugate-slot bookkeeping (reversed inner product, conjugated scalars)
// is absorbed into the maps below, which keeps every map a plain array
// operation and makes anti-linearity directly testable.
struct DoubledVector {
  SpatialLattice lat;
  std::vector<complexd> a;  // analytic slot
  std::vector<complexd> b;  // conjugate slot (stored coefficients)

  static DoubledVector zero(const SpatialLattice& lat);
  DoubledVector& operator+=(const DoubledVector& o);
  DoubledVector& operator*=(complexd z);
};

complexd inner(const DoubledVector& u, const DoubledVector& v, const BoostSpec& b);
double norm2(const DoubledVector& u, const BoostSpec& b);

// Araki-Woods doubling maps.  kappa is linear, kappa_prime anti-linear:
//   kappa_pm(alpha)       = ((1+rho_pm)^{1/2} alpha_k,  rho_mp^{1/2} alpha_k)
//   kappa_prime_pm(alpha) = (rho_pm^{1/2} conj(alpha_{-k}), (1+rho_mp)^{1/2} conj(alpha_{-k}))
// For real alpha, kappa_prime = e^{-beta l/2} kappa.
DoubledVector kappa(const SpatialFunction& alpha, const CompactSpec& spec, int sign);
DoubledVector kappa_prime(const SpatialFunction& alpha, const CompactSpec& spec, int sign);

// Thermal quantization of a positive-time function on S^1_+ x T^{d-1},
// given as a windowed profile tensor a mode vector (rp::TestMember layout):
//   A(k) = (1+rho_pm)^{1/2} Int_0^{beta/2} e^{-t mu_pm(k)} f_t(k) dt
//   B(k) = rho_mp^{1/2}     Int_0^{beta/2} e^{+t mu_mp(k)} f_t(k) dt
DoubledVector thermal_quantize(const rp::TestMember& f, const SpatialLattice& lat,
                               const CompactSpec& spec, int sign, int quad_nodes = 64);

// Sharp-time pairing <quantized delta_s x alpha, quantized delta_s' x alpha'>;
// equals <alpha, (theta D^c)(s,s') alpha'> for sign +, the conjugate kernel
// for sign -.
complexd sharp_time_inner(double s, const SpatialFunction& alpha, double sp,
                          const SpatialFunction& alpha_p, const CompactSpec& spec, int sign);

// Quantized sharp-time vector e^{-s l_pm} kappa_pm(alpha).
DoubledVector sharp_time_vector(double s, const SpatialFunction& alpha, const CompactSpec& spec,
                                int sign);

// e^{-z l_pm}: A(k) *= e^{-z mu_pm(k)}, B(k) *= e^{+z mu_mp(k)}; holomorphic
// in z, so purely imaginary z = -it gives the unitary group e^{it l}.
DoubledVector liouvillian_translate(const DoubledVector& u, complexd z, const CompactSpec& spec,
                                    int sign);

// Per-mode generator values (mu_pm(k) on the first slot, -mu_mp(k) on the
// second); the minimum of |value| over the lattice is the spectral gap,
// bounded below by m sqrt(1 - v^2).
struct LiouvillianSpectrum {
  std::vector<double> first_slot;
  std::vector<double> second_slot;
  double gap = 0.0;
};
LiouvillianSpectrum liouvillian_spectrum(const SpatialLattice& lat, const CompactSpec& spec,
                                         int sign);

// Modular conjugation j(A,B)(k) = (-conj(B(-k)), -conj(A(-k))); anti-unitary
// idempotent with j kappa = -kappa_prime.
DoubledVector modular_conjugation(const DoubledVector& u);

// Tomita map s = j e^{-beta l/2}.
DoubledVector tomita_s(const DoubledVector& u, const CompactSpec& spec, int sign);

struct KmsReport {
  double max_residual = 0.0;
  double scale = 0.0;
};

// One-particle beta-KMS residual
//   |<kappa a, e^{(is-beta) l} kappa a'> - <e^{is l} kappa a', kappa a>|
// over real-valued test functions a, a'.
KmsReport one_particle_kms_check(const SpatialFunction& alpha, const SpatialFunction& alpha_p,
                                 const std::vector<double>& s_samples, const CompactSpec& spec,
                                 int sign);

struct ModularReport {
  double j_kappa_residual = 0.0;        // j kappa + kappa' on the spanning set
  double j_squared_residual = 0.0;      // j^2 - id on random doubled vectors
  double tomita_action_residual = 0.0;  // s(kappa a + i kappa a') + kappa a - i kappa a'
  double polar_residual = 0.0;          // s vs j e^{-beta l/2} composed stepwise
  double half_shift_residual = 0.0;     // e^{-beta l/2} kappa a - kappa' a, real a
};
ModularReport modular_check(const CompactSpec& spec, int sign, const SpatialLattice& lat,
                            std::uint64_t seed, int spanning_count = 8);

struct DensityReport {
  double sigma_min = 0.0;           // two-slice map, min over modes
  double sigma_min_one_slice = 0.0; // best rank-1 approximation gap (0 = deficient)
  double contraction_factor = 0.0;  // 1 - e^{-2(s2-s1) m}
};
DensityReport sharp_time_density_check(double s1, double s2, const SpatialLattice& lat,
                                       const CompactSpec& spec, int sign);

// Thermal two-point function G(t) = <kappa a, e^{it l} kappa a'>, its KMS
// boundary residual |F(t + i beta) - F~(t)| over t samples, and the
// commutator residual |Im <e^{is l} kappa a, e^{it l} kappa' a'>|.
complexd thermal_two_point(const SpatialFunction& alpha, const SpatialFunction& alpha_p,
                           double t, const CompactSpec& spec, int sign);
complexd thermal_two_point_continued(const SpatialFunction& alpha, const SpatialFunction& alpha_p,
                                     complexd z, const CompactSpec& spec, int sign);
double two_point_kms_residual(const SpatialFunction& alpha, const SpatialFunction& alpha_p,
                              const std::vector<double>& t_samples, const CompactSpec& spec,
                              int sign);
double commutator_residual(const SpatialFunction& alpha, const SpatialFunction& alpha_p, double s,
                           double t, const CompactSpec& spec, int sign);

}  // namespace pwick::thermal
