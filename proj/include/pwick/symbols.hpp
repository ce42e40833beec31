#pragma once

#include <array>
#include <string>
#include <vector>

#include "pwick/common.hpp"

namespace pwick::symbols {

// Boosted free field of mass m at velocity |v| < 1 in spacetime dimension d.
// eta = artanh|v| is the rapidity, so cosh(eta) = (1 - v^2)^{-1/2}.
//
// Normalization convention used throughout: symbols are the unnormalized
// rational functions 1/((E + i*delta)^2 + mu^2); every 2*pi lives in the
// Fourier operations of the kernel module, nowhere else.
struct BoostSpec {
  double mass = 1.0;
  std::vector<double> velocity;   // length d-1
  std::vector<double> direction;  // unit vector, = velocity/|velocity| when v != 0
  double rapidity = 0.0;          // eta = artanh|velocity|
  int dim = 2;

  static BoostSpec make(double mass, std::vector<double> velocity);
  // Convenience for d=2 (single spatial direction).
  static BoostSpec make1d(double mass, double v) { return make(mass, {v}); }

  double speed() const;
  double cosh_eta() const { return std::cosh(rapidity); }
  double sinh_eta() const { return std::sinh(rapidity); }
  double tanh_eta() const { return std::tanh(rapidity); }
  // m * sqrt(1 - v^2), the uniform lower bound on mu_pm.
  double mass_gap() const { return mass / cosh_eta(); }

  BoostSpec reversed() const;  // velocity -> -velocity
};

struct Momentum {
  double energy = 0.0;
  std::vector<double> kvec;   // length d-1
  std::vector<double> kperp;  // component of kvec orthogonal to direction, length d-2 semantics

  static Momentum make(double energy, std::vector<double> kvec, const BoostSpec& b);
};

struct SymbolBundle {
  double mu = 0.0;        // sqrt(|k|^2 + m^2)
  double delta = 0.0;     // k . v
  double mu_plus = 0.0;   // mu + delta
  double mu_minus = 0.0;  // mu - delta
  complexd d_tilde;       // 1/((E+i delta)^2 + mu^2)
  double k_tilde = 0.0;   // hermitian part
  double l_tilde = 0.0;   // skew part
  complexd sigma_tilde;   // principal square root of d_tilde, Re > 0
};

struct SpatialSymbolBundle {
  double nu = 0.0;
  double nu_plus = 0.0;
  double nu_minus = 0.0;
  double k_plus = 0.0;   // > 0
  double k_minus = 0.0;  // < 0
};

// Scalar building blocks (valid for any spatial momentum vector).
double mu_of(const std::vector<double>& kvec, const BoostSpec& b);
double delta_of(const std::vector<double>& kvec, const BoostSpec& b);

// d=2 shortcuts, used heavily by the mode-lattice modules.
inline double mu1(double k, const BoostSpec& b) { return std::hypot(k, b.mass); }
inline double delta1(double k, const BoostSpec& b) {
  return b.velocity.empty() ? 0.0 : k * b.velocity[0];
}
inline double mu_pm1(double k, const BoostSpec& b, int sign) {
  return mu1(k, b) + sign * delta1(k, b);
}

SymbolBundle one_particle_symbols(const Momentum& k, const BoostSpec& b);

complexd propagator_symbol(const Momentum& k, const BoostSpec& b);
complexd propagator_symbol(double energy, double mu, double delta);

std::pair<double, double> split_symbols(const Momentum& k, const BoostSpec& b);

complexd sigma_symbol(const Momentum& k, const BoostSpec& b);

SpatialSymbolBundle spatial_symbols(double energy, const std::vector<double>& kperp,
                                    const BoostSpec& b);

// One verified inequality family at one sample point.
struct BoundViolation {
  std::string family;
  double energy;
  std::vector<double> kvec;
  double lhs, rhs;
};

struct BoundReport {
  std::size_t samples = 0;
  std::vector<BoundViolation> violations;
  // sup of |l~/k~| over the designated sequence k.n = |k| = -E cosh(eta); the
  // bound sinh|eta| is approached from below, never attained.
  double ratio_sup_estimate = 0.0;
  double ratio_sup_target = 0.0;  // sinh|eta|
  bool pass() const { return violations.empty(); }
};

// Pointwise verification of the five bound families
//   (a) k~ <= |d~| <= cosh(eta) k~
//   (b) (1/2) sech^2(eta) C~ < k~ < cosh^4(eta) C~
//   (c) |l~| < sinh(eta) k~            (equality only at v = 0)
//   (d) (1/2) sech^2(eta) C~ < |d~| < cosh^5(eta) C~
//   (e) sup |l~/k~| -> sinh(eta) along the designated sequence
// with C~ = 1/(E^2 + mu^2).  Violations are reported, not thrown.
BoundReport verify_symbol_bounds(const std::vector<Momentum>& samples, const BoostSpec& b);

}  // namespace pwick::symbols
