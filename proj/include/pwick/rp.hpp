#pragma once

#include <Eigen/Dense>

#include "pwick/lattice.hpp"
#include "pwick/quadrature.hpp"

namespace pwick::rp {

using lattice::SpatialFunction;
using lattice::SpatialLattice;
using symbols::BoostSpec;

enum class HalfSpace { positive_time, negative_time, positive_x1 };
enum class Reflection { theta, pi_n };

// One test function: a profile along the reflected axis (windowed to
// [lo, hi], with lo > 0 so the support sits strictly inside the half-space)
// tensored with a transverse coefficient vector.  Gaussian bumps are the
// randomized family; indicator slabs give closed-form quantizations.
struct TestMember {
  enum class Profile { gaussian, indicator };
  Profile kind = Profile::gaussian;
  double center = 1.0;
  double width = 0.25;
  double lo = 0.0, hi = 0.0;  // window; derived from center/width when 0
  std::vector<complexd> amp;  // transverse coefficients

  double profile(double t) const;
  static TestMember slab(double lo, double hi, std::vector<complexd> amp);
};

// Transverse data: for the temporal reflections the amplitude lives on a
// spatial mode lattice; for the spatial reflection it lives on an E-quadrature
// sampling of the transverse frequency line.
struct TestFunctionFamily {
  HalfSpace half = HalfSpace::positive_time;
  std::vector<TestMember> members;
  SpatialLattice lat;       // temporal case
  QuadRule e_quad;          // spatial case
  std::uint64_t seed = 0;
  double condition_estimate = 0.0;  // L2 Gram condition number; flagged, not fatal

  static TestFunctionFamily random_temporal(const SpatialLattice& lat, int n_members,
                                            std::uint64_t seed, double support_hi = 2.0);
  static TestFunctionFamily random_spatial(int n_e_nodes, double e_span, int n_members,
                                           std::uint64_t seed, double support_hi = 2.0);
};

struct GramReport {
  Eigen::MatrixXcd matrix;
  std::vector<double> eigenvalues;  // sorted ascending
  double min_eig = 0.0;
  double hermiticity_deviation = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
  std::uint64_t family_seed = 0;
};

// Sobolev -1/2 pairing <a/sqrt(2 mu), b/sqrt(2 mu)>; the lattice
// implementation is this module's contract surface.
using lattice::sobolev_half_inner;

// Osterwalder-Schrader quantization: per spatial mode,
//   f^pm(k) = Int_0^inf e^{-t mu_pm(k)} f_t(k) dt
// with the stated quadrature resolution over the member's support.
SpatialFunction os_quantize(const TestMember& f, const SpatialLattice& lat, int sign,
                            const BoostSpec& b, int quad_nodes = 64);

// Gram matrix M_ij = <f_i, (reflection . D_v) f_j> assembled from the
// reflected kernel in the mixed (axis, transverse) representation.
// sign selects the operator ordering: +1 pairs theta D (rate mu_+) resp.
// pi_n D (kernel e^{k_- w}); -1 pairs D theta (mu_-) resp. D pi_n (e^{-k_+ w}).
GramReport gram_reflection(const TestFunctionFamily& fam, Reflection refl, const BoostSpec& b,
                           double tolerance = 1e-10, int quad_nodes = 48, int sign = +1);

struct IsometryReport {
  double max_plus_deviation = 0.0;   // |<f, thetaD g> - <f^+, g^+>|
  double max_minus_deviation = 0.0;  // |<f, D theta g> - <f^-, g^->|
  double scale = 0.0;
  bool pass(double tol) const {
    return max_plus_deviation <= tol * scale && max_minus_deviation <= tol * scale;
  }
};

// Dual-path check of the OS isometry; the classical side integrates the
// reflected kernel over the member supports, the quantum side pairs
// os_quantize outputs, deliberately on a different quadrature.
IsometryReport verify_isometry(const TestFunctionFamily& fam, const BoostSpec& b);

// Contraction of quantization: ||f^pm||_{-1/2}^2 <= <f, |D| f>, the classical
// one-particle norm, evaluated per mode by an E-quadrature of |d~|.
struct ContractionReport {
  double quantum_norm2 = 0.0;
  double classical_norm2 = 0.0;
  bool pass() const { return quantum_norm2 <= classical_norm2 * (1.0 + 1e-8); }
};
ContractionReport verify_contraction(const TestMember& f, const SpatialLattice& lat, int sign,
                                     const BoostSpec& b);

}  // namespace pwick::rp
