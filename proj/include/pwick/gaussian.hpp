#pragma once

#include "pwick/periodize.hpp"
#include "pwick/rp.hpp"

namespace pwick::gaussian {

using lattice::SpatialFunction;
using lattice::SpatialLattice;
using symbols::BoostSpec;

// Classical moments are multilinear: S_2(f,g) = Int f(x) D(x-x') g(x') with
// no complex conjugation anywhere.  Fields are windowed time profiles
// tensored with mode vectors (rp::TestMember layout, support anywhere on the
// time axis for the flat route, inside the circle for the thermal one).
enum class CovarianceRoute { flat, thermal_circle };
enum class PairingMode { pairing_sum, recursion };

struct MomentField {
  rp::TestMember fn;  // profile window may sit anywhere (lo < hi, lo may be < 0)
};

struct MomentRequest {
  std::vector<MomentField> fields;
  CovarianceRoute route = CovarianceRoute::flat;
  PairingMode pairing_mode = PairingMode::pairing_sum;
  SpatialLattice lat;
  BoostSpec boost;
  double beta = 0.0;  // thermal route only
  int quad_nodes = 48;
};

double double_factorial_odd(int n);  // (2n-1)!!

// Bilinear pair covariance S_2(f, g) along the selected route.
complexd pair_covariance(const MomentField& f, const MomentField& g, const MomentRequest& req);

// Moment by the mode selected in the request: the explicit sum over perfect
// pairings ((2n-1)!! terms), or the S_n = (n-1) S_2 S_{n-2} recursion (the
// latter requires identical arguments).  The two modes agree.
complexd wick_moment(const MomentRequest& req);

// Moment via the explicit sum over perfect pairings.
complexd wick_moment_pairing(const MomentRequest& req);

// Moment of identical arguments via the recursion S_n = (n-1) S_2 S_{n-2}.
complexd wick_moment_recursion(complexd s2, int n);

// Mixed moment rebuilt from the power recursion by polarization; an
// independent oracle against the pairing sum (2^n power evaluations).
complexd wick_moment_polarized(const MomentRequest& req);

// Quantized norm ||phi(h)^n Omega||^2 = (2n-1)!! <h,h>^n_{-1/2}.
double quantized_norm(const SpatialFunction& h, int n, const BoostSpec& b);
// The same number as the 2n-point classical moment of f = delta (x) h through
// the reflected sharp-time covariance, summed pairing by pairing.
double quantized_norm_via_pairings(const SpatialFunction& h, int n, const BoostSpec& b);
// Thermal variant: (2n-1)!! <f^, f^>^n_{H1} with the doubled inner product.
double quantized_norm_thermal(const SpatialFunction& h, int n, const periodize::CompactSpec& spec,
                              int sign);
double quantized_norm_thermal_via_pairings(const SpatialFunction& h, int n,
                                           const periodize::CompactSpec& spec, int sign);

// ||  |D_v|^{1/2} f ||^2 <= cosh^5(eta) || C^{1/2} f ||^2 on a spacetime
// Fourier lattice ((E_j, k_i) modes with coefficients f(j,i)).
struct FieldVectorBoundReport {
  double lhs = 0.0;          // sum |d~| |f|^2
  double rhs_weight = 0.0;   // sum C~ |f|^2
  double ratio = 0.0;        // lhs / rhs_weight
  double bound = 0.0;        // cosh^5(eta)
  bool pass() const { return ratio <= bound * (1.0 + 1e-12); }
};
FieldVectorBoundReport field_vector_bound(const std::vector<double>& e_nodes,
                                          const SpatialLattice& lat,
                                          const std::vector<std::vector<complexd>>& coeff,
                                          const BoostSpec& b);

}  // namespace pwick::gaussian
