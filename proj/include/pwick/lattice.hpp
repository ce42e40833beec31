#pragma once

#include <vector>

#include "pwick/common.hpp"
#include "pwick/symbols.hpp"

namespace pwick::lattice {

// Symmetric momentum lattice of a spatial torus: modes k = 2*pi*n/l per axis,
// |n_j| <= cutoff_j.  Functions are stored as coefficient vectors with respect
// to the orthonormal basis e_k(x) = exp(i k.x)/sqrt(volume), so the plain l2
// sum of coefficients is the L2 inner product.
struct SpatialLattice {
  std::vector<double> lengths;  // circumference per axis
  std::vector<int> cutoffs;     // |n| <= cutoff per axis

  static SpatialLattice make(std::vector<double> lengths, std::vector<int> cutoffs);
  static SpatialLattice make1d(double length, int cutoff) {
    return make({length}, {cutoff});
  }

  int dims() const { return static_cast<int>(lengths.size()); }
  std::size_t size() const;  // number of modes
  // Mode vector for a flat index.
  std::vector<double> mode(std::size_t idx) const;
  // Index of the momentum-reversed mode (closed under k -> -k).
  std::size_t reflect(std::size_t idx) const;
  double volume() const;

  // Flattened index helpers.
  std::vector<int> unflatten(std::size_t idx) const;
  std::size_t flatten(const std::vector<int>& n) const;
};

// Complex function on a SpatialLattice, stored as mode coefficients.
struct SpatialFunction {
  SpatialLattice lat;
  std::vector<complexd> coeff;

  static SpatialFunction zero(const SpatialLattice& lat);
  static SpatialFunction random(const SpatialLattice& lat, Rng& rng);
  // Random with hermitian coefficients c(-k) = conj(c(k)), i.e. a real-valued
  // function in position space.
  static SpatialFunction random_real(const SpatialLattice& lat, Rng& rng);

  SpatialFunction& operator+=(const SpatialFunction& o);
  SpatialFunction& operator*=(complexd z);
  bool is_real() const;  // c(-k) == conj(c(k)) up to rounding
};

double mu_mode(const SpatialLattice& lat, std::size_t idx, const symbols::BoostSpec& b);
double delta_mode(const SpatialLattice& lat, std::size_t idx, const symbols::BoostSpec& b);
double mu_pm_mode(const SpatialLattice& lat, std::size_t idx, const symbols::BoostSpec& b,
                  int sign);

// L2 and Sobolev -1/2 inner products (the latter weights modes by 1/(2 mu)).
complexd l2_inner(const SpatialFunction& a, const SpatialFunction& b);
complexd sobolev_half_inner(const SpatialFunction& a, const SpatialFunction& b,
                            const symbols::BoostSpec& bs);
double sobolev_half_norm2(const SpatialFunction& a, const symbols::BoostSpec& bs);

}  // namespace pwick::lattice
