#include "pwick/lattice.hpp"

namespace pwick::lattice {

SpatialLattice SpatialLattice::make(std::vector<double> lengths, std::vector<int> cutoffs) {
  require(!lengths.empty(), "SpatialLattice: need at least one axis");
  require(lengths.size() == cutoffs.size(), "SpatialLattice: lengths/cutoffs mismatch");
  for (double l : lengths) require(l > 0.0, "SpatialLattice: lengths must be positive");
  for (int c : cutoffs) require(c >= 0, "SpatialLattice: cutoffs must be >= 0");
  SpatialLattice lat;
  lat.lengths = std::move(lengths);
  lat.cutoffs = std::move(cutoffs);
  return lat;
}

std::size_t SpatialLattice::size() const {
  std::size_t n = 1;
  for (int c : cutoffs) n *= static_cast<std::size_t>(2 * c + 1);
  return n;
}

std::vector<int> SpatialLattice::unflatten(std::size_t idx) const {
  std::vector<int> n(cutoffs.size());
  for (std::size_t a = cutoffs.size(); a-- > 0;) {
    const std::size_t width = static_cast<std::size_t>(2 * cutoffs[a] + 1);
    n[a] = static_cast<int>(idx % width) - cutoffs[a];
    idx /= width;
  }
  return n;
}

std::size_t SpatialLattice::flatten(const std::vector<int>& n) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < cutoffs.size(); ++a) {
    idx = idx * static_cast<std::size_t>(2 * cutoffs[a] + 1) +
          static_cast<std::size_t>(n[a] + cutoffs[a]);
  }
  return idx;
}

std::vector<double> SpatialLattice::mode(std::size_t idx) const {
  const auto n = unflatten(idx);
  std::vector<double> k(n.size());
  for (std::size_t a = 0; a < n.size(); ++a) k[a] = kTwoPi * n[a] / lengths[a];
  return k;
}

std::size_t SpatialLattice::reflect(std::size_t idx) const {
  auto n = unflatten(idx);
  for (int& c : n) c = -c;
  return flatten(n);
}

double SpatialLattice::volume() const {
  double v = 1.0;
  for (double l : lengths) v *= l;
  return v;
}

SpatialFunction SpatialFunction::zero(const SpatialLattice& lat) {
  return {lat, std::vector<complexd>(lat.size(), complexd{0.0, 0.0})};
}

SpatialFunction SpatialFunction::random(const SpatialLattice& lat, Rng& rng) {
  SpatialFunction f = zero(lat);
  for (auto& c : f.coeff) c = rng.cnormal();
  return f;
}

SpatialFunction SpatialFunction::random_real(const SpatialLattice& lat, Rng& rng) {
  SpatialFunction f = zero(lat);
  for (std::size_t i = 0; i < f.coeff.size(); ++i) {
    const std::size_t j = lat.reflect(i);
    if (i < j) {
      f.coeff[i] = rng.cnormal();
      f.coeff[j] = std::conj(f.coeff[i]);
    } else if (i == j) {
      f.coeff[i] = rng.normal();
    }
  }
  return f;
}

SpatialFunction& SpatialFunction::operator+=(const SpatialFunction& o) {
  require(coeff.size() == o.coeff.size(), "SpatialFunction: size mismatch");
  for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] += o.coeff[i];
  return *this;
}

SpatialFunction& SpatialFunction::operator*=(complexd z) {
  for (auto& c : coeff) c *= z;
  return *this;
}

bool SpatialFunction::is_real() const {
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (std::abs(coeff[i] - std::conj(coeff[lat.reflect(i)])) > 1e-12) return false;
  }
  return true;
}

double mu_mode(const SpatialLattice& lat, std::size_t idx, const symbols::BoostSpec& b) {
  return symbols::mu_of(lat.mode(idx), b);
}

double delta_mode(const SpatialLattice& lat, std::size_t idx, const symbols::BoostSpec& b) {
  return symbols::delta_of(lat.mode(idx), b);
}

double mu_pm_mode(const SpatialLattice& lat, std::size_t idx, const symbols::BoostSpec& b,
                  int sign) {
  return mu_mode(lat, idx, b) + sign * delta_mode(lat, idx, b);
}

complexd l2_inner(const SpatialFunction& a, const SpatialFunction& b) {
  require(a.coeff.size() == b.coeff.size(), "l2_inner: mismatched lattices");
  complexd s{0.0, 0.0};
  for (std::size_t i = 0; i < a.coeff.size(); ++i) s += std::conj(a.coeff[i]) * b.coeff[i];
  return s;
}

complexd sobolev_half_inner(const SpatialFunction& a, const SpatialFunction& b,
                            const symbols::BoostSpec& bs) {
  require(a.coeff.size() == b.coeff.size(), "sobolev_half_inner: mismatched lattices");
  complexd s{0.0, 0.0};
  for (std::size_t i = 0; i < a.coeff.size(); ++i) {
    s += std::conj(a.coeff[i]) * b.coeff[i] / (2.0 * mu_mode(a.lat, i, bs));
  }
  return s;
}

double sobolev_half_norm2(const SpatialFunction& a, const symbols::BoostSpec& bs) {
  return sobolev_half_inner(a, a, bs).real();
}

}  // namespace pwick::lattice
