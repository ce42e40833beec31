#pragma once

#include <Eigen/Dense>
#include <unordered_map>

#include "pwick/common.hpp"
#include "pwick/rp.hpp"

namespace pwick::fock {

// Bosonic Fock space on a spatial circle of circumference ell, modes
// k_n = 2 pi n / ell with |n| <= mode_cutoff, total particle number <= N.
struct FockTruncation {
  double ell = kTwoPi;
  double mass = 1.0;
  int mode_cutoff = 2;
  int max_particles = 4;
  std::size_t dimension_cap = 20000;

  // Derived basis: occupation vectors per sector of total momentum index
  // p = sum n * occ_n (an integer; physical momentum is 2 pi p / ell).
  std::vector<int> sector_momentum;                       // per sector
  std::vector<std::vector<std::vector<std::uint8_t>>> sector_states;
  std::size_t dimension = 0;

  static FockTruncation make(double ell, double mass, int mode_cutoff, int max_particles,
                             std::size_t dimension_cap = 20000);

  int n_modes() const { return 2 * mode_cutoff + 1; }
  double mode_momentum(int mode_index) const {
    return kTwoPi * (mode_index - mode_cutoff) / ell;
  }
  double mode_mu(int mode_index) const { return std::hypot(mode_momentum(mode_index), mass); }
};

// Real polynomial P(x) = sum_p coeff[p] x^p, bounded below.
struct PolySpec {
  std::vector<double> coeff;

  static PolySpec phi4(double lambda) { return PolySpec{{0.0, 0.0, 0.0, 0.0, lambda}}; }
  static PolySpec mass_shift(double g) { return PolySpec{{0.0, 0.0, 0.5 * g}}; }
  static PolySpec zero() { return PolySpec{{}}; }
  void validate() const;
  int degree() const;
};

struct FockOperatorSet {
  FockTruncation trunc;
  PolySpec poly;
  // Per sector: H_free diagonal, momentum value (scalar on the sector),
  // interaction block, eigen-decomposition of H = H_free + H_int - E.
  std::vector<Eigen::VectorXd> h_free;
  std::vector<double> momentum;  // physical momentum of the sector
  std::vector<Eigen::MatrixXd> h_int;
  std::vector<Eigen::VectorXd> eigenvalues;  // of H_free + H_int - E
  std::vector<Eigen::MatrixXd> eigenvectors;
  double ground_energy = 0.0;  // E = min spec(H_free + H_int)
  double hermiticity_deviation = 0.0;

  std::size_t n_sectors() const { return h_free.size(); }
  std::size_t dimension() const { return trunc.dimension; }
};

FockOperatorSet build_operators(const FockTruncation& trunc, const PolySpec& poly);

struct SpectrumReport {
  struct PerVelocity {
    double v = 0.0;
    double min_eig = 0.0;
    int ground_sector_momentum = 0;
    double gap = 0.0;
    double momentum_residual = 0.0;  // |P Omega| via the ground sector label
    double ph_bound_margin = 0.0;    // min over eigenpairs of h^2 + slack - eps^2 p^2
    bool ph_bound_pass = true;
  };
  std::vector<PerVelocity> per_velocity;
  double tolerance = 1e-8;
  bool pass() const {
    for (const auto& r : per_velocity) {
      if (r.min_eig < -tolerance || r.ground_sector_momentum != 0 || !r.ph_bound_pass)
        return false;
    }
    return true;
  }
};

// Diagonalizes H + vP sector-wise (P is scalar per sector, so the v = 0
// eigenbasis is reused) and checks the spectrum condition and the
// eps^2 P^2 <= H_v^2 eigenvalue inequality with eps = (1-|v|)/2.
SpectrumReport spectrum_condition(const FockOperatorSet& ops, const std::vector<double>& v_list,
                                  double tolerance = 1e-8);

struct GibbsReport {
  double beta = 0.0;
  double v = 0.0;
  double partition_function = 0.0;
  double free_product_formula = 0.0;   // P = 0 only: prod (1-e^{-beta mu_v})^{-1}
  double particle_cap_bound = 0.0;     // explicit bound on the truncation remainder
  double kms_residual = 0.0;
  double cyclicity_residual = 0.0;
  double gibbs_identity_value = 0.0;   // functional at the identity (= 1)
};

GibbsReport heat_kernel_and_gibbs(const FockOperatorSet& ops, double beta, double v,
                                  std::uint64_t seed, int observable_pairs = 5);

struct AnalyticityReport {
  std::vector<double> taylor_terms;   // Gamma^n/n! ||(tP)^n e^{-tH}||
  std::vector<double> bounds;         // (Gamma/(1-eps))^n ||e^{-t(eps Hfree + Hint - E)}||
  bool terms_pass = true;
  double trotter_max_violation = 0.0;  // over random commuting triples
  int trotter_trials = 0;
};

AnalyticityReport analyticity_check(const FockOperatorSet& ops, double t, double gamma,
                                    double eps, int n_max, std::uint64_t seed,
                                    int trotter_trials = 1000);

struct FkReport {
  complexd quantum;
  complexd classical;
  double deviation = 0.0;
  double scale = 0.0;
};

// Gaussian Feynman-Kac check: <phi(f^)Omega, e^{-T H_v} phi(g^)Omega> against
// the classical pairing <f, theta D T(T) g>, both on the circle's mode set.
// Only the free action is admitted; a nonzero polynomial is rejected.
FkReport fk_gaussian_check(double T, const rp::TestMember& f, const rp::TestMember& g,
                           const FockTruncation& trunc, double v,
                           const PolySpec& poly = PolySpec::zero());

// Exact commutation of H_int with P in the truncated basis, verified on the
// full (unsectored) matrix at small size; returns the max |[H_int, P]| entry.
double verify_momentum_commutation(const FockOperatorSet& ops);

}  // namespace pwick::fock
