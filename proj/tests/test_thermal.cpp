#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwick/thermal.hpp"

using namespace pwick;
using namespace pwick::thermal;
using periodize::CompactSpec;
using periodize::rho_of;
using symbols::BoostSpec;

namespace {
const SpatialLattice kLat = SpatialLattice::make1d(kTwoPi, 8);
const BoostSpec kBoost = BoostSpec::make1d(1.0, 0.6);
const CompactSpec kSpec = CompactSpec::make(2.0, kBoost);

double vec_dist(const DoubledVector& u, const DoubledVector& v) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < u.a.size(); ++i) {
    d2 += std::norm(u.a[i] - v.a[i]) + std::norm(u.b[i] - v.b[i]);
  }
  return std::sqrt(d2);
}
}  // namespace

TEST_CASE("doubling maps") {
  Rng rng(1);
  SUBCASE("zero-temperature limit: kappa alpha -> (alpha, 0)") {
    const auto alpha = SpatialFunction::random(kLat, rng);
    const CompactSpec cold = CompactSpec::make(400.0, kBoost);
    const auto v = kappa(alpha, cold, +1);
    for (std::size_t i = 0; i < kLat.size(); ++i) {
      CHECK(std::abs(v.a[i] - alpha.coeff[i]) < 1e-12);
      CHECK(std::abs(v.b[i]) < 1e-12);
    }
  }
  SUBCASE("norm identity ||kappa alpha||^2 = sum (1 + rho_+ + rho_-)|alpha|^2/(2mu)") {
    const auto alpha = SpatialFunction::random(kLat, rng);
    const auto v = kappa(alpha, kSpec, +1);
    double expect = 0.0;
    for (std::size_t i = 0; i < kLat.size(); ++i) {
      const double mu = lattice::mu_mode(kLat, i, kSpec.boost);
      const double d = lattice::delta_mode(kLat, i, kSpec.boost);
      expect += (1.0 + rho_of(kSpec.beta, mu + d) + rho_of(kSpec.beta, mu - d)) *
                std::norm(alpha.coeff[i]) / (2.0 * mu);
    }
    CHECK(norm2(v, kSpec.boost) == doctest::Approx(expect).epsilon(1e-14));
    // at v = 0 the per-mode weight is the textbook 1 + 2 rho
    const CompactSpec s0 = CompactSpec::make(2.0, BoostSpec::make1d(1.0, 0.0));
    const auto v0 = kappa(alpha, s0, +1);
    double expect0 = 0.0;
    for (std::size_t i = 0; i < kLat.size(); ++i) {
      const double mu = lattice::mu_mode(kLat, i, s0.boost);
      expect0 += (1.0 + 2.0 * rho_of(2.0, mu)) * std::norm(alpha.coeff[i]) / (2.0 * mu);
    }
    CHECK(norm2(v0, s0.boost) == doctest::Approx(expect0).epsilon(1e-14));
  }
  SUBCASE("kappa is linear, kappa' is anti-linear") {
    const auto alpha = SpatialFunction::random(kLat, rng);
    const complexd z{0.7, -1.9};
    SpatialFunction za = alpha;
    za *= z;
    DoubledVector lin = kappa(alpha, kSpec, +1);
    lin *= z;
    CHECK(vec_dist(kappa(za, kSpec, +1), lin) < 1e-13);

    DoubledVector anti = kappa_prime(alpha, kSpec, +1);
    anti *= std::conj(z);
    CHECK(vec_dist(kappa_prime(za, kSpec, +1), anti) < 1e-13);

    SpatialFunction ia = alpha;
    ia *= complexd{0.0, 1.0};
    DoubledVector minus_i = kappa_prime(alpha, kSpec, +1);
    minus_i *= complexd{0.0, -1.0};
    CHECK(vec_dist(kappa_prime(ia, kSpec, +1), minus_i) < 1e-13);
  }
}

TEST_CASE("thermal quantization") {
  Rng rng(2);
  SUBCASE("sharp-time vector equals e^{-s l} kappa") {
    const auto alpha = SpatialFunction::random(kLat, rng);
    const auto direct = sharp_time_vector(0.37, alpha, kSpec, +1);
    const auto composed =
        liouvillian_translate(kappa(alpha, kSpec, +1), complexd{0.37, 0.0}, kSpec, +1);
    CHECK(vec_dist(direct, composed) < 1e-14);
  }
  SUBCASE("isometry against the sharp-time kernel pairing") {
    const auto alpha = SpatialFunction::random(kLat, rng);
    const auto alpha_p = SpatialFunction::random(kLat, rng);
    for (int sign : {+1, -1}) {
      for (double s : {0.0, 0.3, 0.9}) {
        for (double sp : {0.1, 0.5}) {
          const complexd lhs = inner(sharp_time_vector(s, alpha, kSpec, sign),
                                     sharp_time_vector(sp, alpha_p, kSpec, sign), kSpec.boost);
          const complexd rhs = sharp_time_inner(s, alpha, sp, alpha_p, kSpec, sign);
          CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
        }
      }
    }
  }
  SUBCASE("windowed members: quantize pairing matches theta D^c Gram route") {
    auto fam = rp::TestFunctionFamily::random_temporal(kLat, 4, 44, 0.45 * kSpec.beta);
    const auto g = periodize::gram_reflection_compact(fam, kSpec, 1e-10, 56);
    for (int i = 0; i < 4; ++i) {
      const auto qi = thermal_quantize(fam.members[static_cast<std::size_t>(i)], kLat, kSpec, +1, 48);
      for (int j = 0; j < 4; ++j) {
        const auto qj = thermal_quantize(fam.members[static_cast<std::size_t>(j)], kLat, kSpec, +1, 48);
        const complexd quantum = inner(qi, qj, kSpec.boost);
        CHECK(std::abs(quantum - g.matrix(i, j)) <
              1e-6 * std::max(1.0, std::abs(g.matrix(i, j))));
      }
    }
  }
  SUBCASE("beta/2 slice quantizes through kappa-prime for real amplitudes") {
    const auto alpha = SpatialFunction::random_real(kLat, rng);
    const auto slice = sharp_time_vector(0.5 * kSpec.beta, alpha, kSpec, +1);
    CHECK(vec_dist(slice, kappa_prime(alpha, kSpec, +1)) < 1e-13);
  }
  SUBCASE("support outside [0, beta/2] rejected") {
    auto fam = rp::TestFunctionFamily::random_temporal(kLat, 1, 3, 3.0 * kSpec.beta);
    CHECK_THROWS(thermal_quantize(fam.members[0], kLat, kSpec, +1));
    const auto alpha = SpatialFunction::random(kLat, rng);
    CHECK_THROWS(sharp_time_inner(-0.1, alpha, 0.2, alpha, kSpec, +1));
  }
  SUBCASE("equal-time pairing at v = 0 carries the (1 + 2 rho)/(2 mu) weight") {
    const CompactSpec s0 = CompactSpec::make(2.0, BoostSpec::make1d(1.0, 0.0));
    const auto alpha = SpatialFunction::random(kLat, rng);
    const complexd got = sharp_time_inner(0.0, alpha, 0.0, alpha, s0, +1);
    complexd expect{0.0, 0.0};
    for (std::size_t i = 0; i < kLat.size(); ++i) {
      const double mu = lattice::mu_mode(kLat, i, s0.boost);
      expect += (1.0 + 2.0 * rho_of(2.0, mu)) * std::norm(alpha.coeff[i]) / (2.0 * mu);
    }
    CHECK(std::abs(got - expect) < 1e-14 * std::abs(expect));
  }
  SUBCASE("sign = - pairing conjugates the sign = + pairing for real amplitudes") {
    const auto a = SpatialFunction::random_real(kLat, rng);
    const auto ap = SpatialFunction::random_real(kLat, rng);
    const complexd plus = sharp_time_inner(0.3, a, 0.7, ap, kSpec, +1);
    const complexd minus = sharp_time_inner(0.3, a, 0.7, ap, kSpec, -1);
    CHECK(std::abs(minus - std::conj(plus)) < 1e-13);
  }
}

TEST_CASE("liouvillian translation") {
  Rng rng(3);
  const auto alpha = SpatialFunction::random(kLat, rng);
  const auto u = kappa(alpha, kSpec, +1);

  SUBCASE("s = 0 is the identity") {
    CHECK(vec_dist(liouvillian_translate(u, complexd{0.0, 0.0}, kSpec, +1), u) == 0.0);
  }
  SUBCASE("group law") {
    const auto one = liouvillian_translate(
        liouvillian_translate(u, complexd{0.3, 0.0}, kSpec, +1), complexd{0.45, 0.0}, kSpec, +1);
    const auto two = liouvillian_translate(u, complexd{0.75, 0.0}, kSpec, +1);
    CHECK(vec_dist(one, two) < 1e-14);
  }
  SUBCASE("spectrum avoids the mass-gap window") {
    for (int sign : {+1, -1}) {
      const auto sp = liouvillian_spectrum(kLat, kSpec, sign);
      // the continuum infimum m sqrt(1 - v^2) = 0.8 bounds the lattice scan
      CHECK(sp.gap >= 0.8 - 1e-14);
      CHECK(sp.gap == doctest::Approx(std::sqrt(2.0) - 0.6).epsilon(1e-12));
      for (double g : sp.first_slot) CHECK(g > 0.0);
      for (double g : sp.second_slot) CHECK(g < 0.0);
    }
  }
}

TEST_CASE("one-particle KMS") {
  Rng rng(4);
  SUBCASE("single real mode at s = 0 reduces to (1+rho)e^{-beta mu} = rho") {
    SpatialFunction alpha = SpatialFunction::zero(kLat);
    alpha.coeff[kLat.size() / 2] = 1.0;  // the k = 0 mode (real function)
    const auto rep = one_particle_kms_check(alpha, alpha, {0.0}, kSpec, +1);
    CHECK(rep.max_residual < 1e-15 * rep.scale);
    const double mu = 1.0;
    const double rho = rho_of(kSpec.beta, mu);
    CHECK((1.0 + rho) * std::exp(-kSpec.beta * mu) == doctest::Approx(rho).epsilon(1e-15));
  }
  SUBCASE("random real functions, both signs and velocities") {
    for (double v : {0.0, 0.6}) {
      const CompactSpec spec = CompactSpec::make(2.0, BoostSpec::make1d(1.0, v));
      for (int sign : {+1, -1}) {
        const auto a = SpatialFunction::random_real(kLat, rng);
        const auto ap = SpatialFunction::random_real(kLat, rng);
        const auto rep =
            one_particle_kms_check(a, ap, {0.0, 0.7, -1.3, 2.9, -4.2}, spec, sign);
        CHECK(rep.max_residual < 1e-10 * rep.scale);
      }
    }
  }
}

TEST_CASE("modular structure") {
  for (double v : {0.0, 0.6}) {
    const CompactSpec spec = CompactSpec::make(2.0, BoostSpec::make1d(1.0, v));
    for (int sign : {+1, -1}) {
      const auto rep = modular_check(spec, sign, kLat, 314, 8);
      CHECK(rep.j_kappa_residual == 0.0);       // identity holds exactly by arithmetic
      CHECK(rep.j_squared_residual == 0.0);
      CHECK(rep.tomita_action_residual < 1e-12);
      CHECK(rep.polar_residual < 1e-12);
      CHECK(rep.half_shift_residual < 1e-12);
    }
  }
}

TEST_CASE("sharp-time density") {
  SUBCASE("spectral contraction bound at k = 0") {
    const double ds = 0.25;
    double worst = 0.0;
    for (std::size_t i = 0; i < kLat.size(); ++i) {
      worst = std::max(worst, std::exp(-2.0 * ds * lattice::mu_mode(kLat, i, kBoost)));
    }
    CHECK(worst == doctest::Approx(std::exp(-2.0 * ds * 1.0)).epsilon(1e-14));
    CHECK(worst < 1.0);
  }
  SUBCASE("two slices reach the doubled space, one does not") {
    const auto lat16 = SpatialLattice::make1d(kTwoPi, 8);
    const auto rep = sharp_time_density_check(0.1, 0.6, lat16, kSpec, +1);
    CHECK(rep.sigma_min > 0.0);
    CHECK(rep.sigma_min_one_slice == 0.0);
    CHECK(rep.contraction_factor == doctest::Approx(-std::expm1(-1.0)).epsilon(1e-14));
  }
  SUBCASE("degeneracy trend as the slices merge") {
    double prev = std::numeric_limits<double>::infinity();
    for (double ds : {0.4, 0.2, 0.1, 0.05}) {
      const auto rep = sharp_time_density_check(0.2, 0.2 + ds, kLat, kSpec, +1);
      CHECK(rep.sigma_min < prev);
      prev = rep.sigma_min;
    }
  }
  SUBCASE("coincident slices rejected") {
    CHECK_THROWS(sharp_time_density_check(0.3, 0.3, kLat, kSpec, +1));
  }
}

TEST_CASE("thermal two-point function") {
  Rng rng(6);
  SUBCASE("equal-time single mode carries the 1 + rho_+ + rho_- weight") {
    SpatialFunction alpha = SpatialFunction::zero(kLat);
    alpha.coeff[kLat.size() / 2] = 1.0;  // k = 0
    const complexd g0 = thermal_two_point(alpha, alpha, 0.0, kSpec, +1);
    const double rho = rho_of(kSpec.beta, 1.0);
    CHECK(g0.real() == doctest::Approx((1.0 + 2.0 * rho) / 2.0).epsilon(1e-14));
    // 1 + 2 rho = coth(beta mu / 2)
    CHECK(1.0 + 2.0 * rho ==
          doctest::Approx(1.0 / std::tanh(0.5 * kSpec.beta)).epsilon(1e-14));
  }
  SUBCASE("KMS boundary residual over a time sweep") {
    for (int sign : {+1, -1}) {
      const auto a = SpatialFunction::random_real(kLat, rng);
      const auto ap = SpatialFunction::random_real(kLat, rng);
      const double res =
          two_point_kms_residual(a, ap, {-5.0, -2.2, -0.4, 0.9, 3.1, 5.0}, kSpec, sign);
      CHECK(res < 1e-10);
    }
  }
  SUBCASE("strip validation") {
    const auto a = SpatialFunction::random_real(kLat, rng);
    CHECK_THROWS(thermal_two_point_continued(a, a, complexd{0.0, -0.1}, kSpec, +1));
    CHECK_THROWS(thermal_two_point_continued(a, a, complexd{0.0, kSpec.beta + 0.1}, kSpec, +1));
  }
  SUBCASE("commutator of evolved and boundary fields vanishes") {
    for (int sign : {+1, -1}) {
      const auto a = SpatialFunction::random_real(kLat, rng);
      const auto ap = SpatialFunction::random_real(kLat, rng);
      for (double s : {0.0, 0.8, -1.4}) {
        for (double t : {0.0, 0.5, 2.3}) {
          CHECK(commutator_residual(a, ap, s, t, kSpec, sign) < 1e-12);
        }
      }
    }
  }
}
