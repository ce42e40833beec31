#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwick/rp.hpp"

using namespace pwick;
using namespace pwick::rp;
using symbols::BoostSpec;

namespace {
const SpatialLattice kLat = SpatialLattice::make1d(kTwoPi, 5);
}

TEST_CASE("sobolev -1/2 inner product") {
  const BoostSpec b = BoostSpec::make1d(1.0, 0.4);
  Rng rng(2);

  SUBCASE("single Fourier mode: ||a||^2/(2 mu)") {
    SpatialFunction a = SpatialFunction::zero(kLat);
    const std::size_t idx = 7;
    a.coeff[idx] = complexd{2.0, -1.0};
    const double mu = lattice::mu_mode(kLat, idx, b);
    CHECK(sobolev_half_inner(a, a, b).real() == doctest::Approx(5.0 / (2.0 * mu)).epsilon(1e-15));
  }
  SUBCASE("conjugate symmetry") {
    const auto a = SpatialFunction::random(kLat, rng);
    const auto c = SpatialFunction::random(kLat, rng);
    CHECK(std::abs(sobolev_half_inner(a, c, b) - std::conj(sobolev_half_inner(c, a, b))) <
          1e-14);
  }
  SUBCASE("positive definiteness and grid mismatch") {
    const auto a = SpatialFunction::random(kLat, rng);
    CHECK(sobolev_half_inner(a, a, b).real() > 0.0);
    const auto other = SpatialFunction::zero(SpatialLattice::make1d(kTwoPi, 2));
    CHECK_THROWS(sobolev_half_inner(a, other, b));
  }
  SUBCASE("Parseval cross-check against a position-space convolution") {
    // <a, b>_{-1/2} = sum_k conj(a) b/(2 mu) equals the L2 pairing of a with
    // the (1/2 mu)-convolved b, evaluated by direct position-space sums.
    const auto a = SpatialFunction::random(kLat, rng);
    const auto c = SpatialFunction::random(kLat, rng);
    const int n_x = 256;
    const double ell = kLat.lengths[0];
    complexd direct{0.0, 0.0};
    for (int ix = 0; ix < n_x; ++ix) {
      const double x = ell * ix / n_x;
      complexd av{0.0, 0.0}, cv{0.0, 0.0};
      for (std::size_t k = 0; k < kLat.size(); ++k) {
        const double kk = kLat.mode(k)[0];
        av += a.coeff[k] * std::polar(1.0 / std::sqrt(ell), kk * x);
        cv += c.coeff[k] / (2.0 * lattice::mu_mode(kLat, k, b)) *
              std::polar(1.0 / std::sqrt(ell), kk * x);
      }
      direct += std::conj(av) * cv * (ell / n_x);
    }
    CHECK(std::abs(direct - sobolev_half_inner(a, c, b)) < 1e-10);
  }
}

TEST_CASE("os_quantize") {
  const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
  Rng rng(5);

  SUBCASE("indicator slab has the closed form (1 - e^{-T mu_pm})/mu_pm") {
    const double T = 1.3;
    std::vector<complexd> amp(kLat.size());
    for (std::size_t k = 0; k < kLat.size(); ++k) amp[k] = rng.cnormal();
    const TestMember m = TestMember::slab(0.0, T, amp);
    for (int sign : {+1, -1}) {
      const SpatialFunction q = os_quantize(m, kLat, sign, b, 64);
      for (std::size_t k = 0; k < kLat.size(); ++k) {
        const double mu_pm = lattice::mu_pm_mode(kLat, k, b, sign);
        const complexd expect = amp[k] * (-std::expm1(-T * mu_pm)) / mu_pm;
        CHECK(std::abs(q.coeff[k] - expect) < 1e-13 * std::abs(expect));
      }
    }
  }
  SUBCASE("linearity in the amplitude") {
    auto fam = TestFunctionFamily::random_temporal(kLat, 1, 77);
    const auto q0 = os_quantize(fam.members[0], kLat, +1, b);
    TestMember scaled = fam.members[0];
    for (auto& c : scaled.amp) c *= complexd{0.5, 1.5};
    const auto qs = os_quantize(scaled, kLat, +1, b);
    for (std::size_t k = 0; k < kLat.size(); ++k) {
      CHECK(std::abs(qs.coeff[k] - complexd{0.5, 1.5} * q0.coeff[k]) < 1e-13);
    }
  }
  SUBCASE("sharp-time limit: narrow profiles approach e^{-s mu_pm} alpha") {
    // As the width shrinks, the quantization of a unit-mass bump at s tends
    // to e^{-s mu_pm} alpha per mode.
    const double s = 0.8;
    for (double width : {0.02, 0.01, 0.005}) {
      TestMember m;
      m.center = s;
      m.width = width;
      m.lo = s - 9.0 * width;
      m.hi = s + 9.0 * width;
      m.amp.assign(kLat.size(), complexd{1.0, 0.0});
      const double mass = width * std::sqrt(kTwoPi);  // Gaussian normalization
      const auto q = os_quantize(m, kLat, +1, b, 96);
      const double mu_p = lattice::mu_pm_mode(kLat, 0, b, +1);
      const double expect = std::exp(-s * mu_p);
      // second-order Laplace correction ~ (width mu)^2/2
      CHECK(q.coeff[0].real() / mass ==
            doctest::Approx(expect).epsilon(width * width * mu_p * mu_p));
    }
  }
  SUBCASE("support violation rejected") {
    TestMember m;
    m.center = 0.5;
    m.width = 0.1;
    m.lo = -0.2;
    m.hi = 1.0;
    m.amp.assign(kLat.size(), complexd{1.0, 0.0});
    CHECK_THROWS(os_quantize(m, kLat, +1, b));
  }
}

TEST_CASE("gram_reflection positivity") {
  SUBCASE("singleton family gives a nonnegative scalar") {
    for (double v : {0.0, 0.6, -0.6}) {
      const BoostSpec b = BoostSpec::make1d(1.0, v);
      const auto fam = TestFunctionFamily::random_temporal(kLat, 1, 11);
      const auto rep = gram_reflection(fam, Reflection::theta, b);
      CHECK(rep.matrix(0, 0).real() >= 0.0);
      CHECK(std::abs(rep.matrix(0, 0).imag()) < 1e-13 * std::abs(rep.matrix(0, 0)));
      CHECK(rep.verdict);
    }
  }
  SUBCASE("random temporal families pass for both orderings") {
    for (double v : {0.0, 0.3, -0.3, 0.6, -0.6, 0.9, -0.9}) {
      const BoostSpec b = BoostSpec::make1d(1.0, v);
      const auto fam = TestFunctionFamily::random_temporal(kLat, 10, 1234);
      for (int sign : {+1, -1}) {
        const auto rep = gram_reflection(fam, Reflection::theta, b, 1e-10, 48, sign);
        CHECK_MESSAGE(rep.verdict, "min_eig=", rep.min_eig, " v=", v, " sign=", sign);
        CHECK(rep.hermiticity_deviation <
              1e-12 * std::abs(rep.eigenvalues.back()));
      }
    }
  }
  SUBCASE("random spatial families pass") {
    for (double v : {0.0, 0.6, -0.6}) {
      const BoostSpec b = BoostSpec::make1d(1.0, v);
      const auto fam = TestFunctionFamily::random_spatial(40, 5.0, 8, 4321);
      for (int sign : {+1, -1}) {
        const auto rep = gram_reflection(fam, Reflection::pi_n, b, 1e-10, 48, sign);
        CHECK_MESSAGE(rep.verdict, "min_eig=", rep.min_eig, " v=", v, " sign=", sign);
      }
    }
  }
  SUBCASE("wrong half-space rejected at the precondition") {
    auto fam = TestFunctionFamily::random_temporal(kLat, 2, 9);
    fam.half = HalfSpace::positive_x1;  // mismatched declaration
    const BoostSpec b = BoostSpec::make1d(1.0, 0.2);
    CHECK_THROWS(gram_reflection(fam, Reflection::theta, b));
  }
  SUBCASE("near-dependent members are condition-flagged, not rejected") {
    auto fam = TestFunctionFamily::random_temporal(kLat, 2, 13);
    fam.members[1] = fam.members[0];  // exactly dependent duplicate
    const BoostSpec b = BoostSpec::make1d(1.0, 0.2);
    const auto rep = gram_reflection(fam, Reflection::theta, b);
    CHECK(rep.verdict);  // still PSD
  }
}

TEST_CASE("OS isometry, dual path") {
  SUBCASE("sharp-time pairs against the closed form") {
    // <delta_s x a, thetaD delta_s' x a'> = <a, e^{-(s+s') mu_+}/(2mu) a'>:
    // realized through narrow bumps on both routes at modest accuracy.
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const double s = 0.5, sp = 0.9, width = 0.004;
    TestFunctionFamily fam;
    fam.half = HalfSpace::positive_time;
    fam.lat = kLat;
    for (double c : {s, sp}) {
      TestMember m;
      m.center = c;
      m.width = width;
      m.lo = c - 9.0 * width;
      m.hi = c + 9.0 * width;
      m.amp.assign(kLat.size(), complexd{1.0, 0.0});
      fam.members.push_back(m);
    }
    const auto rep = gram_reflection(fam, Reflection::theta, b, 1e-10, 64);
    const double mass = width * std::sqrt(kTwoPi);
    double expect = 0.0;
    for (std::size_t k = 0; k < kLat.size(); ++k) {
      expect += std::exp(-(s + sp) * lattice::mu_pm_mode(kLat, k, b, +1)) /
                (2.0 * lattice::mu_mode(kLat, k, b));
    }
    CHECK(rep.matrix(0, 1).real() / (mass * mass) ==
          doctest::Approx(expect).epsilon(1e-3));
  }
  SUBCASE("v = 0 and boosted random families agree across routes") {
    for (double v : {0.0, 0.6}) {
      const BoostSpec b = BoostSpec::make1d(1.0, v);
      const auto fam = TestFunctionFamily::random_temporal(kLat, 6, 555);
      const auto rep = verify_isometry(fam, b);
      CHECK(rep.max_plus_deviation < 1e-6 * rep.scale);
      CHECK(rep.max_minus_deviation < 1e-6 * rep.scale);
    }
  }
}

TEST_CASE("quantization contracts against the classical |D| norm") {
  const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
  const auto fam = TestFunctionFamily::random_temporal(kLat, 3, 31);
  for (const auto& m : fam.members) {
    for (int sign : {+1, -1}) {
      const auto rep = verify_contraction(m, kLat, sign, b);
      CHECK(rep.quantum_norm2 <= rep.classical_norm2 * (1.0 + 1e-8));
      CHECK(rep.quantum_norm2 > 0.0);
    }
  }
}

TEST_CASE("per-mode decay rates of quantized sharp-time pairings") {
  // <a^(s), a^(s')> decays in (s+s') with rate mu_+(k) per mode.
  const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
  const double h = 0.3;
  for (std::size_t k : {std::size_t{0}, std::size_t{3}, kLat.size() - 1}) {
    const double mu_p = lattice::mu_pm_mode(kLat, k, b, +1);
    const double mu = lattice::mu_mode(kLat, k, b);
    auto pairing = [&](double s, double sp) {
      return std::exp(-(s + sp) * mu_p) / (2.0 * mu);
    };
    const double r1 = pairing(0.4 + h, 0.2) / pairing(0.4, 0.2);
    CHECK(std::log(r1) == doctest::Approx(-h * mu_p).epsilon(1e-12));
  }
}
