#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwick/symbols.hpp"

using namespace pwick;
using namespace pwick::symbols;

TEST_CASE("boost spec derives rapidity and direction") {
  const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
  CHECK(b.cosh_eta() == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(b.sinh_eta() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(b.mass_gap() == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(b.direction[0] == 1.0);
  CHECK_THROWS(BoostSpec::make1d(1.0, 1.0));
  CHECK_THROWS(BoostSpec::make1d(-1.0, 0.3));
  CHECK_THROWS(BoostSpec::make1d(1.0, std::nan("")));
}

TEST_CASE("momentum decomposes against the boost direction") {
  const BoostSpec b = BoostSpec::make(1.0, {0.6, 0.0});
  const Momentum k = Momentum::make(0.5, {3.0, 4.0}, b);
  // kperp orthogonal to n, |kperp|^2 + (k.n)^2 = |k|^2
  double kn = 0.0, kp2 = 0.0, k2 = 0.0;
  for (std::size_t i = 0; i < k.kvec.size(); ++i) {
    kn += k.kvec[i] * b.direction[i];
    kp2 += k.kperp[i] * k.kperp[i];
    k2 += k.kvec[i] * k.kvec[i];
  }
  CHECK(kp2 + kn * kn == doctest::Approx(k2).epsilon(1e-14));
  CHECK_THROWS(Momentum::make(std::nan(""), {0.0, 0.0}, b));
}

TEST_CASE("one-particle symbols at reference points") {
  SUBCASE("zero spatial momentum collapses mu_pm") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const auto s = one_particle_symbols(Momentum::make(2.3, {0.0}, b), b);
    CHECK(s.mu == 1.0);
    CHECK(s.delta == 0.0);
    CHECK(s.mu_plus == 1.0);
    CHECK(s.mu_minus == 1.0);
  }
  SUBCASE("v = 0 collapse") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.0);
    const auto s = one_particle_symbols(Momentum::make(0.0, {1.0}, b), b);
    CHECK(s.mu_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.mu_minus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("boosted splitting and the uniform lower bound") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const auto s = one_particle_symbols(Momentum::make(0.0, {1.0}, b), b);
    CHECK(s.mu_plus == doctest::Approx(std::sqrt(2.0) + 0.6).epsilon(1e-15));
    CHECK(s.mu_minus == doctest::Approx(std::sqrt(2.0) - 0.6).epsilon(1e-15));
    CHECK(s.mu_plus >= 0.8);
    CHECK(s.mu_minus >= 0.8);
    CHECK(s.mu_plus * s.mu_minus == doctest::Approx(s.mu * s.mu - s.delta * s.delta));
  }
}

TEST_CASE("propagator symbol reference values") {
  SUBCASE("static zero mode") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.37);
    CHECK(propagator_symbol(Momentum::make(0.0, {0.0}, b), b) == complexd{1.0, 0.0});
  }
  SUBCASE("real case 1/(E^2 + mu^2)") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.0);
    const complexd d = propagator_symbol(Momentum::make(1.0, {1.0}, b), b);
    CHECK(d.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(d.imag() == 0.0);
  }
  SUBCASE("boosted complex value 1/(2.64 + 1.2i)") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const complexd d = propagator_symbol(Momentum::make(1.0, {1.0}, b), b);
    const complexd expect = 1.0 / complexd{2.64, 1.2};
    CHECK(std::abs(d - expect) < 1e-15);
    CHECK(d.real() == doctest::Approx(0.31392).epsilon(1e-4));
    CHECK(d.imag() == doctest::Approx(-0.14269).epsilon(1e-4));
  }
}

TEST_CASE("hermitian/skew split") {
  const BoostSpec b0 = BoostSpec::make1d(1.0, 0.0);
  SUBCASE("v = 0: real covariance") {
    const auto [kt, lt] = split_symbols(Momentum::make(1.4, {0.8}, b0), b0);
    CHECK(lt == 0.0);
    CHECK(kt == doctest::Approx(1.0 / (1.4 * 1.4 + 0.8 * 0.8 + 1.0)).epsilon(1e-15));
  }
  SUBCASE("E = 0: skew part odd in E") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.7);
    const auto [kt, lt] = split_symbols(Momentum::make(0.0, {2.2}, b), b);
    CHECK(lt == 0.0);
    CHECK(kt > 0.0);
  }
  SUBCASE("split reassembles the propagator") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const Momentum q = Momentum::make(1.0, {1.0}, b);
    const auto [kt, lt] = split_symbols(q, b);
    const complexd d = propagator_symbol(q, b);
    CHECK(std::abs(complexd{kt, lt} - d) < 1e-15 * std::abs(d));
  }
}

TEST_CASE("sigma symbol: principal root with positive real part") {
  const BoostSpec b0 = BoostSpec::make1d(1.0, 0.0);
  CHECK(sigma_symbol(Momentum::make(0.0, {0.0}, b0), b0) == complexd{1.0, 0.0});

  Rng rng(7);
  const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Momentum q =
        Momentum::make(rng.uniform(-10.0, 10.0), {rng.uniform(-10.0, 10.0)}, b);
    const complexd s = sigma_symbol(q, b);
    CHECK(s.real() > 0.0);
    worst = std::max(worst, std::abs(s * s - propagator_symbol(q, b)));
    // sigma(-k) = sigma(k), sigma(theta k) = conj sigma(k)
    const Momentum mq = Momentum::make(-q.energy, {-q.kvec[0]}, b);
    const Momentum tq = Momentum::make(-q.energy, {q.kvec[0]}, b);
    CHECK(std::abs(sigma_symbol(mq, b) - s) < 1e-14);
    CHECK(std::abs(sigma_symbol(tq, b) - std::conj(s)) < 1e-14);
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("symbol evenness and reflection conjugations") {
  Rng rng(11);
  const BoostSpec b = BoostSpec::make(1.0, {0.5, 0.3});
  for (int i = 0; i < 200; ++i) {
    const double e = rng.uniform(-5.0, 5.0);
    std::vector<double> k{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const complexd d = propagator_symbol(Momentum::make(e, k, b), b);
    CHECK(std::abs(propagator_symbol(Momentum::make(-e, {-k[0], -k[1]}, b), b) - d) < 1e-15);
    CHECK(std::abs(propagator_symbol(Momentum::make(-e, k, b), b) - std::conj(d)) < 1e-15);
    // spatial reflection k -> k - 2(k.n)n
    double kn = k[0] * b.direction[0] + k[1] * b.direction[1];
    std::vector<double> kr{k[0] - 2.0 * kn * b.direction[0], k[1] - 2.0 * kn * b.direction[1]};
    CHECK(std::abs(propagator_symbol(Momentum::make(e, kr, b), b) - std::conj(d)) < 1e-15);
  }
}

TEST_CASE("bound suite: pointwise families and the sup sequence") {
  SUBCASE("v = 0 has zero ratio everywhere") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.0);
    Rng rng(3);
    std::vector<Momentum> samples;
    for (int i = 0; i < 500; ++i) {
      samples.push_back(Momentum::make(rng.uniform(-10, 10), {rng.uniform(-10, 10)}, b));
    }
    const auto rep = verify_symbol_bounds(samples, b);
    CHECK(rep.pass());
    CHECK(rep.ratio_sup_target == 0.0);
  }
  SUBCASE("v = 0.6 sup sequence approaches sinh(eta) = 0.75") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    for (double e : {10.0, 100.0, 1000.0}) {
      const Momentum q = Momentum::make(-e, {e * 1.25}, b);
      const auto [kt, lt] = split_symbols(q, b);
      const double ratio = std::abs(lt) / kt;
      CHECK(ratio == doctest::Approx(2.0 * e * e * 0.75 / (2.0 * e * e + 1.0)).epsilon(1e-12));
      CHECK(ratio < 0.75);
      if (e >= 10.0) CHECK(ratio == doctest::Approx(0.75).epsilon(0.01));
    }
  }
  SUBCASE("random sampling across velocities and dims") {
    Rng rng(19);
    for (int d : {2, 3}) {
      for (double v : {0.1, 0.3, 0.6, 0.9}) {
        std::vector<double> vel(static_cast<std::size_t>(d - 1), 0.0);
        vel[0] = v;
        const BoostSpec b = BoostSpec::make(1.0, vel);
        std::vector<Momentum> samples;
        for (int i = 0; i < 2000; ++i) {
          std::vector<double> k(static_cast<std::size_t>(d - 1));
          for (auto& c : k) c = rng.uniform(-10.0, 10.0);
          samples.push_back(Momentum::make(rng.uniform(-10.0, 10.0), std::move(k), b));
        }
        const auto rep = verify_symbol_bounds(samples, b);
        CHECK_MESSAGE(rep.pass(), "violations at v=", v, " d=", d);
        CHECK(rep.ratio_sup_estimate <= rep.ratio_sup_target);
        CHECK(rep.ratio_sup_estimate == doctest::Approx(rep.ratio_sup_target).epsilon(0.01));
        for (const auto& q : samples) {
          const auto s = one_particle_symbols(q, b);
          CHECK(s.mu_plus * s.mu_minus ==
                doctest::Approx(s.mu * s.mu - s.delta * s.delta).epsilon(1e-13));
          CHECK(s.mu_plus * s.mu_minus > 0.0);
          CHECK(std::min(s.mu_plus, s.mu_minus) >= b.mass_gap() - 1e-14);
          CHECK(s.mu_plus + s.mu_minus == doctest::Approx(2.0 * s.mu).epsilon(1e-15));
          CHECK(std::abs(s.delta) < s.mu * b.tanh_eta());  // strict: m > 0
        }
      }
    }
  }
  SUBCASE("empty sample set rejected") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.1);
    CHECK_THROWS(verify_symbol_bounds({}, b));
  }
}

TEST_CASE("spatial symbols") {
  SUBCASE("d = 2 reference point") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.6);
    const auto s = spatial_symbols(0.0, {}, b);
    CHECK(s.nu == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.nu_plus == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(s.nu_minus == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(s.k_plus > 0.0);
    CHECK(s.k_minus < 0.0);
  }
  SUBCASE("v = 0 reduces to nu_pm = nu and k_pm = +-nu") {
    const BoostSpec b = BoostSpec::make1d(1.0, 0.0);
    const auto s = spatial_symbols(1.3, {}, b);
    CHECK(s.nu == doctest::Approx(std::sqrt(1.3 * 1.3 + 1.0)).epsilon(1e-15));
    CHECK(s.nu_plus == doctest::Approx(s.nu).epsilon(1e-15));
    CHECK(s.k_plus == doctest::Approx(s.nu).epsilon(1e-15));
    CHECK(s.k_minus == doctest::Approx(-s.nu).epsilon(1e-15));
  }
  SUBCASE("factorization reproduces the symbol denominator coefficient-wise") {
    Rng rng(23);
    for (int i = 0; i < 300; ++i) {
      const double v = rng.uniform(-0.9, 0.9);
      const BoostSpec b = BoostSpec::make1d(1.0, v == 0.0 ? 0.1 : v);
      const double e = rng.uniform(-4.0, 4.0);
      const auto s = spatial_symbols(e, {}, b);
      const double ch2 = b.cosh_eta() * b.cosh_eta();
      // (k1 - i k+)(k1 - i k-)/cosh^2 = k1^2/cosh^2 - i(k+ + k-)k1/cosh^2 - k+k-/cosh^2
      // target (E + i k1 tanh)^2 + k1^2 + m^2:
      //   quadratic: 1 - tanh^2 = sech^2; linear: 2 i E tanh; constant: E^2 + m^2.
      const double th = b.tanh_eta();
      CHECK(1.0 / ch2 == doctest::Approx(1.0 - th * th).epsilon(1e-12));
      CHECK(-(s.k_plus + s.k_minus) / ch2 == doctest::Approx(2.0 * e * th).epsilon(1e-12));
      CHECK(-s.k_plus * s.k_minus / ch2 == doctest::Approx(e * e + 1.0).epsilon(1e-12));
      CHECK(s.nu_plus > 0.0);
      CHECK(s.nu_minus > 0.0);
    }
  }
}
