#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "pwick/fock.hpp"
#include "pwick/periodize.hpp"

using namespace pwick;
using namespace pwick::fock;

namespace {

// Independent full-matrix builder for small truncations: enumerates the
// basis directly and applies ladder formulas without any sector machinery.
struct DenseOracle {
  FockTruncation t;
  std::vector<std::vector<std::uint8_t>> states;
  Eigen::MatrixXd h_free;
  Eigen::VectorXd momentum;

  explicit DenseOracle(const FockTruncation& trunc) : t(trunc) {
    for (const auto& sector : t.sector_states) {
      states.insert(states.end(), sector.begin(), sector.end());
    }
    const int dim = static_cast<int>(states.size());
    h_free = Eigen::MatrixXd::Zero(dim, dim);
    momentum = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      double e = 0.0, p = 0.0;
      for (int m = 0; m < t.n_modes(); ++m) {
        e += t.mode_mu(m) * states[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
        p += t.mode_momentum(m) * states[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
      }
      h_free(i, i) = e;
      momentum(i) = p;
    }
  }

  int find(const std::vector<std::uint8_t>& occ) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == occ) return static_cast<int>(i);
    }
    return -1;
  }

  // Quadratic interaction (g/2) Int :phi^2: dx built from the explicit
  // normal-ordered expansion sum_n [ (a_n a_{-n} + a+_n a+_{-n})/(2 mu_n)
  // + a+_n a_n / mu_n ].
  Eigen::MatrixXd mass_shift_matrix(double g) const {
    const int dim = static_cast<int>(states.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
      const auto& s = states[static_cast<std::size_t>(col)];
      for (int m = 0; m < t.n_modes(); ++m) {
        const int mr = 2 * t.mode_cutoff - m;  // the -k partner
        const double mu = t.mode_mu(m);
        // a+_n a_n
        h(col, col) += 0.5 * g * s[static_cast<std::size_t>(m)] / mu;
        // a_n a_{-n}
        {
          auto occ = s;
          if (occ[static_cast<std::size_t>(m)] > 0) {
            const double a1 = std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(m)]));
            --occ[static_cast<std::size_t>(m)];
            if (occ[static_cast<std::size_t>(mr)] > 0) {
              const double a2 =
                  std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(mr)]));
              --occ[static_cast<std::size_t>(mr)];
              const int row = find(occ);
              REQUIRE(row >= 0);
              h(row, col) += 0.5 * g * a1 * a2 / (2.0 * mu);
            }
          }
        }
        // a+_n a+_{-n}
        {
          auto occ = s;
          int total = 0;
          for (auto o : occ) total += o;
          if (total + 2 <= t.max_particles) {
            const double c1 =
                std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(m)]) + 1.0);
            ++occ[static_cast<std::size_t>(m)];
            const double c2 =
                std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(mr)]) + 1.0);
            ++occ[static_cast<std::size_t>(mr)];
            const int row = find(occ);
            REQUIRE(row >= 0);
            h(row, col) += 0.5 * g * c1 * c2 / (2.0 * mu);
          }
        }
      }
    }
    return h;
  }

  // Full phi(x) matrix for the Gibbs two-point oracle.
  Eigen::MatrixXcd field_matrix(double x) const {
    const int dim = static_cast<int>(states.size());
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
      const auto& s = states[static_cast<std::size_t>(col)];
      for (int m = 0; m < t.n_modes(); ++m) {
        const double c = 1.0 / std::sqrt(2.0 * t.mode_mu(m) * t.ell);
        // annihilation part  c e^{ikx} a_m
        if (s[static_cast<std::size_t>(m)] > 0) {
          auto occ = s;
          const double amp = std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(m)]));
          --occ[static_cast<std::size_t>(m)];
          const int row = find(occ);
          REQUIRE(row >= 0);
          phi(row, col) += c * amp * std::polar(1.0, t.mode_momentum(m) * x);
        }
        // creation part  c e^{-ikx} a+_m
        int total = 0;
        for (auto o : s) total += o;
        if (total + 1 <= t.max_particles) {
          auto occ = s;
          const double amp =
              std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(m)]) + 1.0);
          ++occ[static_cast<std::size_t>(m)];
          const int row = find(occ);
          REQUIRE(row >= 0);
          phi(row, col) += c * amp * std::polar(1.0, -t.mode_momentum(m) * x);
        }
      }
    }
    return phi;
  }

  // ops sectors are concatenated in the same order as `states`.
  Eigen::MatrixXd assemble(const FockOperatorSet& ops) const {
    const int dim = static_cast<int>(states.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    int offset = 0;
    for (std::size_t s = 0; s < ops.n_sectors(); ++s) {
      const int d = static_cast<int>(ops.h_int[s].rows());
      h.block(offset, offset, d, d) = ops.h_int[s];
      offset += d;
    }
    return h;
  }
};

}  // namespace

TEST_CASE("truncation basis") {
  const auto t = FockTruncation::make(kTwoPi, 1.0, 2, 4);
  // dimension = sum_{p<=4} C(4+p, p) = 1+5+15+35+70 = 126
  CHECK(t.dimension == 126);
  CHECK(t.n_modes() == 5);
  SUBCASE("sectors are closed under k -> -k relabelling") {
    for (std::size_t s = 0; s < t.sector_states.size(); ++s) {
      const int p = t.sector_momentum[s];
      // the mirrored sector exists and has the same size
      bool found = false;
      for (std::size_t s2 = 0; s2 < t.sector_states.size(); ++s2) {
        if (t.sector_momentum[s2] == -p) {
          CHECK(t.sector_states[s2].size() == t.sector_states[s].size());
          found = true;
        }
      }
      CHECK(found);
    }
  }
  SUBCASE("dimension cap enforced") {
    CHECK_THROWS(FockTruncation::make(kTwoPi, 1.0, 3, 6, 1000));
  }
  SUBCASE("polynomial validation") {
    CHECK_THROWS(PolySpec{{0.0, 0.0, 0.0, 1.0}}.validate());   // odd, unbounded below
    CHECK_THROWS(PolySpec{{0.0, 0.0, -1.0}}.validate());       // negative leading term
    PolySpec::phi4(0.1).validate();
    PolySpec::zero().validate();
  }
}

TEST_CASE("free operators") {
  const auto t = FockTruncation::make(kTwoPi, 1.0, 2, 3);
  const auto ops = build_operators(t, PolySpec::zero());
  CHECK(ops.ground_energy == 0.0);
  CHECK(ops.hermiticity_deviation == 0.0);
  SUBCASE("spectrum is the occupation sum of mu") {
    for (std::size_t s = 0; s < ops.n_sectors(); ++s) {
      for (int i = 0; i < ops.eigenvalues[s].size(); ++i) {
        CHECK(ops.eigenvalues[s](i) >= -1e-14);
      }
    }
    const auto rep = spectrum_condition(ops, {0.0});
    CHECK(rep.per_velocity[0].min_eig == 0.0);
    CHECK(rep.per_velocity[0].gap == doctest::Approx(1.0).epsilon(1e-13));  // one particle at k=0
  }
  SUBCASE("boosted free spectrum stays nonnegative (Fourier-exact)") {
    const auto rep = spectrum_condition(ops, {0.6, -0.6, 0.9});
    for (const auto& r : rep.per_velocity) {
      CHECK(r.min_eig >= -1e-14);
      CHECK(r.ground_sector_momentum == 0);
      CHECK(r.ph_bound_pass);
    }
  }
}

TEST_CASE("interaction matrix elements against the dense oracle") {
  const auto t = FockTruncation::make(kTwoPi, 1.0, 1, 2);
  CHECK(t.dimension == 10);  // 1 + 3 + 6
  const double g = 0.7;
  const auto ops = build_operators(t, PolySpec::mass_shift(g));
  DenseOracle oracle(t);
  const Eigen::MatrixXd expect = oracle.mass_shift_matrix(g);
  const Eigen::MatrixXd got = oracle.assemble(ops);
  CHECK((expect - got).cwiseAbs().maxCoeff() < 1e-13);

  SUBCASE("vacuum diagonal of the normal-ordered quartic vanishes") {
    const auto ops4 = build_operators(t, PolySpec::phi4(0.1));
    // the vacuum state is the single member of some sector with dim .. find p=0 sector
    for (std::size_t s = 0; s < ops4.n_sectors(); ++s) {
      if (t.sector_momentum[s] != 0) continue;
      for (std::size_t i = 0; i < t.sector_states[s].size(); ++i) {
        bool vac = true;
        for (auto o : t.sector_states[s][i]) vac = vac && (o == 0);
        if (vac) {
          CHECK(ops4.h_int[s](static_cast<int>(i), static_cast<int>(i)) == 0.0);
        }
      }
    }
  }
  SUBCASE("momentum commutes with the interaction") {
    const auto ops4 = build_operators(t, PolySpec::phi4(0.1));
    CHECK(verify_momentum_commutation(ops4) == 0.0);
  }
}

TEST_CASE("quadratic model approaches the exact shifted-frequency spectrum") {
  // Single mode (K = 0): P = phi^2 g/2 is an exactly solvable frequency
  // shift; the truncated low spectrum converges to E_n = n sqrt(m^2+g) + E_0
  // with E_0 = (sqrt(m^2+g) - m)/2 - g/(4m).
  const double g = 0.4;
  const auto t = FockTruncation::make(kTwoPi, 1.0, 0, 60);
  const auto ops = build_operators(t, PolySpec::mass_shift(g));
  const double omega = std::sqrt(1.0 + g);
  const double e0 = 0.5 * (omega - 1.0) - 0.25 * g;
  CHECK(ops.ground_energy == doctest::Approx(e0).epsilon(1e-10));
  const Eigen::VectorXd& lam = ops.eigenvalues[0];
  for (int n = 1; n <= 4; ++n) {
    CHECK(lam(n) - lam(0) == doctest::Approx(n * omega).epsilon(1e-9));
  }
}

TEST_CASE("quartic spectrum condition at truncation") {
  const auto t = FockTruncation::make(kTwoPi, 1.0, 2, 4);
  const auto ops = build_operators(t, PolySpec::phi4(0.1));
  CHECK(ops.hermiticity_deviation < 1e-13);
  CHECK(ops.ground_energy < 0.0);  // normal-ordered quartic pushes the vacuum down

  const auto rep = spectrum_condition(ops, {0.0, 0.3, -0.3, 0.6, -0.6}, 1e-3);
  for (const auto& r : rep.per_velocity) {
    CHECK(r.min_eig >= -1e-3);
    CHECK(r.ground_sector_momentum == 0);
    CHECK(r.momentum_residual == 0.0);
    CHECK(r.gap > 0.0);
    CHECK(r.ph_bound_pass);
  }

  SUBCASE("refinement moves the minimum toward zero") {
    const auto t2 = FockTruncation::make(kTwoPi, 1.0, 3, 6);
    const auto ops2 = build_operators(t2, PolySpec::phi4(0.1));
    const auto rep2 = spectrum_condition(ops2, {0.6}, 1e-3);
    const auto rep1 = spectrum_condition(ops, {0.6}, 1e-3);
    CHECK(rep2.per_velocity[0].min_eig >= rep1.per_velocity[0].min_eig - 1e-12);
  }
}

TEST_CASE("heat kernel and Gibbs state") {
  const auto t = FockTruncation::make(kTwoPi, 1.0, 1, 10);
  const auto ops = build_operators(t, PolySpec::zero());

  SUBCASE("product formula within the explicit particle-cap budget") {
    for (double v : {0.0, 0.3}) {
      const auto rep = heat_kernel_and_gibbs(ops, 2.0, v, 99);
      CHECK(rep.partition_function <= rep.free_product_formula);
      const double rel = (rep.free_product_formula - rep.partition_function) /
                         rep.free_product_formula;
      CHECK(rel <= rep.particle_cap_bound / rep.free_product_formula);
      CHECK(rep.particle_cap_bound / rep.free_product_formula < 1e-7);
      CHECK(rep.gibbs_identity_value == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("KMS and cyclicity residuals") {
    const auto rep = heat_kernel_and_gibbs(ops, 1.0, 0.3, 1234, 5);
    CHECK(rep.kms_residual < 1e-10);
    CHECK(rep.cyclicity_residual < 1e-12);
  }
  SUBCASE("beta must be positive") {
    CHECK_THROWS(heat_kernel_and_gibbs(ops, -1.0, 0.0, 1));
  }
}

TEST_CASE("analyticity chain and the product-formula lemma") {
  SUBCASE("single-mode truncation has only the P = 0 sector: terms vanish") {
    const auto t = FockTruncation::make(kTwoPi, 1.0, 0, 8);
    const auto ops = build_operators(t, PolySpec::phi4(0.1));
    const auto rep = analyticity_check(ops, 1.0, 0.5, 0.25, 4, 7, 10);
    CHECK(rep.taylor_terms[0] > 0.0);
    for (std::size_t n = 1; n < rep.taylor_terms.size(); ++n) {
      CHECK(rep.taylor_terms[n] == 0.0);
    }
    CHECK(rep.terms_pass);
  }
  SUBCASE("free field at K = 2 satisfies the geometric envelope") {
    const auto t = FockTruncation::make(kTwoPi, 1.0, 2, 4);
    const auto ops = build_operators(t, PolySpec::zero());
    const auto rep = analyticity_check(ops, 1.0, 0.5, 0.25, 8, 7, 0);
    CHECK(rep.terms_pass);
    for (std::size_t n = 1; n < rep.bounds.size(); ++n) {
      CHECK(rep.bounds[n] / rep.bounds[n - 1] ==
            doctest::Approx(0.5 / 0.75).epsilon(1e-13));  // Gamma/(1 - eps)
    }
  }
  SUBCASE("quartic truncation satisfies the term bounds") {
    const auto t = FockTruncation::make(kTwoPi, 1.0, 2, 4);
    const auto ops = build_operators(t, PolySpec::phi4(0.1));
    const auto rep = analyticity_check(ops, 1.0, 0.5, 0.25, 6, 7, 0);
    CHECK(rep.terms_pass);
    for (std::size_t n = 0; n < rep.taylor_terms.size(); ++n) {
      CHECK(rep.taylor_terms[n] <= rep.bounds[n] * (1.0 + 1e-12));
    }
  }
  SUBCASE("abstract inequality on 1000 random commuting triples") {
    const auto t = FockTruncation::make(kTwoPi, 1.0, 0, 2);
    const auto ops = build_operators(t, PolySpec::zero());
    const auto rep = analyticity_check(ops, 1.0, 0.5, 0.25, 2, 2024, 1000);
    CHECK(rep.trotter_trials == 1000);
    CHECK(rep.trotter_max_violation <= 1e-10);
  }
  SUBCASE("parameter validation") {
    const auto t = FockTruncation::make(kTwoPi, 1.0, 0, 2);
    const auto ops = build_operators(t, PolySpec::zero());
    CHECK_THROWS(analyticity_check(ops, 1.0, 1.2, 0.1, 4, 1));
    CHECK_THROWS(analyticity_check(ops, 1.0, 0.5, 0.6, 4, 1));
    CHECK_THROWS(analyticity_check(ops, 1.0, 0.5, 0.25, 1, 1));
  }
}

TEST_CASE("gaussian Feynman-Kac") {
  const auto t = FockTruncation::make(kTwoPi, 1.0, 2, 4);
  Rng rng(5);
  rp::TestMember f, g;
  f.center = 0.5;
  f.width = 0.05;
  f.lo = f.center - 9.0 * f.width;
  f.hi = f.center + 9.0 * f.width;
  g.center = 0.8;
  g.width = 0.06;
  g.lo = g.center - 9.0 * g.width;
  g.hi = g.center + 9.0 * g.width;
  f.amp.resize(static_cast<std::size_t>(t.n_modes()));
  g.amp.resize(static_cast<std::size_t>(t.n_modes()));
  for (auto& c : f.amp) c = rng.cnormal();
  for (auto& c : g.amp) c = rng.cnormal();

  SUBCASE("dual-path agreement across T, including the T = 0 isometry") {
    for (double T : {0.0, 0.5, 1.0}) {
      for (double v : {0.0, 0.6}) {
        const auto rep = fk_gaussian_check(T, f, g, t, v);
        CHECK(rep.deviation < 1e-8 * rep.scale);
      }
    }
  }
  SUBCASE("heat kernel decays the pairing in T") {
    const auto r0 = fk_gaussian_check(0.0, f, f, t, 0.3);
    const auto r1 = fk_gaussian_check(1.0, f, f, t, 0.3);
    CHECK(std::abs(r1.quantum) < std::abs(r0.quantum));
  }
  SUBCASE("narrow bumps approach the sharp-time closed form") {
    // Both routes tend to sum_k conj(f_k) g_k e^{-(s+s'+T) mu_+}/(2 mu) as
    // the bump widths shrink (Laplace correction ~ (width mu)^2).
    const double s = 0.45, sp = 0.7, T = 0.5, v = 0.6, width = 0.003;
    rp::TestMember nf = f, ng = g;
    nf.center = s;
    nf.width = width;
    nf.lo = s - 9.0 * width;
    nf.hi = s + 9.0 * width;
    ng.center = sp;
    ng.width = width;
    ng.lo = sp - 9.0 * width;
    ng.hi = sp + 9.0 * width;
    const double mass = width * std::sqrt(kTwoPi);
    const auto rep = fk_gaussian_check(T, nf, ng, t, v);
    complexd closed{0.0, 0.0};
    for (int m = 0; m < t.n_modes(); ++m) {
      const double mu = t.mode_mu(m);
      const double mu_p = mu + v * t.mode_momentum(m);
      closed += std::conj(nf.amp[static_cast<std::size_t>(m)]) *
                ng.amp[static_cast<std::size_t>(m)] * std::exp(-(s + sp + T) * mu_p) /
                (2.0 * mu);
    }
    CHECK(std::abs(rep.quantum / (mass * mass) - closed) < 2e-4 * std::abs(closed));
    CHECK(std::abs(rep.classical / (mass * mass) - closed) < 2e-4 * std::abs(closed));
  }
  SUBCASE("interacting polynomial rejected") {
    CHECK_THROWS(fk_gaussian_check(0.5, f, g, t, 0.3, PolySpec::phi4(0.1)));
  }
}

TEST_CASE("Gibbs two-point oracle pins the torus kernel branch labels") {
  // Anti-time-ordered two-point function of the truncated Gibbs state of
  // H + vP, computed with explicit field matrices, against the two-branch
  // compact kernel: the branch labelled "-" matches the state of +v.
  const double beta = 2.0, v = 0.6, tau = 0.6, x = 0.9;
  const auto t = FockTruncation::make(kTwoPi, 1.0, 1, 14);
  const auto ops = build_operators(t, PolySpec::zero());
  DenseOracle oracle(t);

  const int dim = static_cast<int>(t.dimension);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  {
    int offset = 0;
    for (std::size_t s = 0; s < ops.n_sectors(); ++s) {
      const int d = static_cast<int>(ops.h_free[s].size());
      for (int i = 0; i < d; ++i) {
        h(offset + i, offset + i) = ops.h_free[s](i) + v * ops.momentum[s];
      }
      offset += d;
    }
  }
  const Eigen::MatrixXcd phi_x = oracle.field_matrix(x);
  const Eigen::MatrixXcd phi_0 = oracle.field_matrix(0.0);
  Eigen::VectorXd w1(dim), w2(dim);
  double z = 0.0;
  for (int i = 0; i < dim; ++i) {
    w1(i) = std::exp(-(beta - tau) * h(i, i));
    w2(i) = std::exp(-tau * h(i, i));
    z += std::exp(-beta * h(i, i));
  }
  // <phi_I(0, x') phi_I(tau, x)> = Tr(e^{-(b-tau)H} phi(x') e^{-tau H} phi(x))/Z
  const complexd gibbs =
      (w1.cast<complexd>().asDiagonal() * phi_0 * w2.cast<complexd>().asDiagonal() * phi_x)
          .trace() /
      z;

  const auto spec =
      periodize::CompactSpec::make(beta, symbols::BoostSpec::make1d(1.0, v), {kTwoPi});
  const complexd minus = periodize::torus_kernel(tau, 0.0, {x}, spec, {1}, -1);
  const complexd plus = periodize::torus_kernel(tau, 0.0, {x}, spec, {1}, +1);
  CHECK(std::abs(gibbs - minus) < 2e-9 * std::abs(minus));  // N-cap remainder
  CHECK(std::abs(gibbs - plus) > 1e-2 * std::abs(plus));  // the printed labels are swapped
  CHECK(std::abs(plus - std::conj(minus)) < 1e-14);
}
