#include "pwick/rp.hpp"

#include <Eigen/Eigenvalues>

namespace pwick::rp {

double TestMember::profile(double t) const {
  if (t <= lo || t >= hi) return 0.0;
  if (kind == Profile::indicator) return 1.0;
  const double z = (t - center) / width;
  return std::exp(-0.5 * z * z);
}

TestMember TestMember::slab(double lo, double hi, std::vector<complexd> amp) {
  require(hi > lo, "TestMember::slab: empty window");
  TestMember m;
  m.kind = Profile::indicator;
  m.center = 0.5 * (lo + hi);
  m.width = hi - lo;
  m.lo = lo;
  m.hi = hi;
  m.amp = std::move(amp);
  return m;
}

namespace {

void finalize_window(TestMember& m) {
  if (m.lo == 0.0 && m.hi == 0.0) {
    m.lo = std::max(m.center - 9.0 * m.width, 1e-9);
    m.hi = m.center + 9.0 * m.width;
  }
  require(m.lo >= 0.0 && m.hi > m.lo, "TestMember: support must sit inside the half-space");
}

double estimate_condition(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const auto& ev = es.eigenvalues();
  const double lo = std::max(ev.minCoeff(), 0.0);
  return lo > 0.0 ? ev.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

TestFunctionFamily TestFunctionFamily::random_temporal(const SpatialLattice& lat, int n_members,
                                                       std::uint64_t seed, double support_hi) {
  require(n_members >= 1, "TestFunctionFamily: need at least one member");
  Rng rng(seed);
  TestFunctionFamily fam;
  fam.half = HalfSpace::positive_time;
  fam.lat = lat;
  fam.seed = seed;
  for (int i = 0; i < n_members; ++i) {
    TestMember m;
    if (i > 0 && i % 5 == 0) {
      // deterministic single-mode slab alongside the randomized bumps
      std::vector<complexd> amp(lat.size(), complexd{0.0, 0.0});
      amp[static_cast<std::size_t>(i) % lat.size()] = 1.0;
      m = TestMember::slab(0.1 * support_hi, 0.6 * support_hi, std::move(amp));
    } else {
      m.center = rng.uniform(0.15 * support_hi, 0.8 * support_hi);
      m.width = rng.uniform(0.02 * support_hi, 0.08 * support_hi);
      // keep the +-9 sigma window inside (0, support_hi)
      m.width = std::min({m.width, (support_hi - m.center) / 9.5, m.center / 9.5});
      m.amp.resize(lat.size());
      for (auto& a : m.amp) a = rng.cnormal();
      finalize_window(m);
    }
    fam.members.push_back(std::move(m));
  }
  // L2 Gram over (axis x transverse); near-dependence is flagged via the
  // condition number, not rejected.
  const QuadRule tq = gauss_legendre(64, 0.0, support_hi * 2.0);
  const int n = n_members;
  Eigen::MatrixXcd gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      complexd tsum{0.0, 0.0};
      for (std::size_t a = 0; a < tq.size(); ++a) {
        tsum += tq.weights[a] * fam.members[i].profile(tq.nodes[a]) *
                fam.members[j].profile(tq.nodes[a]);
      }
      complexd ksum{0.0, 0.0};
      for (std::size_t k = 0; k < lat.size(); ++k) {
        ksum += std::conj(fam.members[i].amp[k]) * fam.members[j].amp[k];
      }
      gram(i, j) = tsum * ksum;
    }
  }
  fam.condition_estimate = estimate_condition(gram);
  return fam;
}

TestFunctionFamily TestFunctionFamily::random_spatial(int n_e_nodes, double e_span, int n_members,
                                                      std::uint64_t seed, double support_hi) {
  require(n_members >= 1, "TestFunctionFamily: need at least one member");
  Rng rng(seed);
  TestFunctionFamily fam;
  fam.half = HalfSpace::positive_x1;
  fam.e_quad = gauss_legendre(n_e_nodes, -e_span, e_span);
  fam.seed = seed;
  for (int i = 0; i < n_members; ++i) {
    TestMember m;
    m.center = rng.uniform(0.15 * support_hi, 0.8 * support_hi);
    m.width = rng.uniform(0.02 * support_hi, 0.08 * support_hi);
    m.amp.resize(fam.e_quad.size());
    // Smooth random E-profiles: a few random Fourier modes against a Gaussian
    // envelope, so the transverse frequency content stays inside e_span.
    std::array<complexd, 3> c{rng.cnormal(), rng.cnormal(), rng.cnormal()};
    std::array<double, 3> om{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                             rng.uniform(-1.5, 1.5)};
    for (std::size_t j = 0; j < fam.e_quad.size(); ++j) {
      const double e = fam.e_quad.nodes[j];
      complexd val{0.0, 0.0};
      for (int a = 0; a < 3; ++a) val += c[a] * std::polar(1.0, om[a] * e);
      m.amp[j] = val * std::exp(-0.08 * e * e);
    }
    finalize_window(m);
    fam.members.push_back(std::move(m));
  }
  return fam;
}


SpatialFunction os_quantize(const TestMember& f, const SpatialLattice& lat, int sign,
                            const BoostSpec& b, int quad_nodes) {
  require(sign == +1 || sign == -1, "os_quantize: sign must be +-1");
  require(f.lo >= 0.0, "os_quantize: support violation (negative times)");
  require(f.amp.size() == lat.size(), "os_quantize: amplitude/lattice mismatch");
  const QuadRule tq = gauss_legendre(quad_nodes, f.lo, f.hi);
  SpatialFunction out = SpatialFunction::zero(lat);
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const double mpm = lattice::mu_pm_mode(lat, k, b, sign);
    double acc_re = 0.0;
    for (std::size_t a = 0; a < tq.size(); ++a) {
      acc_re += tq.weights[a] * f.profile(tq.nodes[a]) * std::exp(-tq.nodes[a] * mpm);
    }
    out.coeff[k] = f.amp[k] * acc_re;
  }
  return out;
}

namespace {

// <f_i, K f_j> where K acts per transverse channel c with weight w_c and the
// axis kernel exp(-(s + s') r_c); the double integral runs over both supports.
complexd reflected_pairing(const TestMember& fi, const TestMember& fj,
                           const std::vector<double>& rate, const std::vector<double>& weight,
                           const std::vector<complexd>& pair_amp, int quad_nodes) {
  const QuadRule qi = gauss_legendre(quad_nodes, fi.lo, fi.hi);
  const QuadRule qj = gauss_legendre(quad_nodes, fj.lo, fj.hi);
  complexd acc{0.0, 0.0};
  for (std::size_t c = 0; c < rate.size(); ++c) {
    double si = 0.0, sj = 0.0;
    for (std::size_t a = 0; a < qi.size(); ++a) {
      si += qi.weights[a] * fi.profile(qi.nodes[a]) * std::exp(-qi.nodes[a] * rate[c]);
    }
    for (std::size_t a = 0; a < qj.size(); ++a) {
      sj += qj.weights[a] * fj.profile(qj.nodes[a]) * std::exp(-qj.nodes[a] * rate[c]);
    }
    acc += weight[c] * pair_amp[c] * si * sj;
  }
  return acc;
}

GramReport finish_report(Eigen::MatrixXcd m, double tolerance, std::uint64_t seed) {
  GramReport rep;
  rep.family_seed = seed;
  rep.tolerance = tolerance;
  rep.hermiticity_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  rep.matrix = std::move(m);
  rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  rep.min_eig = rep.eigenvalues.front();
  const double norm = std::max(std::abs(rep.eigenvalues.front()), std::abs(rep.eigenvalues.back()));
  rep.verdict = rep.min_eig >= -tolerance * std::max(norm, 1e-300);
  return rep;
}

}  // namespace

GramReport gram_reflection(const TestFunctionFamily& fam, Reflection refl, const BoostSpec& b,
                           double tolerance, int quad_nodes, int sign) {
  const int n = static_cast<int>(fam.members.size());
  require(n >= 1, "gram_reflection: empty family");
  require(sign == +1 || sign == -1, "gram_reflection: sign must be +-1");
  Eigen::MatrixXcd m(n, n);

  std::vector<double> rate, weight;
  if (refl == Reflection::theta) {
    require(fam.half == HalfSpace::positive_time || fam.half == HalfSpace::negative_time,
            "gram_reflection: theta needs a temporal half-space family");
    // thetaD on the positive-time half: axis rate mu_+(k); D theta uses mu_-.
    const std::size_t nk = fam.lat.size();
    rate.resize(nk);
    weight.resize(nk);
    for (std::size_t k = 0; k < nk; ++k) {
      rate[k] = lattice::mu_pm_mode(fam.lat, k, b, sign);
      weight[k] = 1.0 / (2.0 * lattice::mu_mode(fam.lat, k, b));
    }
  } else {
    require(fam.half == HalfSpace::positive_x1,
            "gram_reflection: pi_n needs a positive-x1 family");
    const std::size_t ne = fam.e_quad.size();
    rate.resize(ne);
    weight.resize(ne);
    for (std::size_t j = 0; j < ne; ++j) {
      const auto sb = symbols::spatial_symbols(fam.e_quad.nodes[j], {}, b);
      // pi_n D has kernel e^{k_-(x1+x1')}, D pi_n has e^{-k_+(x1+x1')}.
      rate[j] = (sign == +1) ? -sb.k_minus : sb.k_plus;
      weight[j] = fam.e_quad.weights[j] / (kTwoPi * 2.0 * sb.nu);
    }
  }

  std::vector<complexd> pair_amp(rate.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t c = 0; c < rate.size(); ++c) {
        pair_amp[c] = std::conj(fam.members[i].amp[c]) * fam.members[j].amp[c];
      }
      m(i, j) = reflected_pairing(fam.members[i], fam.members[j], rate, weight, pair_amp,
                                  quad_nodes);
    }
  }
  return finish_report(std::move(m), tolerance, fam.seed);
}

IsometryReport verify_isometry(const TestFunctionFamily& fam, const BoostSpec& b) {
  require(fam.half == HalfSpace::positive_time, "verify_isometry: temporal family expected");
  const int n = static_cast<int>(fam.members.size());
  IsometryReport rep;

  const std::size_t nk = fam.lat.size();
  std::vector<double> mu(nk), rate_p(nk), rate_m(nk), weight(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    mu[k] = lattice::mu_mode(fam.lat, k, b);
    rate_p[k] = lattice::mu_pm_mode(fam.lat, k, b, +1);
    rate_m[k] = lattice::mu_pm_mode(fam.lat, k, b, -1);
    weight[k] = 1.0 / (2.0 * mu[k]);
  }

  std::vector<SpatialFunction> q_plus, q_minus;
  for (const auto& mem : fam.members) {
    q_plus.push_back(os_quantize(mem, fam.lat, +1, b, 56));
    q_minus.push_back(os_quantize(mem, fam.lat, -1, b, 56));
  }

  std::vector<complexd> pair_amp(nk);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t c = 0; c < nk; ++c) {
        pair_amp[c] = std::conj(fam.members[i].amp[c]) * fam.members[j].amp[c];
      }
      const complexd cls_p =
          reflected_pairing(fam.members[i], fam.members[j], rate_p, weight, pair_amp, 40);
      const complexd cls_m =
          reflected_pairing(fam.members[i], fam.members[j], rate_m, weight, pair_amp, 40);
      const complexd qtm_p = lattice::sobolev_half_inner(q_plus[i], q_plus[j], b);
      const complexd qtm_m = lattice::sobolev_half_inner(q_minus[i], q_minus[j], b);
      rep.max_plus_deviation = std::max(rep.max_plus_deviation, std::abs(cls_p - qtm_p));
      rep.max_minus_deviation = std::max(rep.max_minus_deviation, std::abs(cls_m - qtm_m));
      rep.scale = std::max({rep.scale, std::abs(cls_p), std::abs(cls_m)});
    }
  }
  return rep;
}

ContractionReport verify_contraction(const TestMember& f, const SpatialLattice& lat, int sign,
                                     const BoostSpec& b) {
  ContractionReport rep;
  const SpatialFunction fq = os_quantize(f, lat, sign, b, 64);
  rep.quantum_norm2 = lattice::sobolev_half_norm2(fq, b);

  // Classical norm <f, |D| f>: per mode an E-integral of |d~(E,k)| against
  // the profile's Fourier transform squared; |d~| decays like E^{-2}, the
  // profile factor is an analytic Gaussian, so a wide GL rule suffices.
  const QuadRule tq = gauss_legendre(64, f.lo, f.hi);
  const QuadRule eq = composite_gauss_legendre(12, -240.0, 240.0, 3.0);
  std::vector<double> ft2(eq.size());
  for (std::size_t e = 0; e < eq.size(); ++e) {
    complexd ft{0.0, 0.0};
    for (std::size_t a = 0; a < tq.size(); ++a) {
      ft += tq.weights[a] * f.profile(tq.nodes[a]) * std::polar(1.0, -eq.nodes[e] * tq.nodes[a]);
    }
    ft2[e] = std::norm(ft);
  }
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const double mu_k = lattice::mu_mode(lat, k, b);
    const double delta_k = lattice::delta_mode(lat, k, b);
    double acc = 0.0;
    for (std::size_t e = 0; e < eq.size(); ++e) {
      acc += eq.weights[e] * std::abs(symbols::propagator_symbol(eq.nodes[e], mu_k, delta_k)) *
             ft2[e];
    }
    rep.classical_norm2 += std::norm(f.amp[k]) * acc / kTwoPi;
  }
  return rep;
}

}  // namespace pwick::rp
