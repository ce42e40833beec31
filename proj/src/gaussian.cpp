#include "pwick/gaussian.hpp"

#include "pwick/kernels.hpp"
#include "pwick/thermal.hpp"

namespace pwick::gaussian {

double double_factorial_odd(int n) {
  require(n >= 0, "double_factorial_odd: n must be >= 0");
  double acc = 1.0;
  for (int k = 2 * n - 1; k > 1; k -= 2) acc *= k;
  return acc;
}

complexd pair_covariance(const MomentField& f, const MomentField& g, const MomentRequest& req) {
  const auto& lat = req.lat;
  require(f.fn.amp.size() == lat.size() && g.fn.amp.size() == lat.size(),
          "pair_covariance: mismatched grids");
  const QuadRule qf = gauss_legendre(req.quad_nodes, f.fn.lo, f.fn.hi);
  const QuadRule qg = gauss_legendre(req.quad_nodes, g.fn.lo, g.fn.hi);
  complexd acc{0.0, 0.0};
  for (std::size_t i = 0; i < lat.size(); ++i) {
    // Bilinear pairing: the k mode of f meets the -k mode of g.
    const complexd amp = f.fn.amp[lat.reflect(i)] * g.fn.amp[i];
    if (amp == complexd{0.0, 0.0}) continue;
    const double mu = lattice::mu_mode(lat, i, req.boost);
    const double delta = lattice::delta_mode(lat, i, req.boost);
    complexd dbl{0.0, 0.0};
    for (std::size_t a = 0; a < qf.size(); ++a) {
      const double pf = f.fn.profile(qf.nodes[a]);
      if (pf == 0.0) continue;
      for (std::size_t c = 0; c < qg.size(); ++c) {
        const double pg = g.fn.profile(qg.nodes[c]);
        if (pg == 0.0) continue;
        const double tau = qf.nodes[a] - qg.nodes[c];
        const complexd mode =
            req.route == CovarianceRoute::flat
                ? kernels::time_profile(tau, mu, delta)
                : periodize::cylinder_mode_closed(qf.nodes[a], qg.nodes[c], req.beta, mu, delta);
        dbl += qf.weights[a] * qg.weights[c] * pf * pg * mode;
      }
    }
    acc += amp * dbl;
  }
  return acc;
}

namespace {

complexd pairing_sum(const Eigen::MatrixXcd& cov, std::vector<int>& active) {
  if (active.empty()) return {1.0, 0.0};
  const int first = active.front();
  complexd acc{0.0, 0.0};
  for (std::size_t j = 1; j < active.size(); ++j) {
    const int partner = active[j];
    std::vector<int> rest;
    rest.reserve(active.size() - 2);
    for (std::size_t k = 1; k < active.size(); ++k) {
      if (k != j) rest.push_back(active[k]);
    }
    acc += cov(first, partner) * pairing_sum(cov, rest);
  }
  return acc;
}

Eigen::MatrixXcd covariance_matrix(const MomentRequest& req) {
  const int n = static_cast<int>(req.fields.size());
  Eigen::MatrixXcd cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      cov(i, j) = pair_covariance(req.fields[i], req.fields[j], req);
      cov(j, i) = cov(i, j);  // D = D^T
    }
  }
  return cov;
}

}  // namespace

complexd wick_moment_pairing(const MomentRequest& req) {
  const int n = static_cast<int>(req.fields.size());
  if (n % 2 == 1) return {0.0, 0.0};
  if (n == 0) return {1.0, 0.0};
  const Eigen::MatrixXcd cov = covariance_matrix(req);
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;
  return pairing_sum(cov, active);
}

complexd wick_moment(const MomentRequest& req) {
  if (req.pairing_mode == PairingMode::pairing_sum) return wick_moment_pairing(req);
  const int n = static_cast<int>(req.fields.size());
  if (n % 2 == 1) return {0.0, 0.0};
  if (n == 0) return {1.0, 0.0};
  const complexd s2 = pair_covariance(req.fields[0], req.fields[0], req);
  return wick_moment_recursion(s2, n);
}

complexd wick_moment_recursion(complexd s2, int n) {
  if (n % 2 == 1) return {0.0, 0.0};
  complexd acc{1.0, 0.0};
  for (int m = n; m >= 2; m -= 2) acc *= static_cast<double>(m - 1) * s2;
  return acc;
}

complexd wick_moment_polarized(const MomentRequest& req) {
  const int n = static_cast<int>(req.fields.size());
  if (n % 2 == 1) return {0.0, 0.0};
  if (n == 0) return {1.0, 0.0};
  require(n <= 12, "wick_moment_polarized: too many fields for the 2^n polarization oracle");
  const Eigen::MatrixXcd cov = covariance_matrix(req);
  // S(f_1..f_n) = (1/ 2^n n!) sum_{eps in {+-1}^n} (prod eps) S_n(sum eps_i f_i),
  // and S_n of a single argument follows the (n-1) S_2 S_{n-2} recursion with
  // S_2(sum eps f) = sum_{ij} eps_i eps_j cov(i,j).
  complexd acc{0.0, 0.0};
  for (int mask = 0; mask < (1 << n); ++mask) {
    double sign = 1.0;
    complexd s2{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const double ei = (mask >> i) & 1 ? 1.0 : -1.0;
      if (ei < 0) sign = -sign;
      for (int j = 0; j < n; ++j) {
        const double ej = (mask >> j) & 1 ? 1.0 : -1.0;
        s2 += ei * ej * cov(i, j);
      }
    }
    acc += sign * wick_moment_recursion(s2, n);
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return acc / (std::pow(2.0, n) * fact);
}

double quantized_norm(const SpatialFunction& h, int n, const BoostSpec& b) {
  require(n >= 0, "quantized_norm: n must be >= 0");
  return double_factorial_odd(n) * std::pow(lattice::sobolev_half_norm2(h, b), n);
}

namespace {

double pairing_sum_equal(double c, int two_n) {
  // All pair values equal: the sum over pairings of c^{n} has (2n-1)!! terms.
  std::vector<int> active(two_n);
  for (int i = 0; i < two_n; ++i) active[i] = i;
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Constant(two_n, two_n, complexd{c, 0.0});
  return pairing_sum(cov, active).real();
}

}  // namespace

double quantized_norm_via_pairings(const SpatialFunction& h, int n, const BoostSpec& b) {
  require(h.is_real(), "quantized_norm_via_pairings: h must be real-valued");
  // Bilinear sharp-time pairing through the reflected kernel at u = 0: the k
  // mode meets the -k mode against the weight 1/(2 mu).  For real h this is
  // <h,h>_{-1/2}, but the route keeps the classical-moment arithmetic.
  complexd c{0.0, 0.0};
  for (std::size_t i = 0; i < h.coeff.size(); ++i) {
    c += h.coeff[h.lat.reflect(i)] * h.coeff[i] / (2.0 * lattice::mu_mode(h.lat, i, b));
  }
  return pairing_sum_equal(c.real(), 2 * n);
}

double quantized_norm_thermal(const SpatialFunction& h, int n,
                              const periodize::CompactSpec& spec, int sign) {
  const auto v = thermal::kappa(h, spec, sign);
  return double_factorial_odd(n) * std::pow(thermal::norm2(v, spec.boost), n);
}

double quantized_norm_thermal_via_pairings(const SpatialFunction& h, int n,
                                           const periodize::CompactSpec& spec, int sign) {
  require(h.is_real(), "quantized_norm_thermal_via_pairings: h must be real-valued");
  // Bilinear sharp-time pairing through (theta D^c)(0, 0), mode k against -k.
  complexd c{0.0, 0.0};
  for (std::size_t i = 0; i < h.coeff.size(); ++i) {
    const double mu = lattice::mu_mode(h.lat, i, spec.boost);
    const double delta = lattice::delta_mode(h.lat, i, spec.boost);
    c += h.coeff[h.lat.reflect(i)] * h.coeff[i] *
         periodize::theta_dc_mode(0.0, 0.0, spec.beta, mu, delta, sign);
  }
  return pairing_sum_equal(c.real(), 2 * n);
}

FieldVectorBoundReport field_vector_bound(const std::vector<double>& e_nodes,
                                          const SpatialLattice& lat,
                                          const std::vector<std::vector<complexd>>& coeff,
                                          const BoostSpec& b) {
  require(coeff.size() == e_nodes.size(), "field_vector_bound: coefficient rows mismatch");
  FieldVectorBoundReport rep;
  const double ch = b.cosh_eta();
  rep.bound = ch * ch * ch * ch * ch;
  for (std::size_t j = 0; j < e_nodes.size(); ++j) {
    require(coeff[j].size() == lat.size(), "field_vector_bound: coefficient cols mismatch");
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const double mu = lattice::mu_mode(lat, i, b);
      const double delta = lattice::delta_mode(lat, i, b);
      const double w = std::norm(coeff[j][i]);
      if (w == 0.0) continue;
      rep.lhs += std::abs(symbols::propagator_symbol(e_nodes[j], mu, delta)) * w;
      rep.rhs_weight += w / (e_nodes[j] * e_nodes[j] + mu * mu);
    }
  }
  rep.ratio = rep.lhs / rep.rhs_weight;
  return rep;
}

}  // namespace pwick::gaussian
