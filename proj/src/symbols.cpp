#include "pwick/symbols.hpp"

#include <algorithm>
#include <numeric>

namespace pwick::symbols {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

BoostSpec BoostSpec::make(double mass, std::vector<double> velocity) {
  require(mass > 0.0, "BoostSpec: mass must be positive");
  require(!velocity.empty(), "BoostSpec: velocity must have dimension >= 1");
  for (double c : velocity) require(is_finite(c), "BoostSpec: velocity must be finite");
  BoostSpec b;
  b.mass = mass;
  b.velocity = std::move(velocity);
  b.dim = static_cast<int>(b.velocity.size()) + 1;
  const double speed = norm2(b.velocity);
  require(speed < 1.0, "BoostSpec: |velocity| must be < 1");
  b.rapidity = std::atanh(speed);
  if (speed > 0.0) {
    b.direction.resize(b.velocity.size());
    for (std::size_t i = 0; i < b.velocity.size(); ++i) b.direction[i] = b.velocity[i] / speed;
  } else {
    b.direction.assign(b.velocity.size(), 0.0);
    b.direction[0] = 1.0;
  }
  return b;
}

double BoostSpec::speed() const { return norm2(velocity); }

BoostSpec BoostSpec::reversed() const {
  std::vector<double> neg(velocity.size());
  for (std::size_t i = 0; i < velocity.size(); ++i) neg[i] = -velocity[i];
  return make(mass, std::move(neg));
}

Momentum Momentum::make(double energy, std::vector<double> kvec, const BoostSpec& b) {
  require(is_finite(energy), "Momentum: energy must be finite");
  require(kvec.size() == b.velocity.size(), "Momentum: spatial dimension mismatch");
  for (double c : kvec) require(is_finite(c), "Momentum: momentum must be finite");
  Momentum k;
  k.energy = energy;
  k.kvec = std::move(kvec);
  const double kn = dot(k.kvec, b.direction);
  k.kperp.resize(k.kvec.size());
  for (std::size_t i = 0; i < k.kvec.size(); ++i) k.kperp[i] = k.kvec[i] - kn * b.direction[i];
  return k;
}

double mu_of(const std::vector<double>& kvec, const BoostSpec& b) {
  return std::sqrt(dot(kvec, kvec) + b.mass * b.mass);
}

double delta_of(const std::vector<double>& kvec, const BoostSpec& b) {
  return dot(kvec, b.velocity);
}

SymbolBundle one_particle_symbols(const Momentum& k, const BoostSpec& b) {
  SymbolBundle s;
  s.mu = mu_of(k.kvec, b);
  s.delta = delta_of(k.kvec, b);
  s.mu_plus = s.mu + s.delta;
  s.mu_minus = s.mu - s.delta;
  s.d_tilde = propagator_symbol(k.energy, s.mu, s.delta);
  const auto [kt, lt] = split_symbols(k, b);
  s.k_tilde = kt;
  s.l_tilde = lt;
  s.sigma_tilde = sigma_symbol(k, b);
  return s;
}

complexd propagator_symbol(double energy, double mu, double delta) {
  const complexd e(energy, delta);
  return 1.0 / (e * e + mu * mu);
}

complexd propagator_symbol(const Momentum& k, const BoostSpec& b) {
  return propagator_symbol(k.energy, mu_of(k.kvec, b), delta_of(k.kvec, b));
}

std::pair<double, double> split_symbols(const Momentum& k, const BoostSpec& b) {
  const double mu = mu_of(k.kvec, b);
  const double delta = delta_of(k.kvec, b);
  const double e2 = k.energy * k.energy;
  const double md = mu - delta, pd = mu + delta;
  const double denom = (e2 + md * md) * (e2 + pd * pd);
  return {(e2 + mu * mu - delta * delta) / denom, -2.0 * k.energy * delta / denom};
}

complexd sigma_symbol(const Momentum& k, const BoostSpec& b) {
  // Principal branch: Re(d~) > 0 everywhere (a consequence of mu^2 > delta^2),
  // so std::sqrt's principal branch already has a positive real part and is
  // continuous in k.
  return std::sqrt(propagator_symbol(k, b));
}

SpatialSymbolBundle spatial_symbols(double energy, const std::vector<double>& kperp,
                                    const BoostSpec& b) {
  require(is_finite(energy), "spatial_symbols: energy must be finite");
  const double ch = b.cosh_eta();
  const double th = b.tanh_eta();
  SpatialSymbolBundle s;
  double kp2 = 0.0;
  for (double c : kperp) kp2 += c * c;
  s.nu = std::sqrt(energy * energy + (kp2 + b.mass * b.mass) / (ch * ch));
  s.nu_plus = ch * ch * (s.nu + energy * th);
  s.nu_minus = ch * ch * (s.nu - energy * th);
  s.k_plus = (s.nu - energy * th) * ch * ch;
  s.k_minus = (-s.nu - energy * th) * ch * ch;
  return s;
}

BoundReport verify_symbol_bounds(const std::vector<Momentum>& samples, const BoostSpec& b) {
  require(!samples.empty(), "verify_symbol_bounds: empty sample set");
  BoundReport rep;
  rep.samples = samples.size();
  const double ch = b.cosh_eta();
  const double sh = std::abs(b.sinh_eta());
  const double tol = 1e-13;

  auto check = [&](const char* family, const Momentum& q, double lhs, double rhs) {
    // lhs <= rhs with relative slack; "strict" inequalities are realized with
    // this same margin (see the module notes on floating-point strictness).
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    if (lhs > rhs + tol * scale) {
      rep.violations.push_back({family, q.energy, q.kvec, lhs, rhs});
    }
  };

  for (const auto& q : samples) {
    const SymbolBundle s = one_particle_symbols(q, b);
    const double absd = std::abs(s.d_tilde);
    const double ctil = 1.0 / (q.energy * q.energy + s.mu * s.mu);
    check("a:k<=|d|", q, s.k_tilde, absd);
    check("a:|d|<=cosh*k", q, absd, ch * s.k_tilde);
    check("b:C/(2cosh^2)<k", q, 0.5 * ctil / (ch * ch), s.k_tilde);
    check("b:k<cosh^4*C", q, s.k_tilde, ch * ch * ch * ch * ctil);
    check("c:|l|<sinh*k", q, std::abs(s.l_tilde), sh * s.k_tilde);
    check("d:C/(2cosh^2)<|d|", q, 0.5 * ctil / (ch * ch), absd);
    check("d:|d|<cosh^5*C", q, absd, ch * ch * ch * ch * ch * ctil);
  }

  // Designated sequence k.n = |k| = -E cosh(eta): the ratio equals
  // 2 E^2 sinh/(2E^2 + m^2) and increases to sinh|eta|.
  rep.ratio_sup_target = sh;
  for (double e : {1e1, 1e2, 1e3, 1e4}) {
    std::vector<double> kvec(b.velocity.size(), 0.0);
    for (std::size_t i = 0; i < kvec.size(); ++i) kvec[i] = e * ch * b.direction[i];
    const Momentum q = Momentum::make(-e, kvec, b);
    const auto [kt, lt] = split_symbols(q, b);
    const double ratio = std::abs(lt) / kt;
    rep.ratio_sup_estimate = std::max(rep.ratio_sup_estimate, ratio);
    if (ratio > sh * (1.0 + tol)) {
      rep.violations.push_back({"e:sup-sequence", q.energy, q.kvec, ratio, sh});
    }
  }
  return rep;
}

}  // namespace pwick::symbols
