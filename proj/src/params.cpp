#include "wavelab/params.hpp"

#include <sstream>
#include <stdexcept>

namespace wavelab {

Params make_params(double eps, double beta, double mu, double ro, double mu_max, double h_min,
                   double a_min) {
  Params p;
  p.eps = eps;
  p.beta = beta;
  p.mu = mu;
  p.ro = ro;
  p.mu_max = mu_max;
  p.h_min = h_min;
  p.a_min = a_min;
  if (!(h_min > 0.0)) throw std::invalid_argument("params: h_min must be > 0");
  if (!(a_min > 0.0)) throw std::invalid_argument("params: a_min must be > 0");
  if (!(mu_max > 0.0)) throw std::invalid_argument("params: mu_max must be > 0");
  RegimeReport r = validate(p);
  if (!r.all_pass()) throw std::invalid_argument("params: " + r.summary());
  return p;
}

Params from_dimensional(const DimensionalScales& s, double mu_max, double h_min, double a_min) {
  if (!(s.a > 0.0)) throw std::invalid_argument("scales: a must be > 0");
  if (!(s.a_bott >= 0.0)) throw std::invalid_argument("scales: a_bott must be >= 0");
  if (!(s.H > 0.0)) throw std::invalid_argument("scales: H must be > 0");
  if (!(s.L > 0.0)) throw std::invalid_argument("scales: L must be > 0");
  if (!(s.f > 0.0)) throw std::invalid_argument("scales: f must be > 0");
  if (!(s.g > 0.0)) throw std::invalid_argument("scales: g must be > 0");
  double eps = s.a / s.H;
  double beta = s.a_bott / s.H;
  double mu = (s.H / s.L) * (s.H / s.L);
  double ro = s.a / (s.f * s.L) * std::sqrt(s.g / s.H);
  return make_params(eps, beta, mu, ro, mu_max, h_min, a_min);
}

bool RegimeReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RegimeReport::summary() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (!first) os << "; ";
    os << "violated " << c.name << " (value " << c.value << ")";
    first = false;
  }
  if (first) os << "all constraints satisfied";
  return os.str();
}

RegimeReport validate(const Params& p) {
  RegimeReport r;
  auto add = [&](std::string name, double value, bool pass, double margin) {
    r.checks.push_back({std::move(name), value, pass, margin});
  };
  add("0 < mu", p.mu, p.mu > 0.0, p.mu);
  add("mu <= mu_max", p.mu, p.mu <= p.mu_max, p.mu_max - p.mu);
  add("0 < eps", p.eps, p.eps > 0.0, p.eps);
  add("eps <= 1", p.eps, p.eps <= 1.0, 1.0 - p.eps);
  add("0 <= beta", p.beta, p.beta >= 0.0, p.beta);
  add("beta <= 1", p.beta, p.beta <= 1.0, 1.0 - p.beta);
  double ratio = p.eps * p.inv_ro();
  add("eps/Ro <= 1", ratio, p.ro > 0.0 && ratio <= 1.0, 1.0 - ratio);
  return r;
}

DepthFloor depth_floor(const HField& zeta, const HField& b, const Params& p) {
  if (zeta.nx != b.nx) throw std::invalid_argument("depth_floor: grid mismatch");
  double m = 1.0 + p.eps * zeta[0] - p.beta * b[0];
  for (int i = 0; i < zeta.nx; ++i)
    m = std::min(m, 1.0 + p.eps * zeta[i] - p.beta * b[i]);
  return {m, m < p.h_min};
}

}  // namespace wavelab
