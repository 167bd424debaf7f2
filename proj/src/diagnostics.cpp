#include "wavelab/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/spectral.hpp"
#include "wavelab/swe.hpp"
#include "wavelab/waterwaves.hpp"

namespace wavelab {

SlopeFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw std::invalid_argument("loglog_fit: need at least 3 points");
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] > xs[i + 1]))
      throw std::invalid_argument("loglog_fit: sweep values must be strictly decreasing");
  for (size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("loglog_fit: values must be positive");

  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  SlopeFit f;
  double denom = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double r = std::log(ys[i]) - (f.intercept + f.slope * std::log(xs[i]));
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

double dispersion_exact(double k_phys, double mu) {
  double smu = std::sqrt(mu);
  return std::sqrt(k_phys * std::tanh(smu * k_phys) / smu);
}

namespace {

double frequency_from_mode_ratio(double ratio, double t_end) {
  double r = std::max(-1.0, std::min(1.0, ratio));
  return std::acos(r) / t_end;
}

double mode_real(const HField& f, int mode, const Grid& g) {
  std::vector<cdouble> fh(static_cast<size_t>(g.nmodes()));
  g.fft(f.v.data(), fh.data());
  return fh[static_cast<size_t>(mode)].real();
}

}  // namespace

double dispersion_ww_frequency(int mode, double mu, int nx, int nz, double period) {
  Grid g(nx, nz, mu, period);
  Params p = make_params(1e-6, 0.0, mu, INFINITY);
  double k_phys = g.wavenumber(mode);
  double w_th = dispersion_exact(k_phys, mu);
  double t_end = 1.0 / w_th;
  const int nsteps = 256;
  double dt = t_end / nsteps;

  HField b(nx), zeta(nx), psi(nx);
  for (int i = 0; i < nx; ++i) zeta[i] = std::cos(k_phys * g.x_nodes()[static_cast<size_t>(i)]);
  WaterWavesState s{zeta, psi, StripVec3(nx, nz), {0.0, 0.0}, 0.0};
  WaterWavesStepper stepper(g, b, p, PressureForcing::none());
  double a0 = mode_real(s.zeta, mode, g);
  for (int n = 0; n < nsteps; ++n) s = stepper.step_rk4(s, dt);
  double a1 = mode_real(s.zeta, mode, g);
  return frequency_from_mode_ratio(a1 / a0, t_end);
}

double dispersion_swe_frequency(int mode, double mu, int nx, double period) {
  Grid g(nx, 4, mu, period);
  Params p = make_params(1e-6, 0.0, mu, INFINITY);
  double k_phys = g.wavenumber(mode);
  double t_end = 1.0 / k_phys;
  const int nsteps = 256;
  double dt = t_end / nsteps;

  HField b(nx), zeta(nx);
  for (int i = 0; i < nx; ++i) zeta[i] = std::cos(k_phys * g.x_nodes()[static_cast<size_t>(i)]);
  SweState s{zeta, HVec(nx), HVec(nx), 0.0};
  SweStepper stepper(g, b, p, PressureForcing::none());
  double a0 = mode_real(s.zeta, mode, g);
  for (int n = 0; n < nsteps; ++n) s = stepper.step_rk4(s, dt);
  double a1 = mode_real(s.zeta, mode, g);
  return frequency_from_mode_ratio(a1 / a0, t_end);
}

double inertial_return_error(double eps, double ro, double dt) {
  const int nx = 8;
  Grid g(nx, 4, 0.01, two_pi);
  Params p = make_params(eps, 0.0, 0.01, ro);
  double period_t = two_pi * ro / eps;
  int nsteps = static_cast<int>(std::llround(period_t / dt));
  double dt_eff = period_t / nsteps;

  HField b(nx);
  SweState s{HField(nx), HVec(nx, 0.3, 0.0), HVec(nx), 0.0};
  SweStepper stepper(g, b, p, PressureForcing::none());
  HVec v0 = s.v_bar;
  for (int n = 0; n < nsteps; ++n) s = stepper.step_rk4(s, dt_eff);
  double e = 0.0;
  for (int i = 0; i < nx; ++i) {
    e = std::max(e, std::abs(s.v_bar.x[i] - v0.x[i]));
    e = std::max(e, std::abs(s.v_bar.y[i] - v0.y[i]));
  }
  return e;
}

}  // namespace wavelab
