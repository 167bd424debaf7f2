#include "wavelab/swe.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/spectral.hpp"

namespace wavelab {

ConservationReport conservation(const SweState& s, const HField& b, const Params& p,
                                const Grid& g) {
  ConservationReport r;
  const int nx = g.nx();
  const double dx = g.dx();
  HField vort = fourier_d_dx(s.v_bar.y, g);  // perp-div Vbar under y-invariance
  double mass = 0.0, energy = 0.0, enstrophy = 0.0;
  for (int i = 0; i < nx; ++i) {
    double h = 1.0 + p.eps * s.zeta[i] - p.beta * b[i];
    double v2 = s.v_bar.x[i] * s.v_bar.x[i] + s.v_bar.y[i] * s.v_bar.y[i];
    double q = (p.eps * vort[i] + p.eps * p.inv_ro()) / h;
    mass += s.zeta[i];
    energy += 0.5 * (s.zeta[i] * s.zeta[i] + h * v2);
    enstrophy += h * q * q;
  }
  r.mass = mass * dx;
  r.energy = energy * dx;
  r.enstrophy = enstrophy * dx;
  return r;
}

HVec q_rhs(const HVec& q, const HVec& v_bar, const Params& p, const Grid& g) {
  const int nx = g.nx();
  const double iro = p.inv_ro();
  HField qx_dx = fourier_d_dx(q.x, g);
  HField qy_dx = fourier_d_dx(q.y, g);
  HField vx_dx = fourier_d_dx(v_bar.x, g);
  HField vy_dx = fourier_d_dx(v_bar.y, g);

  HVec out(nx);
  for (int i = 0; i < nx; ++i) {
    out.x[i] = -(v_bar.x[i] * qx_dx[i]) - (q.x[i] * vx_dx[i]);
    out.y[i] = -(v_bar.x[i] * qy_dx[i]) - (q.x[i] * vy_dx[i]);
  }
  out.x = dealias(out.x, g);
  out.y = dealias(out.y, g);
  for (int i = 0; i < nx; ++i) {
    out.x[i] = p.eps * (out.x[i] + iro * q.y[i]);
    out.y[i] = p.eps * (out.y[i] - iro * q.x[i]);
  }
  return out;
}

SweStepper::SweStepper(const Grid& g, HField bathymetry, const Params& p, PressureForcing forcing)
    : grid_(g), b_(std::move(bathymetry)), params_(p), forcing_(std::move(forcing)) {
  if (b_.nx != g.nx()) throw std::invalid_argument("swe: bathymetry grid mismatch");
}

SweRhs SweStepper::rhs(const SweState& s) const {
  const Grid& g = grid_;
  const Params& p = params_;
  const int nx = g.nx();
  const double iro = p.inv_ro();

  HField hv(nx);
  for (int i = 0; i < nx; ++i) {
    double h = 1.0 + p.eps * s.zeta[i] - p.beta * b_[i];
    hv[i] = h * s.v_bar.x[i];
  }
  hv = dealias(hv, g);

  SweRhs out;
  out.dzeta = fourier_d_dx(hv, g);
  scale(out.dzeta, -1.0);
  project_zero_mean(out.dzeta);  // the exact flux form has zero mean

  HField zx = fourier_d_dx(s.zeta, g);
  HField vx_dx = fourier_d_dx(s.v_bar.x, g);
  HField vy_dx = fourier_d_dx(s.v_bar.y, g);
  HField px = forcing_.pressure_dx(s.t, g);

  HField adv_x(nx), adv_y(nx);
  for (int i = 0; i < nx; ++i) {
    adv_x[i] = s.v_bar.x[i] * vx_dx[i];
    adv_y[i] = s.v_bar.x[i] * vy_dx[i];
  }
  adv_x = dealias(adv_x, g);
  adv_y = dealias(adv_y, g);

  out.dv = HVec(nx);
  for (int i = 0; i < nx; ++i) {
    out.dv.x[i] = -p.eps * adv_x[i] - zx[i] + p.eps * iro * s.v_bar.y[i] - px[i];
    out.dv.y[i] = -p.eps * adv_y[i] - p.eps * iro * s.v_bar.x[i];
  }

  out.dq = q_rhs(s.q, s.v_bar, p, g);
  return out;
}

SweState SweStepper::step_rk4(const SweState& s, double dt) const {
  auto advance = [&](const SweState& base, const SweRhs& k, double c) {
    SweState r = base;
    axpy(r.zeta, c, k.dzeta);
    axpy(r.v_bar, c, k.dv);
    axpy(r.q, c, k.dq);
    return r;
  };

  SweRhs k1 = rhs(s);
  SweState s2 = advance(s, k1, 0.5 * dt);
  s2.t = s.t + 0.5 * dt;
  SweRhs k2 = rhs(s2);
  SweState s3 = advance(s, k2, 0.5 * dt);
  s3.t = s.t + 0.5 * dt;
  SweRhs k3 = rhs(s3);
  SweState s4 = advance(s, k3, dt);
  s4.t = s.t + dt;
  SweRhs k4 = rhs(s4);

  SweState r = s;
  r.t = s.t + dt;
  const double c1 = dt / 6.0, c2 = dt / 3.0;
  axpy(r.zeta, c1, k1.dzeta);
  axpy(r.zeta, c2, k2.dzeta);
  axpy(r.zeta, c2, k3.dzeta);
  axpy(r.zeta, c1, k4.dzeta);
  axpy(r.v_bar, c1, k1.dv);
  axpy(r.v_bar, c2, k2.dv);
  axpy(r.v_bar, c2, k3.dv);
  axpy(r.v_bar, c1, k4.dv);
  axpy(r.q, c1, k1.dq);
  axpy(r.q, c2, k2.dq);
  axpy(r.q, c2, k3.dq);
  axpy(r.q, c1, k4.dq);

  DepthFloor floor = depth_floor(r.zeta, b_, params_);
  if (floor.flagged) throw DepthViolation(floor.min_depth);
  return r;
}

double SweStepper::auto_dt(const SweState& s, double cfl) const {
  double vmax = linf(s.v_bar);
  return cfl * grid_.dx() / std::max(1.0, params_.eps * vmax);
}

SweRun run_swe(SweState state, const HField& b, const Params& p, const Grid& g,
               const PressureForcing& forcing, double dt, int nsteps, int record_every) {
  SweStepper stepper(g, b, p, forcing);
  SweRun run;
  run.dt = dt;
  run.record_every = record_every;

  auto record = [&](const SweState& s) {
    SweRecord rec;
    rec.t = s.t;
    rec.zeta = s.zeta;
    rec.v_bar = s.v_bar;
    rec.q = s.q;
    rec.min_depth = depth_floor(s.zeta, b, p).min_depth;
    ConservationReport c = conservation(s, b, p, g);
    rec.mass = c.mass;
    rec.energy = c.energy;
    rec.enstrophy = c.enstrophy;
    run.records.push_back(std::move(rec));
  };

  record(state);
  bool last_recorded = true;
  for (int n = 0; n < nsteps; ++n) {
    try {
      state = stepper.step_rk4(state, dt);
    } catch (const DepthViolation&) {
      run.tripped = true;
      run.trip_kind = "depth";
      run.trip_t = state.t;
      if (!last_recorded) record(state);  // snapshot of the last accepted state
      break;
    }
    last_recorded = ((n + 1) % record_every == 0 || n + 1 == nsteps);
    if (last_recorded) record(state);
  }
  return run;
}

HVec q_from_omega(const StripVec3& omega, const SigmaMap& m, const Grid& g) {
  // Q = (1/h) double integral of omega_h^perp over the fluid column; both
  // integrals carry the Jacobian h, leaving one net factor of h.
  StripField cum_x = cumint_to_surface(omega.y, g);
  StripField cum_y = cumint_to_surface(omega.x, g);
  HField ix = integrate_z(cum_x, g);
  HField iy = integrate_z(cum_y, g);
  HVec q(g.nx());
  for (int i = 0; i < g.nx(); ++i) {
    q.x[i] = -m.h[i] * ix[i];
    q.y[i] = m.h[i] * iy[i];
  }
  return q;
}

WkbFields wkb_reconstruct(const HVec& v_bar, const StripVec3& omega, const SigmaMap& m,
                          const Params& p, const Grid& g) {
  const int nx = g.nx(), nz = g.nz();
  const double mu = g.mu();
  const double smu = std::sqrt(mu);

  HVec q = q_from_omega(omega, m, g);
  StripField shear_x = cumint_to_surface(omega.y, g);  // integral of omega_h^perp, x comp = -omega_y
  StripField shear_y = cumint_to_surface(omega.x, g);

  WkbFields out{StripField(nx, nz), StripField(nx, nz), StripField(nx, nz)};
  for (int ixn = 0; ixn < nx; ++ixn) {
    for (int j = 0; j < nz; ++j) {
      double sx = -m.h[ixn] * shear_x.at(ixn, j);  // h carries the physical dz
      double sy = m.h[ixn] * shear_y.at(ixn, j);
      out.vx.at(ixn, j) = v_bar.x[ixn] + smu * (sx - q.x[ixn]);
      out.vy.at(ixn, j) = v_bar.y[ixn] + smu * (sy - q.y[ixn]);
    }
  }

  // w = -mu div((1 + z - beta b) Vbar) with the divergence at fixed physical
  // height: the column above the bottom is h (1 + z_strip), and the moving
  // lower limit contributes the beta b_x Vbar term.
  HField dv = fourier_d_dx(v_bar.x, g);
  const auto& zs = g.z_nodes();
  for (int ixn = 0; ixn < nx; ++ixn)
    for (int j = 0; j < nz; ++j)
      out.w.at(ixn, j) =
          -mu * (m.h[ixn] * (1.0 + zs[static_cast<size_t>(j)]) * dv[ixn] -
                 p.beta * m.dx_b[ixn] * v_bar.x[ixn]);
  return out;
}

ModelError compare_models(const WwRun& ww, const SweRun& sw, const Params& p, const Grid& g) {
  if (ww.records.size() != sw.records.size())
    throw std::invalid_argument("compare_models: record counts differ");
  const double smu = std::sqrt(g.mu());
  ModelError e;
  for (size_t r = 0; r < ww.records.size(); ++r) {
    const WwRecord& a = ww.records[r];
    const SweRecord& b = sw.records[r];
    if (std::abs(a.t - b.t) > 1e-12)
      throw std::invalid_argument("compare_models: record times differ");
    for (int i = 0; i < g.nx(); ++i) {
      e.zeta = std::max(e.zeta, std::abs(a.zeta[i] - b.zeta[i]));
      e.v_bar = std::max(e.v_bar, std::abs(a.v_bar.x[i] - b.v_bar.x[i]));
      e.v_bar = std::max(e.v_bar, std::abs(a.v_bar.y[i] - b.v_bar.y[i]));
      e.sqrtmu_q = std::max(e.sqrtmu_q, smu * std::abs(a.q.x[i] - b.q.x[i]));
      e.sqrtmu_q = std::max(e.sqrtmu_q, smu * std::abs(a.q.y[i] - b.q.y[i]));
      double wx = a.v_surf.x[i] - (a.v_bar.x[i] - smu * a.q.x[i]);
      double wy = a.v_surf.y[i] - (a.v_bar.y[i] - smu * a.q.y[i]);
      e.v_surf_wkb = std::max(e.v_surf_wkb, std::max(std::abs(wx), std::abs(wy)));
    }
  }
  (void)p;
  e.combined = std::max(e.zeta, std::max(e.v_bar, e.sqrtmu_q));
  return e;
}

std::vector<double> q_equation_residual(const WwRun& run, const Params& p, const Grid& g) {
  const auto& rec = run.records;
  if (run.record_every != 1 || rec.size() < 5)
    throw std::invalid_argument("q_equation_residual: need per-step records, >= 5 of them");
  const double dt = run.dt;
  const int nx = g.nx();
  std::vector<double> out;
  for (size_t i = 2; i + 2 < rec.size(); ++i) {
    HVec dq(nx);
    for (int j = 0; j < nx; ++j) {
      dq.x[j] = (-rec[i + 2].q.x[j] + 8.0 * rec[i + 1].q.x[j] - 8.0 * rec[i - 1].q.x[j] +
                 rec[i - 2].q.x[j]) /
                (12.0 * dt);
      dq.y[j] = (-rec[i + 2].q.y[j] + 8.0 * rec[i + 1].q.y[j] - 8.0 * rec[i - 1].q.y[j] +
                 rec[i - 2].q.y[j]) /
                (12.0 * dt);
    }
    HVec rhs = q_rhs(rec[i].q, rec[i].v_bar, p, g);
    double m = 0.0;
    for (int j = 0; j < nx; ++j) {
      m = std::max(m, std::abs(dq.x[j] - rhs.x[j]));
      m = std::max(m, std::abs(dq.y[j] - rhs.y[j]));
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace wavelab
