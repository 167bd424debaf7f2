#include "wavelab/waterwaves.hpp"

#include <cmath>

#include "wavelab/parallel.hpp"
#include "wavelab/spectral.hpp"
#include "wavelab/swe.hpp"

namespace wavelab {

namespace {

// 4th-order centered time derivative at index i (needs i-2 .. i+2).
template <class Get>
HField fd4_time(const Get& get, int i, double dt, int nx) {
  HField out(nx);
  HField m2 = get(i - 2), m1 = get(i - 1), p1 = get(i + 1), p2 = get(i + 2);
  for (int j = 0; j < nx; ++j)
    out[j] = (-p2[j] + 8.0 * p1[j] - 8.0 * m1[j] + m2[j]) / (12.0 * dt);
  return out;
}

}  // namespace

HField rayleigh_taylor(const HField& w_surf_prev, const HField& w_surf_curr,
                       const HVec& v_surf_curr, double dt, const Params& p, const Grid& g) {
  if (w_surf_prev.nx != w_surf_curr.nx) throw std::invalid_argument("rayleigh_taylor: history mismatch");
  HField wx = fourier_d_dx(w_surf_curr, g);
  HField a(w_surf_curr.nx);
  for (int i = 0; i < a.nx; ++i) {
    double dwdt = (w_surf_curr[i] - w_surf_prev[i]) / dt;
    a[i] = 1.0 + p.eps * (dwdt + p.eps * v_surf_curr.x[i] * wx[i]);
  }
  return a;
}

SobolevDiagnostics sobolev_diagnostics(const WaterWavesState& s, const DivCurlSolution& sol,
                                       const Grid& g) {
  SobolevDiagnostics d;
  for (int k = 0; k <= 3; ++k) d.zeta_hs[k] = h_norm(s.zeta, static_cast<double>(k), g);
  d.omega_l2 = l2_strip(s.omega, g);

  const double smu = std::sqrt(g.mu());
  double acc = 0.0;
  for (const StripField* comp : {&sol.u_mu.x, &sol.u_mu.y, &sol.u_mu.z}) {
    StripField cx = fourier_d_dx(*comp, g);
    StripField cz = cheb_d_dz(*comp, g);
    scale(cx, smu);
    double nx2 = l2_strip(cx, g), nz2 = l2_strip(cz, g);
    acc += nx2 * nx2 + nz2 * nz2;
  }
  d.grad_mu_u_l2 = std::sqrt(acc);
  return d;
}

WaterWavesStepper::WaterWavesStepper(const Grid& g, HField bathymetry, const Params& p,
                                     PressureForcing forcing)
    : grid_(g), b_(std::move(bathymetry)), params_(p), forcing_(std::move(forcing)), solver_(g) {
  if (b_.nx != g.nx()) throw std::invalid_argument("waterwaves: bathymetry grid mismatch");
  if (p.mu != g.mu()) throw std::invalid_argument("waterwaves: params.mu differs from grid.mu");
}

ClRhs WaterWavesStepper::rhs(const WaterWavesState& s, DivCurlSolution* sol_out) {
  const Grid& g = grid_;
  const Params& p = params_;
  const int nx = g.nx(), nz = g.nz();
  const double mu = g.mu();
  const double smu = std::sqrt(mu);
  const double iro = p.inv_ro();

  DivCurlSolution sol =
      solver_.solve(s.zeta, b_, s.psi, s.omega, s.tangential_mean, p, true, false);
  SigmaMap m = build_sigma(s.zeta, b_, p, g);

  ClRhs out;

  // d_t zeta = (1/mu) U|surf . N^mu; the identity -div(h Vbar) makes its mean
  // vanish, so roundoff and solver residue are projected away.
  out.dzeta = sol.traces.surf_normal;
  scale(out.dzeta, 1.0 / mu);
  HField dzeta_raw = out.dzeta;  // un-projected, closes d_t sigma below
  project_zero_mean(out.dzeta);

  Traces om_t = traces(s.omega, m, g);
  HVec v_surf(nx);
  for (int i = 0; i < nx; ++i) {
    v_surf.x[i] = sol.traces.surf_x[i] / smu;
    v_surf.y[i] = sol.traces.surf_y[i] / smu;
  }
  const HField& w_surf = sol.traces.surf_z;

  // Coriolis-vorticity source (omega|surf . N + 1/Ro) V_surf^perp, shared by
  // the psi equation and the tangential-mean equation.
  HVec f(nx);
  for (int i = 0; i < nx; ++i) {
    double c = om_t.surf_normal[i] + iro;
    f.x[i] = c * (-v_surf.y[i]);
    f.y[i] = c * v_surf.x[i];
  }
  f.x = dealias(f.x, g);
  f.y = dealias(f.y, g);

  HField pres = forcing_.pressure(s.t, g);

  HField upar2(nx);
  for (int i = 0; i < nx; ++i)
    upar2[i] = sol.traces.tangential.x[i] * sol.traces.tangential.x[i] +
               sol.traces.tangential.y[i] * sol.traces.tangential.y[i];
  upar2 = dealias(upar2, g);

  HField wterm(nx);
  for (int i = 0; i < nx; ++i) {
    double gz = m.dx_zeta[i];
    wterm[i] = (1.0 + p.eps * p.eps * mu * gz * gz) * w_surf[i] * w_surf[i];
  }
  wterm = dealias(wterm, g);

  HField nl = grad_over_lap(f, g);
  out.dpsi = HField(nx);
  for (int i = 0; i < nx; ++i)
    out.dpsi[i] = -s.zeta[i] - 0.5 * p.eps * upar2[i] + 0.5 * p.eps / mu * wterm[i] -
                  p.eps * nl[i] - pres[i];
  project_zero_mean(out.dpsi);

  out.dmean = {-p.eps * mean(f.x), -p.eps * mean(f.y)};

  // Vorticity transport in the form d_t omega + eps V.grad_x omega
  // + (eps/mu) a d_z omega = (eps/mu)(omega.grad^sigma) U + (eps/(mu Ro)) dz^sigma U,
  // where a vanishes on both boundaries and absorbs the d_t sigma term closed
  // with the just-computed d_t zeta.
  StripField v1(nx, nz);
  parallel_for(nx, [&](int ix) {
    const double* u1 = sol.u_mu.x.column(ix);
    double* c = v1.column(ix);
    for (int j = 0; j < nz; ++j) c[j] = u1[j] / smu;
  });

  StripField a(nx, nz);
  const auto& zs = g.z_nodes();
  parallel_for(nx, [&](int ix) {
    const double* u1 = sol.u_mu.x.column(ix);
    const double* u3 = sol.u_mu.z.column(ix);
    const double* sx = m.dx_sigma.column(ix);
    double* c = a.column(ix);
    double un = dzeta_raw[ix] * mu;  // U|surf . N^mu
    for (int j = 0; j < nz; ++j)
      c[j] = (u3[j] - smu * u1[j] * sx[j] - (zs[static_cast<size_t>(j)] + 1.0) * un) / m.h[ix];
  });

  out.domega = StripVec3(nx, nz);
  const StripField* omega_c[3] = {&s.omega.x, &s.omega.y, &s.omega.z};
  const StripField* u_c[3] = {&sol.u_mu.x, &sol.u_mu.y, &sol.u_mu.z};
  StripField* d_c[3] = {&out.domega.x, &out.domega.y, &out.domega.z};
  for (int c = 0; c < 3; ++c) {
    StripField wx = fourier_d_dx(*omega_c[c], g);
    StripField wz = cheb_d_dz(*omega_c[c], g);
    StripField ux_s = sigma_dx(*u_c[c], m, g);
    StripField uz_s = sigma_dz(*u_c[c], m, g);

    StripField adv1 = dealias(multiply(v1, wx), g);
    StripField adv2 = dealias(multiply(a, wz), g);
    StripField st1 = dealias(multiply(s.omega.x, ux_s), g);
    StripField st2 = dealias(multiply(s.omega.z, uz_s), g);

    StripField& dst = *d_c[c];
    dst = StripField(nx, nz);
    for (size_t i = 0; i < dst.v.size(); ++i)
      dst.v[i] = -p.eps * adv1.v[i] - p.eps / mu * adv2.v[i] +
                 p.eps / smu * st1.v[i] + p.eps / mu * st2.v[i] +
                 p.eps * iro / mu * uz_s.v[i];
  }

  if (sol_out) *sol_out = std::move(sol);
  return out;
}

WaterWavesState WaterWavesStepper::step_rk4(const WaterWavesState& s, double dt,
                                            const HField* w_surf_prev) {
  auto advance = [&](const WaterWavesState& base, const ClRhs& k, double c) {
    WaterWavesState r = base;
    axpy(r.zeta, c, k.dzeta);
    axpy(r.psi, c, k.dpsi);
    axpy(r.omega, c, k.domega);
    r.tangential_mean[0] += c * k.dmean[0];
    r.tangential_mean[1] += c * k.dmean[1];
    return r;
  };

  ClRhs k1, k2, k3, k4;
  try {
    k1 = rhs(s);
    WaterWavesState s2 = advance(s, k1, 0.5 * dt);
    s2.t = s.t + 0.5 * dt;
    k2 = rhs(s2);
    WaterWavesState s3 = advance(s, k2, 0.5 * dt);
    s3.t = s.t + 0.5 * dt;
    k3 = rhs(s3);
    WaterWavesState s4 = advance(s, k3, dt);
    s4.t = s.t + dt;
    k4 = rhs(s4);
  } catch (const DepthViolation& d) {
    throw MonitorTrip("depth", s.t, d.min_depth, 1.0);
  }

  WaterWavesState r = s;
  r.t = s.t + dt;
  const double c1 = dt / 6.0, c2 = dt / 3.0;
  axpy(r.zeta, c1, k1.dzeta);
  axpy(r.zeta, c2, k2.dzeta);
  axpy(r.zeta, c2, k3.dzeta);
  axpy(r.zeta, c1, k4.dzeta);
  axpy(r.psi, c1, k1.dpsi);
  axpy(r.psi, c2, k2.dpsi);
  axpy(r.psi, c2, k3.dpsi);
  axpy(r.psi, c1, k4.dpsi);
  axpy(r.omega, c1, k1.domega);
  axpy(r.omega, c2, k2.domega);
  axpy(r.omega, c2, k3.domega);
  axpy(r.omega, c1, k4.domega);
  for (int i = 0; i < 2; ++i)
    r.tangential_mean[static_cast<size_t>(i)] +=
        c1 * k1.dmean[static_cast<size_t>(i)] + c2 * k2.dmean[static_cast<size_t>(i)] +
        c2 * k3.dmean[static_cast<size_t>(i)] + c1 * k4.dmean[static_cast<size_t>(i)];

  project_zero_mean(r.psi);

  DepthFloor floor = depth_floor(r.zeta, b_, params_);
  if (floor.flagged) throw MonitorTrip("depth", r.t, floor.min_depth, 1.0);

  if (w_surf_prev) {
    DivCurlSolution sol = solve_state(r);
    HVec v_surf(grid_.nx());
    const double smu = std::sqrt(grid_.mu());
    for (int i = 0; i < grid_.nx(); ++i) {
      v_surf.x[i] = sol.traces.surf_x[i] / smu;
      v_surf.y[i] = sol.traces.surf_y[i] / smu;
    }
    HField rt = rayleigh_taylor(*w_surf_prev, sol.traces.surf_z, v_surf, dt, params_, grid_);
    double mn = min_value(rt);
    if (mn < params_.a_min) throw MonitorTrip("rayleigh_taylor", r.t, floor.min_depth, mn);
  }
  return r;
}

double WaterWavesStepper::auto_dt(const WaterWavesState& s, double cfl) {
  DivCurlSolution sol = solve_state(s);
  const double smu = std::sqrt(grid_.mu());
  double vmax = std::max(linf(sol.traces.surf_x), linf(sol.traces.surf_y)) / smu;
  return cfl * grid_.dx() / std::max(1.0, params_.eps * vmax);
}

DivCurlSolution WaterWavesStepper::solve_state(const WaterWavesState& s) {
  return solver_.solve(s.zeta, b_, s.psi, s.omega, s.tangential_mean, params_, true, false);
}

WwRun run_waterwaves(WaterWavesState state, const HField& b, const Params& p, const Grid& g,
                     const PressureForcing& forcing, double dt, int nsteps, int record_every,
                     double* init_div_violation) {
  WaterWavesStepper stepper(g, b, p, forcing);

  {
    SigmaMap m = build_sigma(state.zeta, b, p, g);
    double violation = 0.0;
    state.omega = project_divergence_free(state.omega, m, g, &violation);
    if (init_div_violation) *init_div_violation = violation;
  }
  project_zero_mean(state.psi);

  WwRun run;
  run.dt = dt;
  run.record_every = record_every;

  const double smu = std::sqrt(g.mu());
  HField w_surf_prev;
  bool have_prev = false;

  auto record = [&](const WaterWavesState& s, const DivCurlSolution& sol, double min_rt) {
    SigmaMap m = build_sigma(s.zeta, b, p, g);
    Traces om_t = traces(s.omega, m, g);
    WwRecord rec;
    rec.t = s.t;
    rec.zeta = s.zeta;
    rec.v_bar = sol.v_bar;
    rec.q = q_from_omega(s.omega, m, g);
    rec.v_surf = HVec(g.nx());
    rec.v_bott = HVec(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
      rec.v_surf.x[i] = sol.traces.surf_x[i] / smu;
      rec.v_surf.y[i] = sol.traces.surf_y[i] / smu;
      rec.v_bott.x[i] = sol.traces.bott_x[i] / smu;
      rec.v_bott.y[i] = sol.traces.bott_y[i] / smu;
    }
    rec.u_par = sol.traces.tangential;
    rec.w_surf = sol.traces.surf_z;
    rec.omega_n_surf = om_t.surf_normal;
    rec.omega_n_bott = om_t.bott_normal;
    rec.min_depth = depth_floor(s.zeta, b, p).min_depth;
    rec.min_rt = min_rt;
    rec.omega_div = linf(sigma_div(s.omega, m, g));
    rec.zeta_h3 = h_norm(s.zeta, 3.0, g);
    rec.omega_l2 = l2_strip(s.omega, g);
    rec.mass = mean(s.zeta) * g.period();
    run.records.push_back(std::move(rec));
  };

  {
    DivCurlSolution sol0 = stepper.solve_state(state);
    record(state, sol0, 1.0);
    w_surf_prev = sol0.traces.surf_z;
    have_prev = true;
  }

  bool last_recorded = true;
  double last_min_rt = 1.0;
  // Diagnostic snapshot of the last accepted state when a monitor trips
  // between records.
  auto snapshot_on_trip = [&]() {
    if (last_recorded) return;
    try {
      DivCurlSolution sol = stepper.solve_state(state);
      record(state, sol, last_min_rt);
    } catch (const std::exception&) {
    }
  };

  for (int n = 0; n < nsteps; ++n) {
    WaterWavesState next;
    try {
      next = stepper.step_rk4(state, dt, nullptr);
    } catch (const MonitorTrip& trip) {
      run.tripped = true;
      run.trip_kind = trip.kind;
      run.trip_t = trip.t;
      snapshot_on_trip();
      break;
    } catch (const DepthViolation&) {
      run.tripped = true;
      run.trip_kind = "depth";
      run.trip_t = state.t;
      snapshot_on_trip();
      break;
    }

    DivCurlSolution sol = stepper.solve_state(next);
    HVec v_surf(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
      v_surf.x[i] = sol.traces.surf_x[i] / smu;
      v_surf.y[i] = sol.traces.surf_y[i] / smu;
    }
    double min_rt = 1.0;
    if (have_prev) {
      HField rt = rayleigh_taylor(w_surf_prev, sol.traces.surf_z, v_surf, dt, p, g);
      min_rt = min_value(rt);
    }
    w_surf_prev = sol.traces.surf_z;
    state = next;
    last_min_rt = min_rt;

    last_recorded = ((n + 1) % record_every == 0 || n + 1 == nsteps);
    if (last_recorded) record(state, sol, min_rt);

    if (min_rt < p.a_min) {
      run.tripped = true;
      run.trip_kind = "rayleigh_taylor";
      run.trip_t = state.t;
      if (!last_recorded) record(state, sol, min_rt);
      break;
    }
    DepthFloor floor = depth_floor(state.zeta, b, p);
    if (floor.flagged) {
      run.tripped = true;
      run.trip_kind = "depth";
      run.trip_t = state.t;
      if (!last_recorded) record(state, sol, min_rt);
      break;
    }
  }
  return run;
}

TransportResiduals trace_transport_residual(const WwRun& run, const Params& p, const Grid& g) {
  const auto& rec = run.records;
  if (run.record_every != 1 || rec.size() < 5)
    throw std::invalid_argument("trace_transport_residual: need per-step records, >= 5 of them");
  const double dt = run.dt;
  const double iro = p.inv_ro();
  const int nx = g.nx();

  TransportResiduals res;
  for (size_t i = 2; i + 2 < rec.size(); ++i) {
    HField dfb = fd4_time([&](int j) { return rec[static_cast<size_t>(j)].omega_n_bott; },
                          static_cast<int>(i), dt, nx);
    HField dfs = fd4_time([&](int j) { return rec[static_cast<size_t>(j)].omega_n_surf; },
                          static_cast<int>(i), dt, nx);

    HField flux_b(nx), flux_s(nx);
    for (int j = 0; j < nx; ++j) {
      flux_b[j] = (rec[i].omega_n_bott[j] + iro) * rec[i].v_bott.x[j];
      flux_s[j] = (rec[i].omega_n_surf[j] + iro) * rec[i].v_surf.x[j];
    }
    HField div_b = fourier_d_dx(flux_b, g);
    HField div_s = fourier_d_dx(flux_s, g);
    for (int j = 0; j < nx; ++j) {
      res.bottom = std::max(res.bottom, std::abs(dfb[j] + p.eps * div_b[j]));
      res.surface = std::max(res.surface, std::abs(dfs[j] + p.eps * div_s[j]));
    }
  }
  return res;
}

}  // namespace wavelab
