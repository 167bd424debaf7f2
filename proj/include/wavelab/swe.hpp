#pragma once

#include "wavelab/fields.hpp"
#include "wavelab/forcing.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"
#include "wavelab/records.hpp"
#include "wavelab/strip.hpp"

namespace wavelab {

struct SweState {
  HField zeta;
  HVec v_bar;
  HVec q;
  double t = 0.0;
};

struct SweRhs {
  HField dzeta;
  HVec dv, dq;
};

struct ConservationReport {
  double mass = 0.0;       // integral of zeta
  double energy = 0.0;     // (1/2) integral (zeta^2 + h |Vbar|^2)
  double enstrophy = 0.0;  // integral h q^2, q = (eps perp-div Vbar + eps/Ro)/h
};

ConservationReport conservation(const SweState& s, const HField& b, const Params& p,
                                const Grid& g);

HVec q_rhs(const HVec& q, const HVec& v_bar, const Params& p, const Grid& g);

class SweStepper {
 public:
  SweStepper(const Grid& g, HField bathymetry, const Params& p, PressureForcing forcing);

  SweRhs rhs(const SweState& s) const;
  SweState step_rk4(const SweState& s, double dt) const;  // throws MonitorTrip via DepthViolation
  double auto_dt(const SweState& s, double cfl = 0.5) const;

  const HField& bathymetry() const { return b_; }
  const Params& params() const { return params_; }

 private:
  Grid grid_;
  HField b_;
  Params params_;
  PressureForcing forcing_;
};

SweRun run_swe(SweState state, const HField& b, const Params& p, const Grid& g,
               const PressureForcing& forcing, double dt, int nsteps, int record_every = 1);

// Q[eps zeta, beta b](psi, omega): depth-normalized double vertical integral
// of the perpendicular horizontal vorticity, on the straightened strip.
HVec q_from_omega(const StripVec3& omega, const SigmaMap& m, const Grid& g);

// Truncated WKB velocity: V = Vbar + sqrt(mu)(h int_z^0 omega_h^perp - Q),
// w = -mu (1+z) d/dx (h Vbar).
struct WkbFields {
  StripField vx, vy, w;
};
WkbFields wkb_reconstruct(const HVec& v_bar, const StripVec3& omega, const SigmaMap& m,
                          const Params& p, const Grid& g);

// Sup-norm differences between a water-waves run and a Saint-Venant run at
// matching record times.
struct ModelError {
  double zeta = 0.0;
  double v_bar = 0.0;
  double sqrtmu_q = 0.0;
  double combined = 0.0;
  double v_surf_wkb = 0.0;  // |V_surf - (Vbar - sqrt(mu) Q)|, water-waves run only
};
ModelError compare_models(const WwRun& ww, const SweRun& sw, const Params& p, const Grid& g);

// Residual of the Q evolution equation evaluated on Q(t) from the stored
// water-waves vorticity; one max-norm value per interior record time.
std::vector<double> q_equation_residual(const WwRun& run, const Params& p, const Grid& g);

}  // namespace wavelab
