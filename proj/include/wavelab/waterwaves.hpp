#pragma once

#include <optional>

#include "wavelab/divcurl.hpp"
#include "wavelab/fields.hpp"
#include "wavelab/forcing.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"
#include "wavelab/records.hpp"

namespace wavelab {

// Unknowns of the straightened water-waves system. psi lives in the zero-mean
// gauge; tangential_mean carries the k = 0 mode of the tangential surface
// velocity, which the Hodge potentials cannot represent on the torus, and
// evolves by the averaged tangential momentum equation.
struct WaterWavesState {
  HField zeta;
  HField psi;
  StripVec3 omega;
  Vec2 tangential_mean{0.0, 0.0};
  double t = 0.0;
};

struct ClRhs {
  HField dzeta, dpsi;
  StripVec3 domega;
  Vec2 dmean{0.0, 0.0};
};

struct MonitorTrip : std::runtime_error {
  std::string kind;  // "depth" or "rayleigh_taylor"
  double t;
  double min_depth;
  double min_rt;
  MonitorTrip(std::string k, double time, double d, double a)
      : std::runtime_error("monitor trip (" + k + ") at t = " + std::to_string(time)),
        kind(std::move(k)),
        t(time),
        min_depth(d),
        min_rt(a) {}
};

// Rayleigh-Taylor coefficient 1 + eps (d_t + eps V.grad) w at the surface;
// d_t w by a one-sided difference over the last accepted step.
HField rayleigh_taylor(const HField& w_surf_prev, const HField& w_surf_curr,
                       const HVec& v_surf_curr, double dt, const Params& p, const Grid& g);

struct SobolevDiagnostics {
  double zeta_hs[4] = {0, 0, 0, 0};  // |zeta|_{H^s}, s = 0..3
  double omega_l2 = 0.0;             // strip L2, plain measure
  double grad_mu_u_l2 = 0.0;         // strip L2 of nabla^mu U^mu
};

SobolevDiagnostics sobolev_diagnostics(const WaterWavesState& s, const DivCurlSolution& sol,
                                       const Grid& g);

class WaterWavesStepper {
 public:
  WaterWavesStepper(const Grid& g, HField bathymetry, const Params& p, PressureForcing forcing);

  // One right-hand-side evaluation; solves the div-curl problem internally.
  ClRhs rhs(const WaterWavesState& s, DivCurlSolution* sol_out = nullptr);

  // Classical RK4 step. psi is re-gauged to zero mean afterwards. The depth
  // monitor always runs on the result; the Rayleigh-Taylor monitor runs when
  // a previous surface velocity is supplied. Throws MonitorTrip.
  WaterWavesState step_rk4(const WaterWavesState& s, double dt,
                           const HField* w_surf_prev = nullptr);

  // dt = cfl * dx / max(1, eps |V_surf|_inf) with unit gravity-wave speed.
  double auto_dt(const WaterWavesState& s, double cfl = 0.5);

  // Solve at the accepted state (records, monitors).
  DivCurlSolution solve_state(const WaterWavesState& s);

  const Params& params() const { return params_; }
  const HField& bathymetry() const { return b_; }
  const Grid& grid() const { return grid_; }
  const PressureForcing& forcing() const { return forcing_; }

 private:
  Grid grid_;
  HField b_;
  Params params_;
  PressureForcing forcing_;
  DivCurlSolver solver_;
};

// Projects the initial vorticity onto divergence-free data (violation norm
// reported), then time-steps with per-step records. Monitor trips stop the
// run and are reported on the result instead of propagating.
WwRun run_waterwaves(WaterWavesState state, const HField& b, const Params& p, const Grid& g,
                     const PressureForcing& forcing, double dt, int nsteps, int record_every = 1,
                     double* init_div_violation = nullptr);

// Finite-difference-in-time residuals of the two scalar trace transport laws
// d_t(omega_b . N_b) + eps div([omega_b . N_b + 1/Ro] V_b) = 0 and the
// surface analogue. Fourth-order interior stencils; requires records at every
// step and at least five of them.
struct TransportResiduals {
  double bottom = 0.0;
  double surface = 0.0;
};
TransportResiduals trace_transport_residual(const WwRun& run, const Params& p, const Grid& g);

}  // namespace wavelab
