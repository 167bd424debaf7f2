#pragma once

#include <string>
#include <vector>

#include "wavelab/fields.hpp"

namespace wavelab {

// Per-step observables of a water-waves run, enough to evaluate the trace
// transport laws, the Q-equation residual and the model comparison offline.
struct WwRecord {
  double t = 0.0;
  HField zeta;
  HVec v_bar;
  HVec q;       // Q[eps zeta, beta b](psi, omega) from the stored vorticity
  HVec v_surf;  // V at z = 0
  HVec v_bott;  // V at z = -1
  HVec u_par;
  HField w_surf;
  HField omega_n_surf;  // omega|surf . N^mu
  HField omega_n_bott;  // omega|bott . N_b^mu
  double min_depth = 0.0;
  double min_rt = 1.0;
  double omega_div = 0.0;
  double zeta_h3 = 0.0, omega_l2 = 0.0;
  double mass = 0.0;
};

struct SweRecord {
  double t = 0.0;
  HField zeta;
  HVec v_bar, q;
  double min_depth = 0.0;
  double mass = 0.0, energy = 0.0, enstrophy = 0.0;
};

struct WwRun {
  double dt = 0.0;
  int record_every = 1;
  std::vector<WwRecord> records;
  bool tripped = false;
  std::string trip_kind;
  double trip_t = 0.0;
};

struct SweRun {
  double dt = 0.0;
  int record_every = 1;
  std::vector<SweRecord> records;
  bool tripped = false;
  std::string trip_kind;
  double trip_t = 0.0;
};

}  // namespace wavelab
