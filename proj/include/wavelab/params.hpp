#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "wavelab/fields.hpp"

namespace wavelab {

// The four dimensionless numbers of the regime, plus the validity floors used
// by the runtime monitors. Plain aggregate; all checked entry points
// (make_params, from_dimensional, config parsing) go through make_params.
struct Params {
  double eps = 0.0;   // nonlinearity, a/H
  double beta = 0.0;  // bathymetry, a_bott/H
  double mu = 0.0;    // shallowness, (H/L)^2
  double ro = 1.0;    // Rossby number; may be +inf (no rotation)

  double mu_max = 1.0;
  double h_min = 0.05;
  double a_min = 0.1;

  double inv_ro() const { return std::isinf(ro) ? 0.0 : 1.0 / ro; }
};

struct DimensionalScales {
  double a;             // surface amplitude (m)
  double a_bott;        // bathymetry amplitude (m)
  double H;             // depth (m)
  double L;             // horizontal scale (m)
  double f;             // Coriolis frequency (1/s)
  double g = 9.81;      // gravity (m/s^2)
};

// Throws std::invalid_argument naming the violated inequality.
Params make_params(double eps, double beta, double mu, double ro, double mu_max = 1.0,
                   double h_min = 0.05, double a_min = 0.1);

Params from_dimensional(const DimensionalScales& s, double mu_max = 1.0, double h_min = 0.05,
                        double a_min = 0.1);

struct RegimeCheck {
  std::string name;  // the inequality, e.g. "eps <= 1"
  double value;
  bool pass;
  double margin;  // distance to the violated/satisfied bound
};

struct RegimeReport {
  std::vector<RegimeCheck> checks;
  bool all_pass() const;
  std::string summary() const;
};

RegimeReport validate(const Params& p);

struct DepthFloor {
  double min_depth;  // min over nodes of eps*zeta + 1 - beta*b
  bool flagged;      // below p.h_min
};

// Throws std::invalid_argument on grid size mismatch.
DepthFloor depth_floor(const HField& zeta, const HField& b, const Params& p);

}  // namespace wavelab
