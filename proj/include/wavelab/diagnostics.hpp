#pragma once

#include <vector>

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of log residuals
};

// Least-squares fit of log(y) against log(x). Requires >= 3 strictly
// decreasing positive xs.
SlopeFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Linear standing-wave frequency experiments. A single-mode surface bump at
// negligible amplitude is stepped to a fixed phase and the frequency is read
// from the cosine ratio of the tracked mode.
double dispersion_exact(double k_phys, double mu);  // sqrt(k tanh(sqrt(mu) k)/sqrt(mu))
double dispersion_ww_frequency(int mode, double mu, int nx, int nz, double period = two_pi);
double dispersion_swe_frequency(int mode, double mu, int nx, double period = two_pi);

// |Vbar(T) - Vbar(0)| after one inertial period T = 2 pi Ro/eps at step size dt.
double inertial_return_error(double eps, double ro, double dt);

}  // namespace wavelab
