#pragma once

#include <memory>
#include <vector>

#include "wavelab/fields.hpp"

namespace wavelab {

// Discretization of the strip S = torus x [-1,0]: Fourier collocation in x
// (nx equispaced nodes, nx a power of two), Chebyshev-Gauss-Lobatto
// collocation in z (nz nodes, z[0] = -1 bottom, z[nz-1] = 0 surface).
// Carries the shallowness parameter mu used to build Fourier multipliers.
// Immutable after construction; copies share the transform plans.
class Grid {
 public:
  Grid(int nx, int nz, double mu, double period = two_pi);

  int nx() const;
  int nz() const;
  double mu() const;
  double period() const;
  double dx() const;

  const std::vector<double>& x_nodes() const;
  const std::vector<double>& z_nodes() const;

  // Fourier side: nmodes = nx/2 + 1 nonnegative modes, wavenumber(m) =
  // m * 2*pi/period. Forward transform is normalized by 1/nx so that
  // coefficient 0 is the horizontal mean.
  int nmodes() const;
  double wavenumber(int m) const;
  int dealias_keep() const;  // largest kept mode index under the 2/3 rule
  void fft(const double* f, cdouble* fh) const;
  void ifft(const cdouble* fh, double* f) const;

  // z-column operators as dense row-major nz x nz matrices.
  const std::vector<double>& cheb_diff() const;    // d/dz at the nodes
  const std::vector<double>& cheb_cumint() const;  // f -> integral_z^0 f
  const std::vector<double>& cc_weights() const;   // integral_{-1}^0 f = w.f

  // Chebyshev series coefficients of a column (length nz), and pointwise
  // evaluation of the interpolant at arbitrary z in [-1,0].
  std::vector<double> cheb_coefficients(const double* column) const;
  static double cheb_eval(const std::vector<double>& coef, double z);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace wavelab
