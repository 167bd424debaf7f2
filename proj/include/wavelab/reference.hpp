#pragma once

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"

// Plain serial reference implementations of the hot kernels, kept for the
// test suite and the kernel benchmark. The transforms use the naive O(n^2)
// discrete sums, so they also cross-check the fft-backed path; the column
// kernels are the same arithmetic as the parallel versions and must agree
// bit for bit.
namespace wavelab::ref {

void dft(const Grid& g, const double* f, cdouble* fh);
void idft(const Grid& g, const cdouble* fh, double* f);

HField fourier_d_dx(const HField& f, const Grid& g);
StripField cheb_d_dz(const StripField& f, const Grid& g);
StripField cumint_to_surface(const StripField& f, const Grid& g);
StripField multiply(const StripField& a, const StripField& b);

}  // namespace wavelab::ref
