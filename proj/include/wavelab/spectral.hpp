#pragma once

#include <vector>

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

// -- horizontal (Fourier) ----------------------------------------------------

double mean(const HField& f);
HField& project_zero_mean(HField& f);

HField fourier_d_dx(const HField& f, const Grid& g);
HField dealias(const HField& f, const Grid& g);

// Fourier multipliers. frak_P is |D|/sqrt(1+sqrt(mu)|D|) (the k = 0 mode maps
// to 0); lambda_s is (1+|D|^2)^(s/2).
HField frak_P(const HField& f, double mu, const Grid& g);
HField inv_frak_P(const HField& f, double mu, const Grid& g);  // zero-mean gauge
HField lambda_s(const HField& f, double s, const Grid& g);

// Zero-mean solution of Laplacian u = f (f must have zero mean; the k = 0
// component of f is discarded).
HField inv_laplacian(const HField& f, const Grid& g);

// Hodge-Weyl decomposition u = grad(psi) + perp-grad(psi_tilde) + mean.
// psi and psi_tilde are in the zero-mean gauge; the horizontal mean of u is
// outside both ranges on the torus and is returned separately.
struct HodgeParts {
  HField psi, psi_tilde;
  Vec2 mean;
};
HodgeParts hodge_decompose(const HVec& u, const Grid& g);

// grad/Laplacian . f and perp-grad/Laplacian . f: the zero-mean u with
// Laplacian u = div f (resp. = perp-div f).
HField grad_over_lap(const HVec& f, const Grid& g);
HField perp_over_lap(const HVec& f, const Grid& g);

double h_norm(const HField& f, double s, const Grid& g);  // |Lambda^s f|_{L^2}
double l2_norm(const HField& f, const Grid& g);

// -- strip -------------------------------------------------------------------

StripField fourier_d_dx(const StripField& f, const Grid& g);
StripField cheb_d_dz(const StripField& f, const Grid& g);
StripField dealias(const StripField& f, const Grid& g);

// F(x,z) = integral_z^0 f(x,s) ds, exact at the nodes for collocated f.
StripField cumint_to_surface(const StripField& f, const Grid& g);
HField integrate_z(const StripField& f, const Grid& g);  // integral_{-1}^0

HField surface_row(const StripField& f);
HField bottom_row(const StripField& f);

double l2_strip(const StripField& f, const Grid& g);  // plain dx dz measure
double l2_strip(const StripVec3& f, const Grid& g);

// Interpolant value at an arbitrary point of the strip (trig sum in x,
// Chebyshev evaluation in z).
double eval_strip(const StripField& f, double x, double z, const Grid& g);

HField multiply(const HField& a, const HField& b);
StripField multiply(const StripField& a, const StripField& b);
StripField multiply_columns(const StripField& a, const HField& b);  // b(x) factor

}  // namespace wavelab
