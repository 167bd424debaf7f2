#pragma once

#include <stdexcept>

#include "wavelab/fields.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"

namespace wavelab {

struct DepthViolation : std::runtime_error {
  double min_depth;
  explicit DepthViolation(double d)
      : std::runtime_error("depth floor violated, min depth = " + std::to_string(d)),
        min_depth(d) {}
};

// Geometry of the flattening diffeomorphism sigma(x,z) = z(eps*zeta - beta*b)
// + eps*zeta, together with the coefficient fields of the transformed
// operators. The y-row of P(Sigma) decouples for y-invariant fields, so only
// the in-plane entries are stored: p_xx = h (by 1 + dz_sigma = h), p_xz =
// -sqrt(mu)*dx_sigma, p_zz = (1 + mu*dx_sigma^2)/h.
struct SigmaMap {
  StripField sigma;
  StripField dx_sigma;
  HField dz_sigma;  // eps*zeta - beta*b, z-independent
  HField h;         // 1 + dz_sigma
  HField dx_zeta, dx_b;
  StripField p_xz, p_zz;
  double eps = 0.0, beta = 0.0, mu = 0.0;
};

struct Normals {
  HField surf_x;  // N^mu   = (-eps*sqrt(mu)*zeta_x, 0, 1)
  HField bott_x;  // N_b^mu = (-beta*sqrt(mu)*b_x,   0, 1)
};

// Throws DepthViolation when the water column drops below p.h_min.
SigmaMap build_sigma(const HField& zeta, const HField& b, const Params& p, const Grid& g);

Normals normals(const SigmaMap& m);

// sigma-twisted partial derivatives of a strip scalar.
StripField sigma_dx(const StripField& f, const SigmaMap& m, const Grid& g);
StripField sigma_dz(const StripField& f, const SigmaMap& m, const Grid& g);

// nabla^{sigma,mu}, div^{sigma,mu}, curl^{sigma,mu} with the sqrt(mu)
// horizontal weights; y-derivatives vanish (y-invariant fields).
StripVec3 sigma_grad(const StripField& f, const SigmaMap& m, const Grid& g);
StripField sigma_div(const StripVec3& a, const SigmaMap& m, const Grid& g);
StripVec3 sigma_curl(const StripVec3& a, const SigmaMap& m, const Grid& g);

// Depth average of one scalar component: (1/h) integral of (1+dz_sigma)*f dz.
HField vertical_average(const StripField& f, const SigmaMap& m, const Grid& g);

struct Traces {
  HField surf_x, surf_y, surf_z;  // values at z = 0
  HField bott_x, bott_y, bott_z;  // values at z = -1
  HVec tangential;                // A_par = (1/sqrt(mu)) A_h|surf + eps A_z|surf grad(zeta)
  HField surf_normal;             // A|surf . N^mu
  HField bott_normal;             // A|bott . N_b^mu
};

Traces traces(const StripVec3& a, const SigmaMap& m, const Grid& g);

}  // namespace wavelab
