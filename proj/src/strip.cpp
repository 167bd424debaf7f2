#include "wavelab/strip.hpp"

#include <cmath>

#include "wavelab/parallel.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

SigmaMap build_sigma(const HField& zeta, const HField& b, const Params& p, const Grid& g) {
  if (zeta.nx != g.nx() || b.nx != g.nx()) throw std::invalid_argument("build_sigma: grid mismatch");
  DepthFloor floor = depth_floor(zeta, b, p);
  if (floor.flagged) throw DepthViolation(floor.min_depth);

  SigmaMap m;
  m.eps = p.eps;
  m.beta = p.beta;
  m.mu = g.mu();

  const int nx = g.nx(), nz = g.nz();
  const auto& zs = g.z_nodes();

  m.dz_sigma = HField(nx);
  m.h = HField(nx);
  for (int i = 0; i < nx; ++i) {
    m.dz_sigma[i] = p.eps * zeta[i] - p.beta * b[i];
    m.h[i] = 1.0 + m.dz_sigma[i];
  }

  m.dx_zeta = fourier_d_dx(zeta, g);
  m.dx_b = fourier_d_dx(b, g);

  m.sigma = StripField(nx, nz);
  m.dx_sigma = StripField(nx, nz);
  m.p_xz = StripField(nx, nz);
  m.p_zz = StripField(nx, nz);
  const double mu = g.mu();
  const double smu = std::sqrt(mu);
  parallel_for(nx, [&](int ix) {
    for (int iz = 0; iz < nz; ++iz) {
      double z = zs[static_cast<size_t>(iz)];
      double sx = z * (p.eps * m.dx_zeta[ix] - p.beta * m.dx_b[ix]) + p.eps * m.dx_zeta[ix];
      m.sigma.at(ix, iz) = z * m.dz_sigma[ix] + p.eps * zeta[ix];
      m.dx_sigma.at(ix, iz) = sx;
      m.p_xz.at(ix, iz) = -smu * sx;
      m.p_zz.at(ix, iz) = (1.0 + mu * sx * sx) / m.h[ix];
    }
  });
  return m;
}

Normals normals(const SigmaMap& m) {
  const int nx = m.h.nx;
  Normals n{HField(nx), HField(nx)};
  const double smu = std::sqrt(m.mu);
  for (int i = 0; i < nx; ++i) {
    n.surf_x[i] = -m.eps * smu * m.dx_zeta[i];
    n.bott_x[i] = -m.beta * smu * m.dx_b[i];
  }
  return n;
}

StripField sigma_dz(const StripField& f, const SigmaMap& m, const Grid& g) {
  StripField fz = cheb_d_dz(f, g);
  parallel_for(f.nx, [&](int ix) {
    double inv = 1.0 / m.h[ix];
    double* col = fz.column(ix);
    for (int j = 0; j < f.nz; ++j) col[j] *= inv;
  });
  return fz;
}

StripField sigma_dx(const StripField& f, const SigmaMap& m, const Grid& g) {
  StripField fx = fourier_d_dx(f, g);
  StripField fz = cheb_d_dz(f, g);
  parallel_for(f.nx, [&](int ix) {
    double inv = 1.0 / m.h[ix];
    double* px = fx.column(ix);
    const double* pz = fz.column(ix);
    const double* sx = m.dx_sigma.column(ix);
    for (int j = 0; j < f.nz; ++j) px[j] -= sx[j] * inv * pz[j];
  });
  return fx;
}

StripVec3 sigma_grad(const StripField& f, const SigmaMap& m, const Grid& g) {
  StripVec3 out(f.nx, f.nz);
  const double smu = std::sqrt(g.mu());
  out.x = sigma_dx(f, m, g);
  scale(out.x, smu);
  out.z = sigma_dz(f, m, g);
  return out;
}

StripField sigma_div(const StripVec3& a, const SigmaMap& m, const Grid& g) {
  const double smu = std::sqrt(g.mu());
  StripField dx = sigma_dx(a.x, m, g);
  StripField out = sigma_dz(a.z, m, g);
  axpy(out, smu, dx);
  return out;
}

StripVec3 sigma_curl(const StripVec3& a, const SigmaMap& m, const Grid& g) {
  const double smu = std::sqrt(g.mu());
  StripVec3 out(a.x.nx, a.x.nz);
  StripField ay_z = sigma_dz(a.y, m, g);
  StripField ay_x = sigma_dx(a.y, m, g);
  StripField ax_z = sigma_dz(a.x, m, g);
  StripField az_x = sigma_dx(a.z, m, g);
  for (size_t i = 0; i < out.x.v.size(); ++i) {
    out.x.v[i] = -ay_z.v[i];
    out.y.v[i] = ax_z.v[i] - smu * az_x.v[i];
    out.z.v[i] = smu * ay_x.v[i];
  }
  return out;
}

HField vertical_average(const StripField& f, const SigmaMap& m, const Grid& g) {
  // (1/h) integral of (1+dz_sigma) f dz: the Jacobian 1+dz_sigma = h is
  // z-independent and cancels the 1/h prefactor exactly.
  (void)m;
  return integrate_z(f, g);
}

Traces traces(const StripVec3& a, const SigmaMap& m, const Grid& g) {
  Traces t;
  t.surf_x = surface_row(a.x);
  t.surf_y = surface_row(a.y);
  t.surf_z = surface_row(a.z);
  t.bott_x = bottom_row(a.x);
  t.bott_y = bottom_row(a.y);
  t.bott_z = bottom_row(a.z);

  const int nx = a.x.nx;
  const double smu = std::sqrt(g.mu());
  t.tangential = HVec(nx);
  t.surf_normal = HField(nx);
  t.bott_normal = HField(nx);
  for (int i = 0; i < nx; ++i) {
    t.tangential.x[i] = t.surf_x[i] / smu + m.eps * t.surf_z[i] * m.dx_zeta[i];
    t.tangential.y[i] = t.surf_y[i] / smu;
    t.surf_normal[i] = -m.eps * smu * m.dx_zeta[i] * t.surf_x[i] + t.surf_z[i];
    t.bott_normal[i] = -m.beta * smu * m.dx_b[i] * t.bott_x[i] + t.bott_z[i];
  }
  return t;
}

}  // namespace wavelab
