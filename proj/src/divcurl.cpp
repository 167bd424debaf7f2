#include "wavelab/divcurl.hpp"

#include <cmath>

#include "wavelab/parallel.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

DivCurlSolver::DivCurlSolver(const Grid& g)
    : grid_(g),
      phi_solver_(g, BcKind::dirichlet, BcKind::conormal),
      a_solver_(g, BcKind::conormal, BcKind::dirichlet) {}

DivCurlSolution DivCurlSolver::solve(const HField& zeta, const HField& b, const HField& psi,
                                     const StripVec3& omega, Vec2 tangential_mean,
                                     const Params& p, bool warm_start, bool enforce_divfree) {
  const Grid& g = grid_;
  const int nx = g.nx(), nz = g.nz();
  const double mu = g.mu();
  const double smu = std::sqrt(mu);

  SigmaMap m = build_sigma(zeta, b, p, g);

  DivCurlSolution sol;
  sol.tangential_mean = tangential_mean;

  {
    StripField d = sigma_div(omega, m, g);
    sol.omega_div_norm = linf(d);
    double scale = std::max(1.0, linf(omega));
    if (enforce_divfree && sol.omega_div_norm > tol_div * scale)
      throw VorticityNotDivergenceFree(sol.omega_div_norm);
  }

  sol.psi_tilde = psi_tilde_from_omega(omega, m, g);

  // Potential part: phi = psi at the surface (zero-mean gauge), bottom flux
  // mu*beta*(grad b . mean) carries the uniform-flow component over bathymetry.
  HField psi0 = psi;
  project_zero_mean(psi0);
  HField bottom_flux(nx);
  for (int i = 0; i < nx; ++i) bottom_flux[i] = mu * p.beta * m.dx_b[i] * tangential_mean[0];
  StripField zero_rhs(nx, nz);
  sol.phi = phi_solver_.solve(m, zero_rhs, psi0, bottom_flux,
                              warm_start && last_phi_ ? &*last_phi_ : nullptr, &sol.phi_stats);
  last_phi_ = sol.phi;

  // In-plane vortical part: stream potential A with -Laplacian^sigma A = mu omega_y,
  // free-slip-type conormal condition at the surface, A = 0 at the bottom.
  StripField a_rhs(nx, nz);
  parallel_for(nx, [&](int ix) {
    const double* w2 = omega.y.column(ix);
    double* r = a_rhs.column(ix);
    for (int j = 0; j < nz; ++j) r[j] = -mu * m.h[ix] * w2[j];
  });
  HField zero_h(nx);
  sol.a_stream = a_solver_.solve(m, a_rhs, zero_h, zero_h,
                                 warm_start && last_a_ ? &*last_a_ : nullptr, &sol.a_stats);
  last_a_ = sol.a_stream;

  // Transverse component: surface data sqrt(mu)(psi_tilde_x + mean_y),
  // integrated down with dz U_2 = -mu (1+dz_sigma) omega_x.
  HField psit_x = fourier_d_dx(sol.psi_tilde, g);
  StripField jwx = multiply_columns(omega.x, m.h);
  StripField u2 = cumint_to_surface(jwx, g);
  scale(u2, mu);
  parallel_for(nx, [&](int ix) {
    double surf = smu * (psit_x[ix] + tangential_mean[1]);
    double* col = u2.column(ix);
    for (int j = 0; j < nz; ++j) col[j] += surf;
  });

  StripField phi_x = sigma_dx(sol.phi, m, g);
  StripField phi_z = sigma_dz(sol.phi, m, g);
  StripField a_x = sigma_dx(sol.a_stream, m, g);
  StripField a_z = sigma_dz(sol.a_stream, m, g);

  sol.u_mu = StripVec3(nx, nz);
  parallel_for(nx, [&](int ix) {
    const double* px = phi_x.column(ix);
    const double* pz = phi_z.column(ix);
    const double* ax = a_x.column(ix);
    const double* az = a_z.column(ix);
    const double* t2 = u2.column(ix);
    double* u1 = sol.u_mu.x.column(ix);
    double* uy = sol.u_mu.y.column(ix);
    double* u3 = sol.u_mu.z.column(ix);
    for (int j = 0; j < nz; ++j) {
      u1[j] = smu * (tangential_mean[0] + px[j]) - az[j];
      uy[j] = t2[j];
      u3[j] = pz[j] + smu * ax[j];
    }
  });

  sol.traces = traces(sol.u_mu, m, g);
  sol.v_bar = HVec(nx);
  {
    StripField vx = sol.u_mu.x, vy = sol.u_mu.y;
    scale(vx, 1.0 / smu);
    scale(vy, 1.0 / smu);
    sol.v_bar.x = vertical_average(vx, m, g);
    sol.v_bar.y = vertical_average(vy, m, g);
  }
  return sol;
}

DivCurlSolution solve_divcurl(const HField& zeta, const HField& b, const HField& psi,
                              const StripVec3& omega, const Params& p, const Grid& g,
                              Vec2 tangential_mean) {
  DivCurlSolver solver(g);
  return solver.solve(zeta, b, psi, omega, tangential_mean, p, false);
}

StripField solve_laplace(const HField& zeta, const HField& b, const HField& psi, const Params& p,
                         const Grid& g, EllipticStats* stats) {
  SigmaMap m = build_sigma(zeta, b, p, g);
  HField psi0 = psi;
  project_zero_mean(psi0);
  HField zero_h(g.nx());
  StripField zero_rhs(g.nx(), g.nz());
  EllipticSolver solver(g, BcKind::dirichlet, BcKind::conormal);
  return solver.solve(m, zero_rhs, psi0, zero_h, nullptr, stats);
}

HField psi_tilde_from_omega(const StripVec3& omega, const SigmaMap& m, const Grid& g) {
  Traces t = traces(omega, m, g);
  return inv_laplacian(t.surf_normal, g);
}

double flux_identity_check(const DivCurlSolution& sol, const SigmaMap& m, const Grid& g) {
  HField hv = multiply(m.h, sol.v_bar.x);
  HField div = fourier_d_dx(hv, g);
  double r = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    r = std::max(r, std::abs(sol.traces.surf_normal[i] + g.mu() * div[i]));
  return r;
}

DivCurlResiduals divcurl_residuals(const DivCurlSolution& sol, const HField& psi,
                                   const StripVec3& omega, const SigmaMap& m, const Grid& g) {
  DivCurlResiduals r{};
  const double mu = g.mu();
  const double smu = std::sqrt(mu);

  StripVec3 curl = sigma_curl(sol.u_mu, m, g);
  double cres = 0.0;
  for (size_t i = 0; i < curl.x.v.size(); ++i) {
    cres = std::max(cres, std::abs(curl.x.v[i] - mu * omega.x.v[i]));
    cres = std::max(cres, std::abs(curl.y.v[i] - mu * omega.y.v[i]));
    cres = std::max(cres, std::abs(curl.z.v[i] - mu * omega.z.v[i]));
  }
  r.curl = cres;
  r.div = linf(sigma_div(sol.u_mu, m, g));

  HField psi0 = psi;
  project_zero_mean(psi0);
  HField gx = fourier_d_dx(psi0, g);
  HField gtx = fourier_d_dx(sol.psi_tilde, g);
  double tres = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    tres = std::max(tres, std::abs(sol.traces.tangential.x[i] -
                                   (gx[i] + sol.tangential_mean[0])));
    tres = std::max(tres, std::abs(sol.traces.tangential.y[i] -
                                   (gtx[i] + sol.tangential_mean[1])));
  }
  r.tangential = tres;
  r.bottom = linf(sol.traces.bott_normal);

  // (curl U)|surf . N = mu perp-div U_par, and the bottom analogue with the
  // bottom tangential part V_b + beta w_b grad b.
  Traces ct = traces(curl, m, g);
  HField dpar = fourier_d_dx(sol.traces.tangential.y, g);
  double sres = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    sres = std::max(sres, std::abs(ct.surf_normal[i] - mu * dpar[i]));
  r.surface_curl_identity = sres;

  HField bott_tan(g.nx());
  for (int i = 0; i < g.nx(); ++i)
    bott_tan[i] = sol.traces.bott_y[i] / smu;  // y-component of V_b + beta w_b grad b
  HField dbtan = fourier_d_dx(bott_tan, g);
  double bres = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    bres = std::max(bres, std::abs(ct.bott_normal[i] - mu * dbtan[i]));
  r.bottom_curl_identity = bres;
  return r;
}

double hb_datum_norm(const StripVec3& omega, const SigmaMap& m, const Grid& g) {
  Traces t = traces(omega, m, g);
  HField f = inv_frak_P(t.bott_normal, g.mu(), g);
  return l2_norm(f, g);
}

StripVec3 project_divergence_free(const StripVec3& omega, const SigmaMap& m, const Grid& g,
                                  double* violation) {
  const int nx = g.nx(), nz = g.nz();
  StripField d = sigma_div(omega, m, g);
  if (violation) *violation = linf(d);

  StripVec3 out = omega;
  if (linf(d) > 0.0) {
    // Subtract grad^sigma chi with Laplacian^sigma chi = div^sigma omega;
    // conormal surface row, pinned bottom row.
    StripField rhs = multiply_columns(d, m.h);
    HField zero_h(nx);
    EllipticSolver solver(g, BcKind::conormal, BcKind::dirichlet);
    StripField chi = solver.solve(m, rhs, zero_h, zero_h);
    StripVec3 gc = sigma_grad(chi, m, g);
    axpy(out.x, -1.0, gc.x);
    axpy(out.z, -1.0, gc.z);
  }

  // Remove the mean-flux constant <omega_z - sqrt(mu) sigma_x omega_x>, the
  // compatibility condition the torus imposes on curl-compatible data.
  const double smu = std::sqrt(g.mu());
  double c = 0.0;
  {
    StripField flux(nx, nz);
    for (int ix = 0; ix < nx; ++ix)
      for (int j = 0; j < nz; ++j)
        flux.at(ix, j) = out.z.at(ix, j) - smu * m.dx_sigma.at(ix, j) * out.x.at(ix, j);
    double acc = 0.0;
    for (int j = 0; j < nz; ++j) {
      double s = 0.0;
      for (int ix = 0; ix < nx; ++ix) s += flux.at(ix, j);
      acc += s / nx;
    }
    c = acc / nz;
  }
  for (double& v : out.z.v) v -= c;
  return out;
}

}  // namespace wavelab
