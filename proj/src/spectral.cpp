#include "wavelab/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "wavelab/parallel.hpp"

namespace wavelab {

namespace {

// Apply a real mode-wise factor fac(m) to a horizontal field.
template <class Fac>
HField apply_multiplier(const HField& f, const Grid& g, Fac fac) {
  HField out(f.nx);
  std::vector<cdouble> fh(g.nmodes());
  g.fft(f.v.data(), fh.data());
  for (int m = 0; m < g.nmodes(); ++m) fh[m] *= fac(m);
  g.ifft(fh.data(), out.v.data());
  return out;
}

template <class Fac>
HField apply_complex_multiplier(const HField& f, const Grid& g, Fac fac) {
  HField out(f.nx);
  std::vector<cdouble> fh(g.nmodes());
  g.fft(f.v.data(), fh.data());
  for (int m = 0; m < g.nmodes(); ++m) fh[m] *= fac(m);
  // Nyquist coefficient must stay real for a clean c2r inverse.
  fh[g.nmodes() - 1] = cdouble(fh[g.nmodes() - 1].real(), 0.0);
  g.ifft(fh.data(), out.v.data());
  return out;
}

}  // namespace

double mean(const HField& f) {
  double s = 0.0;
  for (double a : f.v) s += a;
  return s / f.nx;
}

HField& project_zero_mean(HField& f) {
  double m = mean(f);
  for (double& a : f.v) a -= m;
  return f;
}

HField fourier_d_dx(const HField& f, const Grid& g) {
  return apply_complex_multiplier(f, g, [&](int m) { return cdouble(0.0, g.wavenumber(m)); });
}

HField dealias(const HField& f, const Grid& g) {
  int keep = g.dealias_keep();
  return apply_multiplier(f, g, [&](int m) { return m <= keep ? 1.0 : 0.0; });
}

HField frak_P(const HField& f, double mu, const Grid& g) {
  return apply_multiplier(f, g, [&](int m) {
    double k = g.wavenumber(m);
    return k / std::sqrt(1.0 + std::sqrt(mu) * k);
  });
}

HField inv_frak_P(const HField& f, double mu, const Grid& g) {
  return apply_multiplier(f, g, [&](int m) {
    if (m == 0) return 0.0;
    double k = g.wavenumber(m);
    return std::sqrt(1.0 + std::sqrt(mu) * k) / k;
  });
}

HField lambda_s(const HField& f, double s, const Grid& g) {
  return apply_multiplier(f, g, [&](int m) {
    double k = g.wavenumber(m);
    return std::pow(1.0 + k * k, 0.5 * s);
  });
}

HField inv_laplacian(const HField& f, const Grid& g) {
  return apply_multiplier(f, g, [&](int m) {
    if (m == 0) return 0.0;
    double k = g.wavenumber(m);
    return -1.0 / (k * k);
  });
}

HodgeParts hodge_decompose(const HVec& u, const Grid& g) {
  // y-invariant torus: grad psi = (psi_x, 0), perp-grad psi_tilde = (0, psi_tilde_x),
  // so the two potentials decouple component-wise.
  HodgeParts parts;
  parts.mean = {mean(u.x), mean(u.y)};
  parts.psi = apply_complex_multiplier(u.x, g, [&](int m) {
    if (m == 0) return cdouble(0.0, 0.0);
    return cdouble(0.0, -1.0 / g.wavenumber(m));  // 1/(ik)
  });
  parts.psi_tilde = apply_complex_multiplier(u.y, g, [&](int m) {
    if (m == 0) return cdouble(0.0, 0.0);
    return cdouble(0.0, -1.0 / g.wavenumber(m));
  });
  return parts;
}

HField grad_over_lap(const HVec& f, const Grid& g) {
  // div f = d/dx f_x under y-invariance; u = invlap(div f).
  return apply_complex_multiplier(f.x, g, [&](int m) {
    if (m == 0) return cdouble(0.0, 0.0);
    double k = g.wavenumber(m);
    return cdouble(0.0, k) * (-1.0 / (k * k));
  });
}

HField perp_over_lap(const HVec& f, const Grid& g) {
  // perp-div f = d/dx f_y under y-invariance.
  return apply_complex_multiplier(f.y, g, [&](int m) {
    if (m == 0) return cdouble(0.0, 0.0);
    double k = g.wavenumber(m);
    return cdouble(0.0, k) * (-1.0 / (k * k));
  });
}

double h_norm(const HField& f, double s, const Grid& g) {
  std::vector<cdouble> fh(g.nmodes());
  g.fft(f.v.data(), fh.data());
  // Parseval with the integral normalization: |f|_2^2 = period * sum |c_k|^2
  // over the full (two-sided) spectrum.
  double acc = 0.0;
  for (int m = 0; m < g.nmodes(); ++m) {
    double k = g.wavenumber(m);
    double w = std::pow(1.0 + k * k, s);
    double mult = (m == 0 || m == g.nmodes() - 1) ? 1.0 : 2.0;
    acc += mult * w * std::norm(fh[m]);
  }
  return std::sqrt(g.period() * acc);
}

double l2_norm(const HField& f, const Grid& g) { return h_norm(f, 0.0, g); }

StripField fourier_d_dx(const StripField& f, const Grid& g) {
  StripField out(f.nx, f.nz);
  parallel_for(f.nz, [&](int iz) {
    std::vector<double> row(f.nx), drow(f.nx);
    std::vector<cdouble> fh(g.nmodes());
    for (int ix = 0; ix < f.nx; ++ix) row[ix] = f.at(ix, iz);
    g.fft(row.data(), fh.data());
    for (int m = 0; m < g.nmodes(); ++m) fh[m] *= cdouble(0.0, g.wavenumber(m));
    fh[g.nmodes() - 1] = cdouble(fh[g.nmodes() - 1].real(), 0.0);
    g.ifft(fh.data(), drow.data());
    for (int ix = 0; ix < f.nx; ++ix) out.at(ix, iz) = drow[ix];
  });
  return out;
}

StripField cheb_d_dz(const StripField& f, const Grid& g) {
  StripField out(f.nx, f.nz);
  const auto& D = g.cheb_diff();
  const int nz = f.nz;
  parallel_for(f.nx, [&](int ix) {
    const double* col = f.column(ix);
    double* dst = out.column(ix);
    for (int i = 0; i < nz; ++i) {
      double s = 0.0;
      for (int j = 0; j < nz; ++j) s += D[static_cast<size_t>(i) * nz + j] * col[j];
      dst[i] = s;
    }
  });
  return out;
}

StripField dealias(const StripField& f, const Grid& g) {
  StripField out(f.nx, f.nz);
  int keep = g.dealias_keep();
  parallel_for(f.nz, [&](int iz) {
    std::vector<double> row(f.nx), orow(f.nx);
    std::vector<cdouble> fh(g.nmodes());
    for (int ix = 0; ix < f.nx; ++ix) row[ix] = f.at(ix, iz);
    g.fft(row.data(), fh.data());
    for (int m = keep + 1; m < g.nmodes(); ++m) fh[m] = 0.0;
    g.ifft(fh.data(), orow.data());
    for (int ix = 0; ix < f.nx; ++ix) out.at(ix, iz) = orow[ix];
  });
  return out;
}

StripField cumint_to_surface(const StripField& f, const Grid& g) {
  StripField out(f.nx, f.nz);
  const auto& K = g.cheb_cumint();
  const int nz = f.nz;
  parallel_for(f.nx, [&](int ix) {
    const double* col = f.column(ix);
    double* dst = out.column(ix);
    for (int i = 0; i < nz; ++i) {
      double s = 0.0;
      for (int j = 0; j < nz; ++j) s += K[static_cast<size_t>(i) * nz + j] * col[j];
      dst[i] = s;
    }
  });
  return out;
}

HField integrate_z(const StripField& f, const Grid& g) {
  HField out(f.nx);
  const auto& w = g.cc_weights();
  for (int ix = 0; ix < f.nx; ++ix) {
    double s = 0.0;
    const double* col = f.column(ix);
    for (int j = 0; j < f.nz; ++j) s += w[static_cast<size_t>(j)] * col[j];
    out[ix] = s;
  }
  return out;
}

HField surface_row(const StripField& f) {
  HField out(f.nx);
  for (int ix = 0; ix < f.nx; ++ix) out[ix] = f.at(ix, f.nz - 1);
  return out;
}

HField bottom_row(const StripField& f) {
  HField out(f.nx);
  for (int ix = 0; ix < f.nx; ++ix) out[ix] = f.at(ix, 0);
  return out;
}

double l2_strip(const StripField& f, const Grid& g) {
  const auto& w = g.cc_weights();
  double acc = 0.0;
  for (int ix = 0; ix < f.nx; ++ix) {
    const double* col = f.column(ix);
    for (int j = 0; j < f.nz; ++j) acc += w[static_cast<size_t>(j)] * col[j] * col[j];
  }
  return std::sqrt(acc * g.dx());
}

double l2_strip(const StripVec3& f, const Grid& g) {
  double a = l2_strip(f.x, g), b = l2_strip(f.y, g), c = l2_strip(f.z, g);
  return std::sqrt(a * a + b * b + c * c);
}

double eval_strip(const StripField& f, double x, double z, const Grid& g) {
  // Evaluate the trig interpolant in x at each z node, then the Chebyshev
  // interpolant in z.
  const int nz = f.nz;
  std::vector<double> row(f.nx), colvals(nz);
  std::vector<cdouble> fh(g.nmodes());
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < f.nx; ++ix) row[ix] = f.at(ix, iz);
    g.fft(row.data(), fh.data());
    double s = fh[0].real();
    for (int m = 1; m < g.nmodes(); ++m) {
      double kx = g.wavenumber(m) * x;
      double mult = (m == g.nmodes() - 1) ? 1.0 : 2.0;
      s += mult * (fh[m].real() * std::cos(kx) - fh[m].imag() * std::sin(kx));
    }
    colvals[iz] = s;
  }
  auto coef = g.cheb_coefficients(colvals.data());
  return Grid::cheb_eval(coef, z);
}

HField multiply(const HField& a, const HField& b) {
  HField out(a.nx);
  for (int i = 0; i < a.nx; ++i) out[i] = a[i] * b[i];
  return out;
}

StripField multiply(const StripField& a, const StripField& b) {
  StripField out(a.nx, a.nz);
  parallel_for(a.nx, [&](int ix) {
    const double* pa = a.column(ix);
    const double* pb = b.column(ix);
    double* po = out.column(ix);
    for (int j = 0; j < a.nz; ++j) po[j] = pa[j] * pb[j];
  });
  return out;
}

StripField multiply_columns(const StripField& a, const HField& b) {
  StripField out(a.nx, a.nz);
  parallel_for(a.nx, [&](int ix) {
    const double* pa = a.column(ix);
    double* po = out.column(ix);
    for (int j = 0; j < a.nz; ++j) po[j] = pa[j] * b[ix];
  });
  return out;
}

}  // namespace wavelab
