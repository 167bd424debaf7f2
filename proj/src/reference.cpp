#include "wavelab/reference.hpp"

#include <cmath>

namespace wavelab::ref {

void dft(const Grid& g, const double* f, cdouble* fh) {
  const int nx = g.nx();
  for (int m = 0; m < g.nmodes(); ++m) {
    cdouble acc(0.0, 0.0);
    for (int j = 0; j < nx; ++j) {
      double ang = -two_pi * m * j / nx;
      acc += f[j] * cdouble(std::cos(ang), std::sin(ang));
    }
    fh[m] = acc / static_cast<double>(nx);
  }
}

void idft(const Grid& g, const cdouble* fh, double* f) {
  const int nx = g.nx();
  for (int j = 0; j < nx; ++j) {
    double acc = fh[0].real();
    for (int m = 1; m < g.nmodes(); ++m) {
      double ang = two_pi * m * j / nx;
      double mult = (m == g.nmodes() - 1) ? 1.0 : 2.0;
      acc += mult * (fh[m].real() * std::cos(ang) - fh[m].imag() * std::sin(ang));
    }
    f[j] = acc;
  }
}

HField fourier_d_dx(const HField& f, const Grid& g) {
  std::vector<cdouble> fh(static_cast<size_t>(g.nmodes()));
  dft(g, f.v.data(), fh.data());
  for (int m = 0; m < g.nmodes(); ++m) fh[static_cast<size_t>(m)] *= cdouble(0.0, g.wavenumber(m));
  fh[static_cast<size_t>(g.nmodes()) - 1] = cdouble(fh[static_cast<size_t>(g.nmodes()) - 1].real(), 0.0);
  HField out(f.nx);
  idft(g, fh.data(), out.v.data());
  return out;
}

StripField cheb_d_dz(const StripField& f, const Grid& g) {
  StripField out(f.nx, f.nz);
  const auto& D = g.cheb_diff();
  for (int ix = 0; ix < f.nx; ++ix) {
    const double* col = f.column(ix);
    double* dst = out.column(ix);
    for (int i = 0; i < f.nz; ++i) {
      double s = 0.0;
      for (int j = 0; j < f.nz; ++j) s += D[static_cast<size_t>(i) * f.nz + j] * col[j];
      dst[i] = s;
    }
  }
  return out;
}

StripField cumint_to_surface(const StripField& f, const Grid& g) {
  StripField out(f.nx, f.nz);
  const auto& K = g.cheb_cumint();
  for (int ix = 0; ix < f.nx; ++ix) {
    const double* col = f.column(ix);
    double* dst = out.column(ix);
    for (int i = 0; i < f.nz; ++i) {
      double s = 0.0;
      for (int j = 0; j < f.nz; ++j) s += K[static_cast<size_t>(i) * f.nz + j] * col[j];
      dst[i] = s;
    }
  }
  return out;
}

StripField multiply(const StripField& a, const StripField& b) {
  StripField out(a.nx, a.nz);
  for (size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

}  // namespace wavelab::ref
