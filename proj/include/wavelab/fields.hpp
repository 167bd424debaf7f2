#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

namespace wavelab {

using cdouble = std::complex<double>;
using Vec2 = std::array<double, 2>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Scalar samples at the nx equispaced horizontal nodes of the torus.
struct HField {
  int nx = 0;
  std::vector<double> v;

  HField() = default;
  explicit HField(int n, double fill = 0.0) : nx(n), v(static_cast<size_t>(n), fill) {}

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }
  int size() const { return nx; }
};

// Two-component horizontal vector per node. The second component is kept even
// for y-invariant fields; the Coriolis term couples the two.
struct HVec {
  HField x, y;

  HVec() = default;
  explicit HVec(int n, double fx = 0.0, double fy = 0.0) : x(n, fx), y(n, fy) {}
  int size() const { return x.nx; }
};

// Scalar field on the flattened strip S = torus x [-1,0].
// Storage is column (z) contiguous: v[ix*nz + iz], iz = 0 at the bottom
// (z = -1), iz = nz-1 at the surface (z = 0).
struct StripField {
  int nx = 0, nz = 0;
  std::vector<double> v;

  StripField() = default;
  StripField(int nx_, int nz_, double fill = 0.0)
      : nx(nx_), nz(nz_), v(static_cast<size_t>(nx_) * static_cast<size_t>(nz_), fill) {}

  double& at(int ix, int iz) { return v[static_cast<size_t>(ix) * nz + iz]; }
  double at(int ix, int iz) const { return v[static_cast<size_t>(ix) * nz + iz]; }
  const double* column(int ix) const { return v.data() + static_cast<size_t>(ix) * nz; }
  double* column(int ix) { return v.data() + static_cast<size_t>(ix) * nz; }
  size_t size() const { return v.size(); }
};

// Three-component vector field on the strip (x, y, z components).
struct StripVec3 {
  StripField x, y, z;

  StripVec3() = default;
  StripVec3(int nx, int nz) : x(nx, nz), y(nx, nz), z(nx, nz) {}
};

// -- small arithmetic helpers ------------------------------------------------

inline double linf(const HField& f) {
  double m = 0.0;
  for (double a : f.v) m = std::max(m, std::abs(a));
  return m;
}

inline double linf(const HVec& f) { return std::max(linf(f.x), linf(f.y)); }

inline double linf(const StripField& f) {
  double m = 0.0;
  for (double a : f.v) m = std::max(m, std::abs(a));
  return m;
}

inline double linf(const StripVec3& f) {
  return std::max(linf(f.x), std::max(linf(f.y), linf(f.z)));
}

inline double min_value(const HField& f) {
  double m = f.v.empty() ? 0.0 : f.v[0];
  for (double a : f.v) m = std::min(m, a);
  return m;
}

template <class Field>
Field& axpy(Field& y, double a, const Field& x) {
  assert(y.v.size() == x.v.size());
  for (size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
  return y;
}

inline HVec& axpy(HVec& y, double a, const HVec& x) {
  axpy(y.x, a, x.x);
  axpy(y.y, a, x.y);
  return y;
}

inline StripVec3& axpy(StripVec3& y, double a, const StripVec3& x) {
  axpy(y.x, a, x.x);
  axpy(y.y, a, x.y);
  axpy(y.z, a, x.z);
  return y;
}

template <class Field>
Field& scale(Field& f, double a) {
  for (auto& t : f.v) t *= a;
  return f;
}

inline HVec perp(const HVec& u) {
  HVec r(u.size());
  for (int i = 0; i < u.size(); ++i) {
    r.x[i] = -u.y[i];
    r.y[i] = u.x[i];
  }
  return r;
}

inline bool all_finite(const std::vector<double>& v) {
  for (double a : v)
    if (!std::isfinite(a)) return false;
  return true;
}

}  // namespace wavelab
