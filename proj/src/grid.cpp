#include "wavelab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace wavelab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

struct Grid::Impl {
  int nx = 0, nz = 0;
  double mu = 0.0, period = two_pi;
  std::vector<double> xs, zs;
  std::vector<double> diff, cumint, weights;        // nz x nz (weights: nz)
  std::vector<double> vals_to_coef, coef_to_vals;   // nz x nz
  fftw_plan fwd = nullptr, bwd = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

Grid::Grid(int nx, int nz, double mu, double period) {
  if (nx < 8 || !is_power_of_two(nx)) throw std::invalid_argument("grid: nx must be a power of two >= 8");
  if (nz < 4) throw std::invalid_argument("grid: nz must be >= 4");
  if (!(mu > 0.0)) throw std::invalid_argument("grid: mu must be positive");
  if (!(period > 0.0)) throw std::invalid_argument("grid: period must be positive");

  auto impl = std::make_shared<Impl>();
  impl->nx = nx;
  impl->nz = nz;
  impl->mu = mu;
  impl->period = period;

  impl->xs.resize(nx);
  for (int i = 0; i < nx; ++i) impl->xs[i] = period * i / nx;

  // Lobatto nodes mapped to [-1,0]; index 0 is the bottom.
  const int N = nz - 1;
  impl->zs.resize(nz);
  for (int i = 0; i < nz; ++i) impl->zs[i] = 0.5 * (std::cos((N - i) * M_PI / N) - 1.0);

  // Differentiation matrix in Trefethen ordering (node j = cos(j*pi/N)),
  // then permuted to bottom-up indexing and scaled by dz = dy/2.
  std::vector<double> y(nz), c(nz);
  for (int j = 0; j <= N; ++j) {
    y[j] = std::cos(j * M_PI / N);
    c[j] = (j == 0 || j == N) ? 2.0 : 1.0;
  }
  std::vector<double> D(static_cast<size_t>(nz) * nz, 0.0);
  for (int i = 0; i <= N; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      double d = (c[i] / c[j]) * sgn / (y[i] - y[j]);
      D[static_cast<size_t>(i) * nz + j] = d;
      row_sum += d;
    }
    D[static_cast<size_t>(i) * nz + i] = -row_sum;  // negative sum trick
  }
  impl->diff.assign(static_cast<size_t>(nz) * nz, 0.0);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j)
      impl->diff[static_cast<size_t>(i) * nz + j] = 2.0 * D[static_cast<size_t>(N - i) * nz + (N - j)];

  // Values -> Chebyshev coefficients (DCT-I with endpoint halving), in the
  // bottom-up node indexing; T_n is evaluated in y = 2z+1.
  impl->vals_to_coef.assign(static_cast<size_t>(nz) * nz, 0.0);
  impl->coef_to_vals.assign(static_cast<size_t>(nz) * nz, 0.0);
  for (int n = 0; n <= N; ++n) {
    double cn = (n == 0 || n == N) ? 2.0 : 1.0;
    for (int i = 0; i < nz; ++i) {
      int j = N - i;  // Trefethen index of node i
      double cj = (j == 0 || j == N) ? 2.0 : 1.0;
      impl->vals_to_coef[static_cast<size_t>(n) * nz + i] =
          2.0 / (N * cn * cj) * std::cos(n * j * M_PI / N);
      impl->coef_to_vals[static_cast<size_t>(i) * nz + n] = std::cos(n * j * M_PI / N);
    }
  }

  // Quadrature weights: integrate the interpolant, integral_{-1}^0 = (1/2) integral_{-1}^1 dy.
  impl->weights.assign(nz, 0.0);
  for (int n = 0; n <= N; n += 2) {
    double tn = (n == 0) ? 2.0 : 2.0 / (1.0 - n * n);  // integral of T_n over [-1,1]
    for (int i = 0; i < nz; ++i)
      impl->weights[i] += 0.5 * tn * impl->vals_to_coef[static_cast<size_t>(n) * nz + i];
  }

  // Cumulative integral matrix: f |-> F with F(z) = integral_z^0 f.
  // Antiderivative in coefficient space, G(1) - G(y), scaled by dz = dy/2.
  {
    std::vector<double> K(static_cast<size_t>(nz) * nz, 0.0);
    std::vector<double> a(nz), b(static_cast<size_t>(nz) + 1);
    for (int col = 0; col < nz; ++col) {
      for (int n = 0; n < nz; ++n) a[n] = impl->vals_to_coef[static_cast<size_t>(n) * nz + col];
      std::fill(b.begin(), b.end(), 0.0);
      b[1] = a[0] - (N >= 2 ? 0.5 * a[2] : 0.0);
      for (int n = 2; n <= N + 1; ++n) {
        double lo = a[n - 1];
        double hi = (n + 1 <= N) ? a[n + 1] : 0.0;
        b[n] = (lo - hi) / (2.0 * n);
      }
      double g1 = 0.0;
      for (int n = 1; n <= N + 1; ++n) g1 += b[n];  // T_n(1) = 1
      for (int i = 0; i < nz; ++i) {
        double yi = 2.0 * impl->zs[i] + 1.0;
        // Clenshaw for sum b_n T_n(yi)
        double u1 = 0.0, u2 = 0.0;
        for (int n = N + 1; n >= 1; --n) {
          double u = 2.0 * yi * u1 - u2 + b[n];
          u2 = u1;
          u1 = u;
        }
        double g = yi * u1 - u2;  // sum_{n>=1} b_n T_n(yi)
        K[static_cast<size_t>(i) * nz + col] = 0.5 * (g1 - g);
      }
    }
    impl->cumint = std::move(K);
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<double> rbuf(nx);
    std::vector<cdouble> cbuf(nx / 2 + 1);
    impl->fwd = fftw_plan_dft_r2c_1d(nx, rbuf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl->bwd = fftw_plan_dft_c2r_1d(nx, reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  impl_ = std::move(impl);
}

int Grid::nx() const { return impl_->nx; }
int Grid::nz() const { return impl_->nz; }
double Grid::mu() const { return impl_->mu; }
double Grid::period() const { return impl_->period; }
double Grid::dx() const { return impl_->period / impl_->nx; }
const std::vector<double>& Grid::x_nodes() const { return impl_->xs; }
const std::vector<double>& Grid::z_nodes() const { return impl_->zs; }
int Grid::nmodes() const { return impl_->nx / 2 + 1; }
double Grid::wavenumber(int m) const { return m * two_pi / impl_->period; }
int Grid::dealias_keep() const { return impl_->nx / 3; }

void Grid::fft(const double* f, cdouble* fh) const {
  fftw_execute_dft_r2c(impl_->fwd, const_cast<double*>(f), reinterpret_cast<fftw_complex*>(fh));
  const double s = 1.0 / impl_->nx;
  for (int m = 0; m < nmodes(); ++m) fh[m] *= s;
}

void Grid::ifft(const cdouble* fh, double* f) const {
  // c2r destroys its input; work on a copy.
  std::vector<cdouble> tmp(fh, fh + nmodes());
  fftw_execute_dft_c2r(impl_->bwd, reinterpret_cast<fftw_complex*>(tmp.data()), f);
}

const std::vector<double>& Grid::cheb_diff() const { return impl_->diff; }
const std::vector<double>& Grid::cheb_cumint() const { return impl_->cumint; }
const std::vector<double>& Grid::cc_weights() const { return impl_->weights; }

std::vector<double> Grid::cheb_coefficients(const double* column) const {
  const int nz = impl_->nz;
  std::vector<double> a(nz, 0.0);
  for (int n = 0; n < nz; ++n) {
    double s = 0.0;
    for (int i = 0; i < nz; ++i) s += impl_->vals_to_coef[static_cast<size_t>(n) * nz + i] * column[i];
    a[n] = s;
  }
  return a;
}

double Grid::cheb_eval(const std::vector<double>& coef, double z) {
  double y = 2.0 * z + 1.0;
  double u1 = 0.0, u2 = 0.0;
  for (int n = static_cast<int>(coef.size()) - 1; n >= 1; --n) {
    double u = 2.0 * y * u1 - u2 + coef[static_cast<size_t>(n)];
    u2 = u1;
    u1 = u;
  }
  return coef[0] + y * u1 - u2;
}

}  // namespace wavelab
