// Kernel benchmark: OpenMP path against the serial reference.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "wavelab/divcurl.hpp"
#include "wavelab/parallel.hpp"
#include "wavelab/reference.hpp"
#include "wavelab/spectral.hpp"

using namespace wavelab;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const int nx = 512, nz = 64;
  const double mu = 0.1;
  Grid g(nx, nz, mu);
  Params p = make_params(0.1, 0.05, mu, 1.0);

  StripField f(nx, nz);
  HField zeta(nx), b(nx), psi(nx);
  for (int i = 0; i < nx; ++i) {
    double x = g.x_nodes()[static_cast<size_t>(i)];
    zeta[i] = 0.4 * std::cos(x) + 0.2 * std::sin(2 * x);
    b[i] = 0.3 * std::sin(x);
    psi[i] = 0.5 * std::sin(x);
    for (int j = 0; j < nz; ++j)
      f.at(i, j) = std::sin(x) * std::cos(1.5 * g.z_nodes()[static_cast<size_t>(j)]);
  }
  SigmaMap m = build_sigma(zeta, b, p, g);

  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup");
  std::printf("(grid %dx%d, %d threads available)\n", nx, nz, threads::max_threads());

  auto line = [&](const char* name, const std::function<void()>& body, int reps) {
    threads::set_enabled(false);
    double ts = time_ms(body, reps);
    threads::set_enabled(true);
    double tp = time_ms(body, reps);
    std::printf("%-28s %12.3f %12.3f %7.2fx\n", name, ts, tp, ts / tp);
  };

  line("strip fourier d/dx", [&] { fourier_d_dx(f, g); }, 20);
  line("strip chebyshev d/dz", [&] { cheb_d_dz(f, g); }, 20);
  line("strip dealias", [&] { dealias(f, g); }, 20);
  line("sigma gradient", [&] { sigma_grad(f, m, g); }, 20);
  line("cumulative z-integral", [&] { cumint_to_surface(f, g); }, 20);
  line("laplace solve (64x32)", [&] {
    Grid gs(64, 32, mu);
    HField zs(64), bs(64), ps(64);
    for (int i = 0; i < 64; ++i) {
      double x = gs.x_nodes()[static_cast<size_t>(i)];
      zs[i] = 0.4 * std::cos(x);
      ps[i] = std::sin(x);
    }
    solve_laplace(zs, bs, ps, p, gs);
  }, 5);

  // Reference (naive dft) comparison at a smaller size, to keep it honest.
  {
    Grid gsm(128, 32, mu);
    HField h(128);
    for (int i = 0; i < 128; ++i) h[i] = std::sin(gsm.x_nodes()[static_cast<size_t>(i)]);
    threads::set_enabled(true);
    double tf = time_ms([&] { fourier_d_dx(h, gsm); }, 50);
    double tr = time_ms([&] { ref::fourier_d_dx(h, gsm); }, 50);
    std::printf("%-28s %12.3f %12.3f %7.2fx  (fft vs naive dft, nx=128)\n", "fourier d/dx vs reference",
                tr, tf, tr / tf);
  }
  return 0;
}
