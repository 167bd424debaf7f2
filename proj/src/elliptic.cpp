#include "wavelab/elliptic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "wavelab/parallel.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

namespace {

constexpr int kMaxIterations = 220;
constexpr int kDenseLimit = 16384;

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

}  // namespace

struct EllipticSolver::Impl {
  Grid grid;
  BcKind top, bottom;

  // Mean-geometry preconditioner: one LU-factored Chebyshev operator per
  // Fourier mode, built from hbar and the x-average of p_zz.
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> mode_lu;
  double hbar_built = -1.0;
  std::vector<double> czbar_built;

  // Dense fallback factorization, keyed by the exact geometry it was built for.
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> dense_lu;
  std::vector<double> dense_key_h, dense_key_sx;

  std::vector<double> fourier_diff;  // nodal d/dx matrix, consistent with fft path

  Impl(const Grid& g, BcKind t, BcKind b) : grid(g), top(t), bottom(b) {
    // Build the nodal Fourier differentiation matrix column by column so the
    // dense fallback reproduces the fft-based derivative exactly.
    const int nx = g.nx();
    fourier_diff.assign(static_cast<size_t>(nx) * nx, 0.0);
    HField e(nx);
    for (int j = 0; j < nx; ++j) {
      e.v.assign(nx, 0.0);
      e[j] = 1.0;
      HField de = fourier_d_dx(e, g);
      for (int i = 0; i < nx; ++i) fourier_diff[static_cast<size_t>(i) * nx + j] = de[i];
    }
  }

  void rebuild_preconditioner(const SigmaMap& m) {
    const int nz = grid.nz();
    const int nm = grid.nmodes();
    double hbar = mean(m.h);
    std::vector<double> czbar(nz, 0.0);
    for (int iz = 0; iz < nz; ++iz) {
      double s = 0.0;
      for (int ix = 0; ix < grid.nx(); ++ix) s += m.p_zz.at(ix, iz);
      czbar[iz] = s / grid.nx();
    }

    if (!mode_lu.empty() && hbar_built > 0.0) {
      double rel = std::abs(hbar - hbar_built) / hbar_built;
      for (int iz = 0; iz < nz; ++iz)
        rel = std::max(rel, std::abs(czbar[iz] - czbar_built[iz]) /
                                std::max(1e-12, std::abs(czbar_built[iz])));
      if (rel < 0.10) return;
    }

    const auto& D = grid.cheb_diff();
    Eigen::MatrixXd Dz(nz, nz);
    for (int i = 0; i < nz; ++i)
      for (int j = 0; j < nz; ++j) Dz(i, j) = D[static_cast<size_t>(i) * nz + j];
    Eigen::MatrixXd DcD = Dz * Eigen::VectorXd::Map(czbar.data(), nz).asDiagonal() * Dz;

    mode_lu.clear();
    mode_lu.reserve(nm);
    const int surf = nz - 1, bott = 0;
    for (int mmode = 0; mmode < nm; ++mmode) {
      double k = grid.wavenumber(mmode);
      Eigen::MatrixXd A = DcD;
      A.diagonal().array() -= grid.mu() * hbar * k * k;
      if (top == BcKind::dirichlet) {
        A.row(surf).setZero();
        A(surf, surf) = 1.0;
      } else {
        A.row(surf) = czbar[static_cast<size_t>(surf)] * Dz.row(surf);
      }
      if (bottom == BcKind::dirichlet) {
        A.row(bott).setZero();
        A(bott, bott) = 1.0;
      } else {
        A.row(bott) = czbar[static_cast<size_t>(bott)] * Dz.row(bott);
      }
      mode_lu.emplace_back(A);
    }
    hbar_built = hbar;
    czbar_built = czbar;
  }

  void apply_preconditioner(const std::vector<double>& r, std::vector<double>& out) const {
    const int nx = grid.nx(), nz = grid.nz(), nm = grid.nmodes();
    std::vector<cdouble> hat(static_cast<size_t>(nm) * nz);
    parallel_for(nz, [&](int iz) {
      std::vector<double> row(nx);
      std::vector<cdouble> fh(nm);
      for (int ix = 0; ix < nx; ++ix) row[ix] = r[static_cast<size_t>(ix) * nz + iz];
      grid.fft(row.data(), fh.data());
      for (int mmode = 0; mmode < nm; ++mmode) hat[static_cast<size_t>(mmode) * nz + iz] = fh[mmode];
    });
    parallel_for(nm, [&](int mmode) {
      Eigen::VectorXd re(nz), im(nz);
      for (int iz = 0; iz < nz; ++iz) {
        re(iz) = hat[static_cast<size_t>(mmode) * nz + iz].real();
        im(iz) = hat[static_cast<size_t>(mmode) * nz + iz].imag();
      }
      Eigen::VectorXd sre = mode_lu[static_cast<size_t>(mmode)].solve(re);
      Eigen::VectorXd sim = mode_lu[static_cast<size_t>(mmode)].solve(im);
      for (int iz = 0; iz < nz; ++iz)
        hat[static_cast<size_t>(mmode) * nz + iz] = cdouble(sre(iz), sim(iz));
    });
    out.assign(static_cast<size_t>(nx) * nz, 0.0);
    parallel_for(nz, [&](int iz) {
      std::vector<cdouble> fh(nm);
      std::vector<double> row(nx);
      for (int mmode = 0; mmode < nm; ++mmode) fh[mmode] = hat[static_cast<size_t>(mmode) * nz + iz];
      grid.ifft(fh.data(), row.data());
      for (int ix = 0; ix < nx; ++ix) out[static_cast<size_t>(ix) * nz + iz] = row[ix];
    });
  }

  StripField apply_operator(const SigmaMap& m, const StripField& u) const {
    const int nx = grid.nx(), nz = grid.nz();
    const double mu = grid.mu();
    StripField ux = fourier_d_dx(u, grid);
    StripField uz = cheb_d_dz(u, grid);

    StripField flux_x(nx, nz), flux_z(nx, nz);
    parallel_for(nx, [&](int ix) {
      const double* px = ux.column(ix);
      const double* pz = uz.column(ix);
      const double* sx = m.dx_sigma.column(ix);
      const double* czz = m.p_zz.column(ix);
      double* fx = flux_x.column(ix);
      double* fz = flux_z.column(ix);
      for (int j = 0; j < nz; ++j) {
        fx[j] = m.h[ix] * px[j] - sx[j] * pz[j];
        fz[j] = -mu * sx[j] * px[j] + czz[j] * pz[j];
      }
    });

    StripField dfx = fourier_d_dx(flux_x, grid);
    StripField dfz = cheb_d_dz(flux_z, grid);
    StripField r(nx, nz);
    parallel_for(nx, [&](int ix) {
      const double* a = dfx.column(ix);
      const double* b = dfz.column(ix);
      double* pr = r.column(ix);
      for (int j = 0; j < nz; ++j) pr[j] = mu * a[j] + b[j];
    });

    const int surf = nz - 1, bott = 0;
    for (int ix = 0; ix < nx; ++ix) {
      r.at(ix, surf) =
          (top == BcKind::dirichlet) ? u.at(ix, surf) : flux_z.at(ix, surf);
      r.at(ix, bott) =
          (bottom == BcKind::dirichlet) ? u.at(ix, bott) : flux_z.at(ix, bott);
    }
    return r;
  }

  void rebuild_dense(const SigmaMap& m) {
    if (!dense_key_h.empty() && dense_key_h == m.h.v && dense_key_sx == m.dx_sigma.v) return;
    const int nx = grid.nx(), nz = grid.nz();
    const int n = nx * nz;
    const double mu = grid.mu();
    const auto& Dz = grid.cheb_diff();
    const auto& Dx = fourier_diff;

    // X1 = Dx diag(h) Dx
    Eigen::MatrixXd X1(nx, nx);
    {
      Eigen::MatrixXd DxM(nx, nx);
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nx; ++j) DxM(i, j) = Dx[static_cast<size_t>(i) * nx + j];
      X1 = DxM * Eigen::VectorXd::Map(m.h.v.data(), nx).asDiagonal() * DxM;
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    auto idx = [nz](int ix, int iz) { return ix * nz + iz; };

    // mu d/dx(h d/dx u): block-diagonal in z
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) {
        double v = mu * X1(i, j);
        if (v == 0.0) continue;
        for (int zi = 0; zi < nz; ++zi) A(idx(i, zi), idx(j, zi)) += v;
      }
    // -mu d/dx(sigma_x d/dz u) and -mu d/dz(sigma_x d/dx u)
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nx; ++j) {
        double dxe = Dx[static_cast<size_t>(i) * nx + j];
        if (dxe == 0.0) continue;
        for (int mm = 0; mm < nz; ++mm)
          for (int nn = 0; nn < nz; ++nn) {
            double dze = Dz[static_cast<size_t>(mm) * nz + nn];
            if (dze == 0.0) continue;
            A(idx(i, mm), idx(j, nn)) +=
                -mu * dxe * m.dx_sigma.at(j, mm) * dze - mu * dze * m.dx_sigma.at(i, nn) * dxe;
          }
      }
    // d/dz(p_zz d/dz u): block-diagonal in x
    for (int i = 0; i < nx; ++i) {
      Eigen::MatrixXd DzM(nz, nz), Zi(nz, nz);
      for (int mm = 0; mm < nz; ++mm)
        for (int nn = 0; nn < nz; ++nn) DzM(mm, nn) = Dz[static_cast<size_t>(mm) * nz + nn];
      Eigen::VectorXd c(nz);
      for (int zi = 0; zi < nz; ++zi) c(zi) = m.p_zz.at(i, zi);
      Zi = DzM * c.asDiagonal() * DzM;
      for (int mm = 0; mm < nz; ++mm)
        for (int nn = 0; nn < nz; ++nn) A(idx(i, mm), idx(i, nn)) += Zi(mm, nn);
    }

    // Boundary rows.
    const int surf = nz - 1, bott = 0;
    for (int i = 0; i < nx; ++i) {
      for (int r = 0; r < 2; ++r) {
        int zi = (r == 0) ? surf : bott;
        BcKind kind = (r == 0) ? top : bottom;
        for (int j = 0; j < n; ++j) A(idx(i, zi), j) = 0.0;
        if (kind == BcKind::dirichlet) {
          A(idx(i, zi), idx(i, zi)) = 1.0;
        } else {
          // conormal row: -mu sigma_x d/dx u + p_zz d/dz u at (i, zi)
          for (int j = 0; j < nx; ++j)
            A(idx(i, zi), idx(j, zi)) += -mu * m.dx_sigma.at(i, zi) * Dx[static_cast<size_t>(i) * nx + j];
          for (int nn = 0; nn < nz; ++nn)
            A(idx(i, zi), idx(i, nn)) += m.p_zz.at(i, zi) * Dz[static_cast<size_t>(zi) * nz + nn];
        }
      }
    }

    dense_lu.emplace(A);
    dense_key_h = m.h.v;
    dense_key_sx = m.dx_sigma.v;
  }
};

EllipticSolver::EllipticSolver(const Grid& g, BcKind top, BcKind bottom)
    : impl_(std::make_unique<Impl>(g, top, bottom)) {}
EllipticSolver::~EllipticSolver() = default;
EllipticSolver::EllipticSolver(EllipticSolver&&) noexcept = default;
EllipticSolver& EllipticSolver::operator=(EllipticSolver&&) noexcept = default;

StripField EllipticSolver::apply(const SigmaMap& m, const StripField& u) const {
  return impl_->apply_operator(m, u);
}

StripField EllipticSolver::solve(const SigmaMap& m, const StripField& f, const HField& top_data,
                                 const HField& bottom_data, const StripField* initial_guess,
                                 EllipticStats* stats) {
  const Grid& g = impl_->grid;
  const int nx = g.nx(), nz = g.nz();
  const int n = nx * nz;
  const int surf = nz - 1, bott = 0;

  StripField rhs = f;
  for (int ix = 0; ix < nx; ++ix) {
    rhs.at(ix, surf) = top_data[ix];
    rhs.at(ix, bott) = bottom_data[ix];
  }

  double bnorm = l2(rhs.v);
  EllipticStats st;
  if (bnorm == 0.0) {
    st.converged = true;
    if (stats) *stats = st;
    return StripField(nx, nz);
  }

  impl_->rebuild_preconditioner(m);

  StripField x = initial_guess ? *initial_guess : StripField(nx, nz);
  StripField ax = impl_->apply_operator(m, x);
  std::vector<double> r(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)] = rhs.v[static_cast<size_t>(i)] - ax.v[static_cast<size_t>(i)];

  double beta = l2(r);
  const double tol_abs = tol_ell * bnorm;
  if (beta <= tol_abs) {
    st.converged = true;
    st.rel_residual = beta / bnorm;
    if (stats) *stats = st;
    return x;
  }

  // Right-preconditioned GMRES, modified Gram-Schmidt, Givens updates.
  const int maxit = std::min(kMaxIterations, n);
  std::vector<std::vector<double>> V;
  V.reserve(static_cast<size_t>(maxit) + 1);
  {
    std::vector<double> v0(r);
    for (double& a : v0) a /= beta;
    V.push_back(std::move(v0));
  }
  std::vector<std::vector<double>> H;  // H[j] has j+2 entries
  std::vector<double> cs, sn, gvec;
  gvec.push_back(beta);
  double resnorm = beta;
  int j = 0;
  std::vector<double> z(static_cast<size_t>(n)), w(static_cast<size_t>(n));
  StripField ztmp(nx, nz);
  for (; j < maxit; ++j) {
    impl_->apply_preconditioner(V[static_cast<size_t>(j)], z);
    ztmp.v = z;
    StripField az = impl_->apply_operator(m, ztmp);
    w = az.v;

    std::vector<double> hcol(static_cast<size_t>(j) + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      double dot = 0.0;
      const auto& vi = V[static_cast<size_t>(i)];
      for (int t = 0; t < n; ++t) dot += vi[static_cast<size_t>(t)] * w[static_cast<size_t>(t)];
      hcol[static_cast<size_t>(i)] = dot;
      for (int t = 0; t < n; ++t) w[static_cast<size_t>(t)] -= dot * vi[static_cast<size_t>(t)];
    }
    double hlast = l2(w);
    hcol[static_cast<size_t>(j) + 1] = hlast;

    // apply accumulated rotations
    for (int i = 0; i < j; ++i) {
      double t = cs[static_cast<size_t>(i)] * hcol[static_cast<size_t>(i)] +
                 sn[static_cast<size_t>(i)] * hcol[static_cast<size_t>(i) + 1];
      hcol[static_cast<size_t>(i) + 1] = -sn[static_cast<size_t>(i)] * hcol[static_cast<size_t>(i)] +
                                         cs[static_cast<size_t>(i)] * hcol[static_cast<size_t>(i) + 1];
      hcol[static_cast<size_t>(i)] = t;
    }
    double denom = std::hypot(hcol[static_cast<size_t>(j)], hlast);
    double c = denom == 0.0 ? 1.0 : hcol[static_cast<size_t>(j)] / denom;
    double s = denom == 0.0 ? 0.0 : hlast / denom;
    cs.push_back(c);
    sn.push_back(s);
    hcol[static_cast<size_t>(j)] = c * hcol[static_cast<size_t>(j)] + s * hlast;
    hcol[static_cast<size_t>(j) + 1] = 0.0;
    gvec.push_back(-s * gvec[static_cast<size_t>(j)]);
    gvec[static_cast<size_t>(j)] *= c;
    H.push_back(std::move(hcol));
    resnorm = std::abs(gvec[static_cast<size_t>(j) + 1]);
    if (resnorm <= tol_abs || hlast == 0.0) {
      ++j;
      break;
    }
    for (double& a : w) a /= hlast;
    V.push_back(w);
  }

  // back substitution for y, then x += Minv(V y)
  int dim = j;
  std::vector<double> y(static_cast<size_t>(dim), 0.0);
  for (int i = dim - 1; i >= 0; --i) {
    double s = gvec[static_cast<size_t>(i)];
    for (int t = i + 1; t < dim; ++t) s -= H[static_cast<size_t>(t)][static_cast<size_t>(i)] * y[static_cast<size_t>(t)];
    y[static_cast<size_t>(i)] = s / H[static_cast<size_t>(i)][static_cast<size_t>(i)];
  }
  std::vector<double> acc(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < dim; ++i)
    for (int t = 0; t < n; ++t) acc[static_cast<size_t>(t)] += y[static_cast<size_t>(i)] * V[static_cast<size_t>(i)][static_cast<size_t>(t)];
  impl_->apply_preconditioner(acc, z);
  for (int t = 0; t < n; ++t) x.v[static_cast<size_t>(t)] += z[static_cast<size_t>(t)];

  StripField check = impl_->apply_operator(m, x);
  double final_res = 0.0;
  for (int t = 0; t < n; ++t) {
    double d = rhs.v[static_cast<size_t>(t)] - check.v[static_cast<size_t>(t)];
    final_res += d * d;
  }
  final_res = std::sqrt(final_res);
  st.iterations = dim;
  st.rel_residual = final_res / bnorm;
  st.converged = final_res <= 2.0 * tol_abs;

  if (!st.converged && n <= kDenseLimit) {
    impl_->rebuild_dense(m);
    Eigen::VectorXd b = Eigen::VectorXd::Map(rhs.v.data(), n);
    Eigen::VectorXd sol = impl_->dense_lu->solve(b);
    for (int t = 0; t < n; ++t) x.v[static_cast<size_t>(t)] = sol(t);
    StripField chk = impl_->apply_operator(m, x);
    double res2 = 0.0;
    for (int t = 0; t < n; ++t) {
      double d = rhs.v[static_cast<size_t>(t)] - chk.v[static_cast<size_t>(t)];
      res2 += d * d;
    }
    st.used_dense_fallback = true;
    st.rel_residual = std::sqrt(res2) / bnorm;
    st.converged = st.rel_residual <= 1e-6;
  }

  if (stats) *stats = st;
  if (!st.converged) throw EllipticFailure(st);
  return x;
}

StripField EllipticSolver::solve_dense(const SigmaMap& m, const StripField& f,
                                       const HField& top_data, const HField& bottom_data,
                                       EllipticStats* stats) {
  const Grid& g = impl_->grid;
  const int nx = g.nx(), nz = g.nz();
  const int n = nx * nz;
  if (n > kDenseLimit) throw std::invalid_argument("solve_dense: system too large");
  const int surf = nz - 1, bott = 0;

  StripField rhs = f;
  for (int ix = 0; ix < nx; ++ix) {
    rhs.at(ix, surf) = top_data[ix];
    rhs.at(ix, bott) = bottom_data[ix];
  }
  impl_->rebuild_dense(m);
  Eigen::VectorXd b = Eigen::VectorXd::Map(rhs.v.data(), n);
  Eigen::VectorXd sol = impl_->dense_lu->solve(b);
  StripField x(nx, nz);
  for (int t = 0; t < n; ++t) x.v[static_cast<size_t>(t)] = sol(t);

  EllipticStats st;
  st.used_dense_fallback = true;
  StripField chk = impl_->apply_operator(m, x);
  double res2 = 0.0, bn = 0.0;
  for (int t = 0; t < n; ++t) {
    double d = rhs.v[static_cast<size_t>(t)] - chk.v[static_cast<size_t>(t)];
    res2 += d * d;
    bn += rhs.v[static_cast<size_t>(t)] * rhs.v[static_cast<size_t>(t)];
  }
  st.rel_residual = bn > 0.0 ? std::sqrt(res2 / bn) : 0.0;
  st.converged = st.rel_residual <= 1e-6;
  if (stats) *stats = st;
  return x;
}

}  // namespace wavelab
